#include "sharpconst/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sharpconst/errors.hpp"

namespace sharpconst::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

double log_sphere_area(int n) {
  return std::log(2.0) + 0.5 * n * std::log(kPi) - std::lgamma(0.5 * n);
}

// log of Gamma(pq/(q-p)) / (Gamma(q/(q-p)) Gamma(p(q-1)/(q-p))), q > p.
double log_apq_ratio(double p, double q) {
  const double d = q - p;
  return std::lgamma(p * q / d) - std::lgamma(q / d) - std::lgamma(p * (q - 1.0) / d);
}

}  // namespace

double pow0(double x, double y) {
  if (x < 0.0) throw DomainError("pow0: negative base");
  if (y == 0.0) return 1.0;
  return std::pow(x, y);
}

// ---------------------------------------------------------------------------
// HSParams

HSParams::HSParams(double p, double a, double b, int n) : p_(p), a_(a), b_(b), n_(n) {
  std::string reason;
  if (!valid(p, a, b, n, &reason)) throw DomainError("HSParams: " + reason);
}

bool HSParams::valid(double p, double a, double b, int n, std::string* reason) {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  if (n < 2) return fail("dimension n must be >= 2");
  if (!(p >= 1.0)) return fail("condition 1 <= p violated");
  if (!(p < n)) return fail("condition p < n violated");
  if (!(a >= 0.0)) return fail("condition 0 <= a violated");
  if (!(a < n - p)) return fail("condition a < n - p violated");
  // Closed lower bound a n/(n-p); a tiny relative slack absorbs the rounding of
  // that quotient when callers pass it back in as b.
  const double b_low = a * n / (n - p);
  if (!(b >= b_low - 1e-14 * std::max(1.0, std::abs(b_low)))) return fail("condition b >= a n/(n-p) violated");
  if (!(b <= a + p)) return fail("condition b <= a + p violated");
  return true;
}

double HSParams::critical_q() const noexcept { return (n_ - b_) * p_ / (n_ - p_ - a_); }

// ---------------------------------------------------------------------------
// MatrixForm

MatrixForm::MatrixForm(int n) : n_(n), a_(static_cast<size_t>(n * n)) {
  if (n < 1) throw DomainError("MatrixForm: dimension must be positive");
}

MatrixForm::MatrixForm(int n, std::vector<Complex> row_major) : n_(n), a_(std::move(row_major)) {
  if (n < 1) throw DomainError("MatrixForm: dimension must be positive");
  if (a_.size() != static_cast<size_t>(n * n)) throw DomainError("MatrixForm: expected n*n entries");
}

MatrixForm MatrixForm::real(int n, const std::vector<double>& row_major) {
  std::vector<Complex> c(row_major.begin(), row_major.end());
  return MatrixForm(n, std::move(c));
}

MatrixForm::Complex MatrixForm::trace() const noexcept {
  Complex t{0.0, 0.0};
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

MatrixForm::Complex MatrixForm::evaluate(const double* w) const noexcept {
  Complex s{0.0, 0.0};
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (w[i] * w[j]);
  return s;
}

MatrixForm MatrixForm::transposed() const {
  MatrixForm t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(i, j) = (*this)(j, i);
  return t;
}

MatrixForm MatrixForm::scaled(double c) const {
  MatrixForm t = *this;
  for (auto& v : t.a_) v *= c;
  return t;
}

// ---------------------------------------------------------------------------
// Sphere maximization

namespace {

double abs_form_2d(const MatrixForm& a, double theta) {
  const double w[2] = {std::cos(theta), std::sin(theta)};
  return std::abs(a.evaluate(w));
}

double sphere_max_2d(const MatrixForm& a) {
  constexpr int kGrid = 4096;
  const double step = kPi / kGrid;  // the form is even in w, so [0, pi) suffices
  int best = 0;
  double best_val = -1.0;
  for (int k = 0; k < kGrid; ++k) {
    const double v = abs_form_2d(a, k * step);
    if (v > best_val) best_val = v, best = k;
  }
  // Golden-section refinement on the bracketing cell pair.
  double lo = (best - 1) * step, hi = (best + 1) * step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = abs_form_2d(a, x1), f2 = abs_form_2d(a, x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo), f2 = abs_form_2d(a, x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo), f1 = abs_form_2d(a, x1);
    }
  }
  return std::max({best_val, f1, f2});
}

double sphere_max_nd(const MatrixForm& a) {
  const int n = a.n();
  Eigen::MatrixXd s(n, n), t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      s(i, j) = 0.5 * (a(i, j).real() + a(j, i).real());
      t(i, j) = 0.5 * (a(i, j).imag() + a(j, i).imag());
    }

  // f(w) = (w'Sw)^2 + (w'Tw)^2 is the squared modulus on the sphere.
  auto value = [&](const Eigen::VectorXd& w) {
    const double x = w.dot(s * w), y = w.dot(t * w);
    return x * x + y * y;
  };
  auto ascend = [&](Eigen::VectorXd w) {
    w.normalize();
    double f = value(w);
    double step = 0.25;
    for (int it = 0; it < 2000 && step > 1e-16; ++it) {
      const double x = w.dot(s * w), y = w.dot(t * w);
      Eigen::VectorXd g = 4.0 * x * (s * w) + 4.0 * y * (t * w);
      g -= g.dot(w) * w;
      if (g.norm() < 1e-15) break;
      Eigen::VectorXd trial = (w + step * g).normalized();
      const double ft = value(trial);
      if (ft > f) {
        w = trial, f = ft;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    return f;
  };

  std::vector<Eigen::VectorXd> starts;
  for (const Eigen::MatrixXd* m : {&s, &t}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*m);
    for (int k = 0; k < n; ++k) starts.push_back(es.eigenvectors().col(k));
  }
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> normal;
  for (int r = 0; r < 16; ++r) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = normal(rng);
    starts.push_back(w);
  }

  double best = 0.0;
  for (const auto& w : starts) {
    if (w.norm() == 0.0) continue;
    best = std::max(best, ascend(w));
  }
  return std::sqrt(best);
}

}  // namespace

double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area: n must be >= 1");
  return std::exp(log_sphere_area(n));
}

double sphere_max_abs(const MatrixForm& a) {
  if (a.n() == 1) return std::abs(a(0, 0));
  return a.n() == 2 ? sphere_max_2d(a) : sphere_max_nd(a);
}

double qf_best_constant(const MatrixForm& a) {
  const int n = a.n();
  if (n < 2) throw DomainError("qf_best_constant: n must be >= 2");
  if (!a.trace_is_zero()) {
    std::ostringstream os;
    os << "qf_best_constant: no finite constant exists; the estimate holds if and only if "
          "tr A = 0 (got tr A = "
       << a.trace() << ")";
    throw NoFiniteConstant(os.str());
  }
  const double log_c = -0.5 * n * std::log(4.0 * kPi) - std::lgamma(0.5 * n + 1.0);
  return std::exp(log_c) * sphere_max_abs(a);
}

double z10_constant(int n, double m, double max_abs_ratio) {
  if (n < 1) throw DomainError("z10_constant: n must be >= 1");
  if (!(m > 0.0))
    throw DomainError("z10_constant: m must be > 0 (m in (-n/2, 0] is not supported)");
  if (!(max_abs_ratio >= 0.0)) throw DomainError("z10_constant: ratio must be >= 0");
  if (max_abs_ratio == 0.0) return 0.0;
  const double log_c = -0.5 * n * std::log(4.0 * kPi) + std::lgamma(m) - std::lgamma(0.5 * n + m);
  return std::exp(log_c) * max_abs_ratio;
}

double capacitary_Apq(double p, double q) {
  if (!(p >= 1.0)) throw DomainError("capacitary_Apq: p must be >= 1");
  if (!(q >= p)) throw DomainError("capacitary_Apq: q must be >= p");
  if (q == p) return p * pow0(p - 1.0, (1.0 - p) / p);
  return std::exp((1.0 / p - 1.0 / q) * log_apq_ratio(p, q));
}

double isocap_constant(const HSParams& h) {
  const double p = h.p(), a = h.a(), b = h.b();
  const int n = h.n();
  const double kappa = (n - p - a) / (n - b);
  const double first = pow0((p - 1.0) / (n - p - a), p - 1.0);
  const double log_rest = (b - p - a) / (n - b) * log_sphere_area(n) - kappa * std::log(n - b);
  return first * std::exp(log_rest);
}

double hs_constant(const HSParams& h, double q) {
  if (!(q >= h.p())) throw DomainError("hs_constant: q must be >= p");
  // Product of A_{p,q} and the p-th root of the isocapacitary constant; the
  // third factor is expanded in log-space so b = a + p needs no special case.
  const double p = h.p(), a = h.a(), b = h.b();
  const int n = h.n();
  const double second = pow0((p - 1.0) / (n - p - a), 1.0 - 1.0 / p);
  const double log_third = -(p + a - b) / ((n - b) * p) * log_sphere_area(n) -
                           (n - p - a) / ((n - b) * p) * std::log(n - b);
  return capacitary_Apq(p, q) * second * std::exp(log_third);
}

double hs_constant_critical(const HSParams& h) { return hs_constant(h, h.critical_q()); }

double sobolev_constant(int m) {
  if (m < 3) throw DomainError("sobolev_constant: dimension must be >= 3");
  const double n = m - 1.0;
  const double log_s = (n + 2.0) / (n + 1.0) * std::log(kPi) + std::log(n * n - 1.0) -
                       n / (n + 1.0) * std::log(4.0) - 2.0 / (n + 1.0) * std::lgamma(0.5 * n + 1.0);
  return std::exp(log_s);
}

double hardy_remainder_constant(int n) {
  if (n < 2) throw DomainError("hardy_remainder_constant: n must be >= 2");
  const double nn = n;
  const double log_c = nn / (nn + 1.0) * std::log(kPi) + std::log(nn * nn - 1.0) - std::log(4.0) -
                       2.0 / (nn + 1.0) * std::lgamma(0.5 * nn + 1.0);
  return std::exp(log_c);
}

}  // namespace sharpconst::specfun
