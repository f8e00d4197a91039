#include "sharpconst/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sharpconst/errors.hpp"
#include "sharpconst/specfun.hpp"

namespace sharpconst::quad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 15-point abscissae (positive half) and weights; Gauss 7-point weights
// sit at the odd Kronrod nodes.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a = 0.0, b = 0.0;
  Values value, error, abs_value;
  double priority = 0.0;
  bool refinable = true;
};

// One Gauss-Kronrod panel with QUADPACK's error scaling.
Piece gk15(const VectorFn& f, int m, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Values fv[15];
  fv[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }
  Values k = kWgk[7] * fv[7];
  Values g = kWg[3] * fv[7];
  Values kabs = kWgk[7] * fv[7].cwiseAbs();
  for (int j = 0; j < 7; ++j) {
    const Values s = fv[j] + fv[14 - j];
    k += kWgk[j] * s;
    kabs += kWgk[j] * (fv[j].cwiseAbs() + fv[14 - j].cwiseAbs());
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  const Values mean = 0.5 * k;
  Values asc = kWgk[7] * (fv[7] - mean).cwiseAbs();
  for (int j = 0; j < 7; ++j)
    asc += kWgk[j] * ((fv[j] - mean).cwiseAbs() + (fv[14 - j] - mean).cwiseAbs());
  Piece p;
  p.a = a;
  p.b = b;
  p.value = h * k;
  p.abs_value = std::abs(h) * kabs;
  p.error = Values::Zero(m);
  for (int i = 0; i < m; ++i) {
    const double resasc = std::abs(h) * asc(i);
    double err = std::abs(h * (k(i) - g(i)));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (p.abs_value(i) > std::numeric_limits<double>::min() / (50.0 * kEps))
      err = std::max(50.0 * kEps * p.abs_value(i), err);
    if (!std::isfinite(k(i))) throw DomainError("integrate: integrand is not finite");
    p.error(i) = err;
  }
  const double lo = std::min(a, b), hi = std::max(a, b);
  p.refinable = (hi - lo) > 1e-14 * std::max(std::abs(lo), std::abs(hi)) && (hi - lo) > 1e-300;
  return p;
}

double tolerance(const QuadOptions& o, double abs_total) {
  return std::max(o.abs_tol, o.rel_tol * abs_total);
}

double priority_of(const Piece& p, const Values& abs_total, const QuadOptions& o) {
  if (!p.refinable) return -1.0;
  double pr = 0.0;
  for (int i = 0; i < p.error.size(); ++i) pr = std::max(pr, p.error(i) / tolerance(o, abs_total(i)));
  return pr;
}

// Adaptive refinement over an initial list of finite intervals.
VectorResult adapt(const VectorFn& f, int m, const std::vector<double>& cuts, const QuadOptions& o) {
  std::vector<Piece> heap;
  long evals = 0;
  Values total = Values::Zero(m), err_total = Values::Zero(m), abs_total = Values::Zero(m);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] == cuts[i]) continue;
    heap.push_back(gk15(f, m, cuts[i], cuts[i + 1]));
    evals += 15;
    total += heap.back().value;
    err_total += heap.back().error;
    abs_total += heap.back().abs_value;
  }
  auto cmp = [](const Piece& x, const Piece& y) { return x.priority < y.priority; };
  for (auto& p : heap) p.priority = priority_of(p, abs_total, o);
  std::make_heap(heap.begin(), heap.end(), cmp);

  auto done = [&]() {
    for (int i = 0; i < m; ++i)
      if (err_total(i) > tolerance(o, abs_total(i))) return false;
    return true;
  };
  auto resum = [&]() {
    err_total.setZero();
    abs_total.setZero();
    for (const auto& p : heap) err_total += p.error, abs_total += p.abs_value;
  };

  bool converged = done();
  while (!converged && evals < o.max_evaluations && !heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Piece worst = heap.back();
    heap.pop_back();
    if (worst.priority < 0.0) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Piece left = gk15(f, m, worst.a, mid), right = gk15(f, m, mid, worst.b);
    evals += 30;
    err_total += left.error + right.error - worst.error;
    abs_total += left.abs_value + right.abs_value - worst.abs_value;
    left.priority = priority_of(left, abs_total, o);
    right.priority = priority_of(right, abs_total, o);
    heap.push_back(std::move(left));
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(std::move(right));
    std::push_heap(heap.begin(), heap.end(), cmp);
    if (done()) {
      resum();
      converged = done();
    }
  }
  resum();
  converged = done();

  // Deterministic summation: left to right.
  std::sort(heap.begin(), heap.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  VectorResult r;
  r.value = Values::Zero(m);
  r.abs_error_estimate = Values::Zero(m);
  for (const auto& p : heap) r.value += p.value, r.abs_error_estimate += p.error;
  r.evaluations = evals;
  r.converged = converged;
  return r;
}

std::vector<double> initial_cuts(double a, double b, const QuadOptions& o) {
  std::vector<double> cuts{a, b};
  for (double x : o.breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

constexpr int kGradedLevels = 80;

// Geometric pieces a + L 2^-k toward a singular endpoint, then a geometric-series tail.
VectorResult graded(const VectorFn& f, int m, double a, double L, const QuadOptions& o) {
  std::vector<double> cuts;
  for (int k = kGradedLevels; k >= 0; --k) cuts.push_back(a + L * std::ldexp(1.0, -k));
  if (L < 0.0) std::reverse(cuts.begin(), cuts.end());
  VectorResult r = adapt(f, m, cuts, o);
  // Innermost two pieces estimate the remaining tail.
  const double x0 = a + L * std::ldexp(1.0, -kGradedLevels);
  const double x1 = a + L * std::ldexp(1.0, -kGradedLevels + 1);
  const double x2 = a + L * std::ldexp(1.0, -kGradedLevels + 2);
  QuadOptions inner = o;
  inner.throw_on_failure = false;
  const VectorResult p1 = adapt(f, m, {std::min(x0, x1), std::max(x0, x1)}, inner);
  const VectorResult p2 = adapt(f, m, {std::min(x1, x2), std::max(x1, x2)}, inner);
  r.evaluations += p1.evaluations + p2.evaluations;
  for (int i = 0; i < m; ++i) {
    const double v1 = p1.value(i), v2 = p2.value(i);
    if (v1 == 0.0 || v2 == 0.0) continue;
    const double rho = v1 / v2;
    if (rho > 0.0 && rho < 1.0) {
      const double tail = v1 * rho / (1.0 - rho);
      r.value(i) += tail;
      r.abs_error_estimate(i) += 0.5 * std::abs(tail);
    } else {
      r.abs_error_estimate(i) += std::abs(v1);
    }
  }
  return r;
}

VectorResult integrate_finite(const VectorFn& f, int m, double a, double b, const QuadOptions& o) {
  if (!o.grade_lower && !o.grade_upper) return adapt(f, m, initial_cuts(a, b, o), o);
  double lo = a, hi = b;
  VectorResult total;
  total.value = Values::Zero(m);
  total.abs_error_estimate = Values::Zero(m);
  auto add = [&](const VectorResult& r) {
    total.value += r.value;
    total.abs_error_estimate += r.abs_error_estimate;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  };
  // Graded zones reach to the nearest breakpoint (or the midpoint).
  std::vector<double> cuts = initial_cuts(a, b, o);
  if (o.grade_lower) {
    double reach = cuts.size() > 2 ? cuts[1] - a : 0.5 * (b - a);
    if (o.grade_upper && cuts.size() <= 2) reach = 0.5 * (b - a);
    add(graded(f, m, a, reach, o));
    lo = a + reach;
  }
  if (o.grade_upper) {
    double reach = cuts.size() > 2 ? b - cuts[cuts.size() - 2] : 0.5 * (b - a);
    if (o.grade_lower && cuts.size() <= 2) reach = 0.5 * (b - a);
    // Negative L places the pieces below b.
    add(graded(f, m, b, -reach, o));
    hi = b - reach;
  }
  if (hi > lo) {
    QuadOptions mid = o;
    mid.grade_lower = mid.grade_upper = false;
    add(adapt(f, m, initial_cuts(lo, hi, mid), mid));
  }
  return total;
}

}  // namespace

VectorResult integrate(const VectorFn& f, int components, double a, double b,
                       const QuadOptions& opts) {
  if (components < 1 || components > kMaxComponents)
    throw DomainError("integrate: unsupported number of components");
  if (!(opts.abs_tol > 0.0 || opts.rel_tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
  if (std::isnan(a) || std::isnan(b) || std::isinf(a)) throw DomainError("integrate: bad interval");
  VectorResult r;
  if (a == b) {
    r.value = r.abs_error_estimate = Values::Zero(components);
    return r;
  }
  if (b < a) {
    r = integrate(f, components, b, a, opts);
    r.value = -r.value;
    return r;
  }
  if (std::isinf(b)) {
    // x = a + t/(1-t), dx = dt/(1-t)^2.
    VectorFn g = [&](double t) -> Values {
      const double s = 1.0 - t;
      return f(a + t / s) / (s * s);
    };
    QuadOptions o = opts;
    for (double& x : o.breakpoints) x = (x - a) / (1.0 + x - a);
    r = integrate_finite(g, components, 0.0, 1.0, o);
  } else {
    r = integrate_finite(f, components, a, b, opts);
  }
  if (!r.converged && opts.throw_on_failure) {
    int worst = 0;
    r.abs_error_estimate.maxCoeff(&worst);
    throw ToleranceNotMet("integrate: tolerance not met within evaluation budget",
                          r.value(worst), r.abs_error_estimate(worst));
  }
  return r;
}

QuadResult integrate(const ScalarFn& f, double a, double b, const QuadOptions& opts) {
  VectorFn g = [&](double x) {
    Values v(1);
    v(0) = f(x);
    return v;
  };
  const VectorResult r = integrate(g, 1, a, b, opts);
  return {r.value(0), r.abs_error_estimate(0), r.evaluations, r.converged};
}

double truncation_radius(double support_radius) {
  return std::isfinite(support_radius) ? support_radius + 2.0 : kInf;
}

VectorResult integrate(const Integrand& f, const QuadOptions& opts) {
  const int m = f.components, n = f.dimension;
  const double R = truncation_radius(f.support_radius);
  QuadOptions inner = opts;
  inner.throw_on_failure = false;
  inner.abs_tol = opts.abs_tol * 1e-2;
  inner.rel_tol = opts.rel_tol * 0.1;
  inner.breakpoints = f.angular_breakpoints;
  inner.grade_lower = inner.grade_upper = false;
  QuadOptions outer = opts;
  outer.breakpoints = f.radial_breakpoints;
  bool inner_ok = true;
  long inner_evals = 0;
  double x[fields::kMaxDim] = {};
  const std::span<const double> xs(x, static_cast<size_t>(n));

  VectorResult r;
  switch (f.coordinates) {
    case Coordinates::cartesian: {
      if (!std::isfinite(R)) throw DomainError("cartesian integration needs a finite support radius");
      if (n == 1) {
        r = integrate([&](double t) { x[0] = t; return f.eval(xs); }, m, -R, R, outer);
      } else if (n == 2) {
        outer.breakpoints.clear();
        r = integrate(
            [&](double s) {
              VectorResult in = integrate(
                  [&](double t) {
                    x[0] = s;
                    x[1] = t;
                    return f.eval(xs);
                  },
                  m, f.half_space ? 0.0 : -R, R, inner);
              inner_ok = inner_ok && in.converged;
              inner_evals += in.evaluations;
              return Values(in.value);
            },
            m, -R, R, outer);
      } else {
        throw DomainError("cartesian integration supports n = 1, 2");
      }
      break;
    }
    case Coordinates::radial: {
      const double area = specfun::sphere_area(n);
      outer.grade_lower = f.singular_origin;
      r = integrate(
          [&](double rr) -> Values {
            std::fill(x, x + n, 0.0);
            x[0] = rr;
            return f.eval(xs) * (area * std::pow(rr, n - 1));
          },
          m, f.inner_radius, R, outer);
      break;
    }
    case Coordinates::polar:
    case Coordinates::half_polar: {
      if (n != 2) throw DomainError("polar integration needs n = 2");
      const bool half = f.coordinates == Coordinates::half_polar;
      const double top = half ? kPi : 2.0 * kPi;
      inner.grade_lower = inner.grade_upper = half && f.singular_boundary;
      outer.grade_lower = f.singular_origin && f.inner_radius == 0.0;
      const bool log_map = half && f.log_singular_boundary;
      if (log_map) inner.grade_lower = inner.grade_upper = false;
      r = integrate(
          [&](double rr) -> Values {
            VectorResult in;
            if (log_map) {
              // s in (0, 1] covers (0, pi/2] from phi = 0 and [pi/2, pi) from phi = pi.
              in = integrate(
                  [&](double s) -> Values {
                    Values acc = Values::Zero(m);
                    if (!(s > 0.0)) return acc;
                    const double d = 0.5 * kPi * std::exp(1.0 - 1.0 / s);
                    // Below 1e-150 the field jets overflow; the omitted sliver is
                    // negligible unless the density is log-critical itself.
                    if (!(d > 1e-150)) return acc;
                    const double jac = d / (s * s);
                    const double c = std::cos(d), sn = std::sin(d);
                    x[0] = rr * c;
                    x[1] = rr * sn;
                    acc += f.eval(xs);
                    x[0] = -rr * c;
                    acc += f.eval(xs);
                    return acc * jac;
                  },
                  m, 0.0, 1.0, inner);
            } else {
              in = integrate(
                  [&](double phi) {
                    x[0] = rr * std::cos(phi);
                    x[1] = rr * std::sin(phi);
                    return f.eval(xs);
                  },
                  m, 0.0, top, inner);
            }
            inner_ok = inner_ok && in.converged;
            inner_evals += in.evaluations;
            return in.value * rr;
          },
          m, f.inner_radius, R, outer);
      break;
    }
    case Coordinates::cylindrical: {
      if (n < 2) throw DomainError("cylindrical integration needs n >= 2");
      const double area = n == 2 ? 2.0 : specfun::sphere_area(n - 1);
      inner.grade_lower = f.half_space && f.singular_boundary;
      r = integrate(
          [&](double rho) -> Values {
            VectorResult in = integrate(
                [&](double z) {
                  std::fill(x, x + n, 0.0);
                  x[0] = rho;
                  x[n - 1] = z;
                  return f.eval(xs);
                },
                m, f.half_space ? 0.0 : -R, R, inner);
            inner_ok = inner_ok && in.converged;
            inner_evals += in.evaluations;
            return in.value * (area * std::pow(rho, n - 2));
          },
          m, 0.0, R, outer);
      break;
    }
  }
  r.evaluations += inner_evals;
  r.converged = r.converged && inner_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Level sets

namespace {

const fields::ProfilePtr& monotone_profile(const fields::ScalarField& u) {
  const auto& p = u.radial_profile();
  if (!p || !p->nonincreasing())
    throw DomainError("level-set measures need a radial nonincreasing field");
  return p;
}

// Largest r with f(r) >= t, for nonincreasing f with f(0) >= t.
double level_radius(const fields::RadialProfile& f, double t) {
  double lo = 0.0, hi = std::isfinite(f.support_radius()) ? f.support_radius() : 1.0;
  while (f.eval(hi).f >= t) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return kInf;
  }
  for (int it = 0; it < 2000 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f.eval(mid).f >= t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double level_set_radius(const fields::ScalarField& u, double t) {
  const auto& p = monotone_profile(u);
  if (!(t > 0.0)) throw DomainError("level_set_radius: need t > 0");
  if (t > p->eval(0.0).f) return 0.0;
  return level_radius(*p, t);
}

double mu_b_measure(const fields::ScalarField& u, double t, double b) {
  const int n = u.dimension();
  if (!(b < n)) throw DomainError("mu_b_measure: need b < n");
  const double r = level_set_radius(u, t);
  if (r == 0.0) return 0.0;
  return specfun::sphere_area(n) * std::pow(r, n - b) / (n - b);
}

double lorentz_quasinorm(const fields::ScalarField& u, double tau, double q, double b,
                         const QuadOptions& opts) {
  const auto& p = monotone_profile(u);
  if (!(tau > 0.0 && q > 0.0)) throw DomainError("lorentz_quasinorm: need tau, q > 0");
  const double top = std::pow(p->eval(0.0).f, q);
  if (!(top > 0.0)) return 0.0;
  QuadOptions o = opts;
  o.grade_lower = true;
  o.grade_upper = true;
  // s = t^q.
  const QuadResult r = integrate(
      [&](double s) {
        const double t = std::pow(s, 1.0 / q);
        if (t <= 0.0) return 0.0;
        return std::pow(mu_b_measure(u, t, b), q / tau);
      },
      0.0, top, o);
  return std::pow(r.value, 1.0 / q);
}

}  // namespace sharpconst::quad
