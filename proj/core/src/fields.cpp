#include "sharpconst/fields.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "sharpconst/errors.hpp"

namespace sharpconst::fields {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(-r^2/(2w^2)) < 1e-16 beyond r = w sqrt(2 ln 1e16).
const double kGaussianReach = std::sqrt(2.0 * std::log(1e16));

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// psi(t) = exp(-1/t) for t > 0 and its first two derivatives.
struct Psi {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};
Psi psi(double t) {
  if (t <= 1.0 / 700.0) return {};
  const double e = std::exp(-1.0 / t);
  const double t2 = t * t;
  return {e, e / t2, e * (1.0 - 2.0 * t) / (t2 * t2)};
}

// Smooth step S with S = 0 for t <= 0 and S = 1 for t >= 1.
struct Step {
  double s = 0.0, d1 = 0.0, d2 = 0.0;
};
Step smooth_step(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const Psi a = psi(t), bm = psi(1.0 - t);
  const double b = bm.v, db = -bm.d1, d2b = bm.d2;
  const double d = a.v + b, dd = a.d1 + db, d2d = a.d2 + d2b;
  const double num = a.d1 * d - a.v * dd;
  Step out;
  out.s = a.v / d;
  out.d1 = num / (d * d);
  out.d2 = (a.d2 * d - a.v * d2d) / (d * d) - 2.0 * dd * num / (d * d * d);
  return out;
}

// ---------------------------------------------------------------------------
// Profiles

class GaussianProfile final : public RadialProfile {
 public:
  explicit GaussianProfile(double w) : w_(w) {}
  RadialJet eval(double r) const override {
    const double w2 = w_ * w_;
    const double f = std::exp(-0.5 * r * r / w2);
    return {f, -r / w2 * f, (-1.0 / w2 + r * r / (w2 * w2)) * f, -f / w2};
  }
  double support_radius() const override { return kGaussianReach * w_; }
  bool nonincreasing() const override { return true; }
  bool nonnegative() const override { return true; }
  std::string describe() const override { return "gaussian(w=" + fmt(w_) + ")"; }

 private:
  double w_;
};

class CutoffProfile final : public RadialProfile {
 public:
  CutoffProfile(double r0, double r1) : r0_(r0), r1_(r1) {}
  RadialJet eval(double r) const override {
    const double len = r1_ - r0_;
    const Step s = smooth_step((r - r0_) / len);
    RadialJet j;
    j.f = 1.0 - s.s;
    j.df = -s.d1 / len;
    j.d2f = -s.d2 / (len * len);
    j.df_over_r = r > 0.0 ? j.df / r : 0.0;
    return j;
  }
  double support_radius() const override { return r1_; }
  bool nonincreasing() const override { return true; }
  bool nonnegative() const override { return true; }
  std::string describe() const override { return "cutoff(" + fmt(r0_) + "," + fmt(r1_) + ")"; }

 private:
  double r0_, r1_;
};

class AnnularProfile final : public RadialProfile {
 public:
  AnnularProfile(double a, double b) : a_(a), b_(b) {
    const double half = 0.5 * (b - a);
    norm_ = std::exp(1.0 / (half * half));
  }
  RadialJet eval(double r) const override {
    const double t = (r - a_) * (b_ - r);
    if (t <= 1.0 / 700.0) return {};
    const double tp = a_ + b_ - 2.0 * r, tpp = -2.0;
    const double g = norm_ * std::exp(-1.0 / t);
    const double q = tp / (t * t);
    RadialJet j;
    j.f = g;
    j.df = g * q;
    j.d2f = g * (q * q + tpp / (t * t) - 2.0 * tp * tp / (t * t * t));
    j.df_over_r = j.df / r;
    return j;
  }
  double support_radius() const override { return b_; }
  bool nonnegative() const override { return true; }
  double vanishes_below() const override { return a_; }
  std::string describe() const override { return "annular(" + fmt(a_) + "," + fmt(b_) + ")"; }

 private:
  double a_, b_, norm_;
};

class MollifiedLogProfile final : public RadialProfile {
 public:
  explicit MollifiedLogProfile(double eps) : eps_(eps) {}
  RadialJet eval(double r) const override {
    const double e2 = eps_ * eps_, s = r * r + e2;
    return {0.5 * std::log(s), r / s, (e2 - r * r) / (s * s), 1.0 / s};
  }
  double support_radius() const override { return kInf; }
  std::string describe() const override { return "mollified_log(eps=" + fmt(eps_) + ")"; }

 private:
  double eps_;
};

class TalentiProfile final : public RadialProfile {
 public:
  TalentiProfile(int m, double extra) : m_(m), beta_(0.5 * (m - 2) + extra), extra_(extra) {}
  RadialJet eval(double r) const override {
    const double s = 1.0 + r * r;
    const double f = std::pow(s, -beta_);
    const double fr = -2.0 * beta_ * f / s;
    return {f, r * fr, fr + 4.0 * beta_ * (beta_ + 1.0) * r * r * f / (s * s), fr};
  }
  double support_radius() const override { return kInf; }
  bool nonincreasing() const override { return true; }
  bool nonnegative() const override { return true; }
  std::string describe() const override {
    return "talenti(m=" + std::to_string(m_) + (extra_ != 0.0 ? ",extra=" + fmt(extra_) : "") + ")";
  }

 private:
  int m_;
  double beta_, extra_;
};

class PTalentiProfile final : public RadialProfile {
 public:
  PTalentiProfile(double p, int n) : p_(p), n_(n), s_(p / (p - 1.0)), gamma_((n - p) / p) {}
  RadialJet eval(double r) const override {
    const double rs = std::pow(r, s_);
    const double g = 1.0 + rs;
    const double f = std::pow(g, -gamma_);
    RadialJet j;
    j.f = f;
    if (r == 0.0) return j;
    const double common = -gamma_ * s_ * f / g;  // times r^{s-1}
    j.df = common * rs / r;
    j.df_over_r = j.df / r;
    j.d2f = common * ((s_ - 1.0) * rs / (r * r) - (gamma_ + 1.0) * s_ * rs * rs / (g * r * r));
    return j;
  }
  double support_radius() const override { return kInf; }
  bool nonincreasing() const override { return true; }
  bool nonnegative() const override { return true; }
  std::string describe() const override {
    return "p_talenti(p=" + fmt(p_) + ",n=" + std::to_string(n_) + ")";
  }

 private:
  double p_;
  int n_;
  double s_, gamma_;
};

class TentProfile final : public RadialProfile {
 public:
  explicit TentProfile(double radius) : radius_(radius) {}
  RadialJet eval(double r) const override {
    if (r >= radius_) return {};
    const double d = -1.0 / radius_;
    return {1.0 - r / radius_, d, 0.0, r > 0.0 ? d / r : -kInf};
  }
  double support_radius() const override { return radius_; }
  bool nonincreasing() const override { return true; }
  bool nonnegative() const override { return true; }
  std::string describe() const override { return "tent(R=" + fmt(radius_) + ")"; }

 private:
  double radius_;
};

class ProductProfile final : public RadialProfile {
 public:
  ProductProfile(ProfilePtr f, ProfilePtr g) : f_(std::move(f)), g_(std::move(g)) {}
  RadialJet eval(double r) const override {
    const RadialJet a = f_->eval(r), b = g_->eval(r);
    return {a.f * b.f, a.df * b.f + a.f * b.df, a.d2f * b.f + 2.0 * a.df * b.df + a.f * b.d2f,
            a.df_over_r * b.f + a.f * b.df_over_r};
  }
  double support_radius() const override {
    return std::min(f_->support_radius(), g_->support_radius());
  }
  bool nonincreasing() const override {
    return f_->nonincreasing() && g_->nonincreasing() && nonnegative();
  }
  bool nonnegative() const override { return f_->nonnegative() && g_->nonnegative(); }
  double vanishes_below() const override {
    return std::max(f_->vanishes_below(), g_->vanishes_below());
  }
  std::string describe() const override { return f_->describe() + "*" + g_->describe(); }

 private:
  ProfilePtr f_, g_;
};

class ScaledProfile final : public RadialProfile {
 public:
  ScaledProfile(ProfilePtr f, double c) : f_(std::move(f)), c_(c) {}
  RadialJet eval(double r) const override {
    RadialJet j = f_->eval(r);
    j.f *= c_, j.df *= c_, j.d2f *= c_, j.df_over_r *= c_;
    return j;
  }
  double support_radius() const override { return f_->support_radius(); }
  bool nonincreasing() const override { return c_ >= 0.0 && f_->nonincreasing(); }
  bool nonnegative() const override { return c_ >= 0.0 && f_->nonnegative(); }
  double vanishes_below() const override { return f_->vanishes_below(); }
  std::string describe() const override { return fmt(c_) + "*" + f_->describe(); }

 private:
  ProfilePtr f_;
  double c_;
};

class DilatedProfile final : public RadialProfile {
 public:
  DilatedProfile(ProfilePtr f, double s) : f_(std::move(f)), s_(s) {}
  RadialJet eval(double r) const override {
    RadialJet j = f_->eval(s_ * r);
    j.df *= s_, j.d2f *= s_ * s_, j.df_over_r *= s_ * s_;
    return j;
  }
  double support_radius() const override { return f_->support_radius() / s_; }
  bool nonincreasing() const override { return f_->nonincreasing(); }
  bool nonnegative() const override { return f_->nonnegative(); }
  double vanishes_below() const override { return f_->vanishes_below() / s_; }
  std::string describe() const override { return f_->describe() + "(" + fmt(s_) + "r)"; }

 private:
  ProfilePtr f_;
  double s_;
};

}  // namespace

namespace profiles {
ProfilePtr gaussian(double width) {
  if (!(width > 0.0)) throw DomainError("gaussian profile: width must be positive");
  return std::make_shared<GaussianProfile>(width);
}
ProfilePtr smooth_cutoff(double r0, double r1) {
  if (!(r0 >= 0.0 && r1 > r0)) throw DomainError("smooth_cutoff: need 0 <= r0 < r1");
  return std::make_shared<CutoffProfile>(r0, r1);
}
ProfilePtr annular_bump(double a, double b) {
  if (!(a > 0.0 && b > a)) throw DomainError("annular_bump: need 0 < a < b");
  return std::make_shared<AnnularProfile>(a, b);
}
ProfilePtr mollified_log(double eps) {
  if (!(eps > 0.0)) throw DomainError("mollified_log: eps must be positive");
  return std::make_shared<MollifiedLogProfile>(eps);
}
ProfilePtr talenti(int m, double extra_decay) {
  if (m < 2 || (m == 2 && !(extra_decay > 0.0)))
    throw DomainError("talenti profile: need m >= 3, or m = 2 with positive extra decay");
  return std::make_shared<TalentiProfile>(m, extra_decay);
}
ProfilePtr p_talenti(double p, int n) {
  if (!(p > 1.0 && p < n)) throw DomainError("p_talenti: need 1 < p < n");
  return std::make_shared<PTalentiProfile>(p, n);
}
ProfilePtr tent(double radius) {
  if (!(radius > 0.0)) throw DomainError("tent: radius must be positive");
  return std::make_shared<TentProfile>(radius);
}
ProfilePtr product(ProfilePtr f, ProfilePtr g) {
  return std::make_shared<ProductProfile>(std::move(f), std::move(g));
}
ProfilePtr scaled(ProfilePtr f, double c) { return std::make_shared<ScaledProfile>(std::move(f), c); }
ProfilePtr dilated(ProfilePtr f, double s) {
  if (!(s > 0.0)) throw DomainError("dilated profile: s must be positive");
  return std::make_shared<DilatedProfile>(std::move(f), s);
}
}  // namespace profiles

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(std::shared_ptr<const FieldImpl> impl, int dimension, Domain domain,
                         double support_radius, std::string name)
    : impl_(std::move(impl)),
      dim_(dimension),
      domain_(domain),
      support_radius_(support_radius),
      name_(std::move(name)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw DomainError("ScalarField: unsupported dimension");
}

ScalarField ScalarField::with_radial(ProfilePtr p) const {
  ScalarField f = *this;
  f.radial_ = std::move(p);
  return f;
}
ScalarField ScalarField::with_boundary_vanishing(bool v) const {
  ScalarField f = *this;
  f.boundary_vanishing_ = v;
  return f;
}
ScalarField ScalarField::with_excluded_radius(double r) const {
  ScalarField f = *this;
  f.excluded_radius_ = r;
  return f;
}
ScalarField ScalarField::with_boundary_gap(double g) const {
  ScalarField f = *this;
  f.boundary_gap_ = g;
  if (g > 0.0) f.boundary_vanishing_ = true;
  return f;
}
ScalarField ScalarField::with_domain(Domain d) const {
  ScalarField f = *this;
  f.domain_ = d;
  return f;
}
ScalarField ScalarField::with_param(const std::string& key, double v) const {
  ScalarField f = *this;
  f.params_[key] = v;
  return f;
}
ScalarField ScalarField::renamed(std::string name) const {
  ScalarField f = *this;
  f.name_ = std::move(name);
  return f;
}

double ComplexField::support_radius() const {
  return im ? std::max(re.support_radius(), im->support_radius()) : re.support_radius();
}

namespace {

Jet zero_jet(int n) {
  Jet j;
  j.grad = Vec::Zero(n);
  j.hess = Mat::Zero(n, n);
  return j;
}

class RadialImpl final : public FieldImpl {
 public:
  RadialImpl(ProfilePtr p, int n, Vec center) : p_(std::move(p)), n_(n), c_(std::move(center)) {}
  Jet eval(std::span<const double> x) const override {
    Vec d(n_);
    for (int i = 0; i < n_; ++i) d(i) = x[static_cast<size_t>(i)] - c_(i);
    const double r = d.norm();
    const RadialJet rj = p_->eval(r);
    Jet j;
    j.value = rj.f;
    j.grad = rj.df_over_r * d;
    j.hess = rj.df_over_r * Mat::Identity(n_, n_);
    if (r > 0.0) j.hess += ((rj.d2f - rj.df_over_r) / (r * r)) * (d * d.transpose());
    return j;
  }

 private:
  ProfilePtr p_;
  int n_;
  Vec c_;
};

class ZeroImpl final : public FieldImpl {
 public:
  explicit ZeroImpl(int n) : n_(n) {}
  Jet eval(std::span<const double>) const override { return zero_jet(n_); }

 private:
  int n_;
};

class ProductImpl final : public FieldImpl {
 public:
  ProductImpl(ScalarField a, ScalarField b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet eval(std::span<const double> x) const override {
    const Jet a = a_.jet(x), b = b_.jet(x);
    Jet j;
    j.value = a.value * b.value;
    j.grad = a.value * b.grad + b.value * a.grad;
    j.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() +
             b.grad * a.grad.transpose();
    return j;
  }

 private:
  ScalarField a_, b_;
};

class SumImpl final : public FieldImpl {
 public:
  SumImpl(ScalarField a, ScalarField b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet eval(std::span<const double> x) const override {
    Jet a = a_.jet(x);
    const Jet b = b_.jet(x);
    a.value += b.value;
    a.grad += b.grad;
    a.hess += b.hess;
    return a;
  }

 private:
  ScalarField a_, b_;
};

class ScaleImpl final : public FieldImpl {
 public:
  ScaleImpl(ScalarField a, double c) : a_(std::move(a)), c_(c) {}
  Jet eval(std::span<const double> x) const override {
    Jet a = a_.jet(x);
    a.value *= c_;
    a.grad *= c_;
    a.hess *= c_;
    return a;
  }

 private:
  ScalarField a_;
  double c_;
};

class DilateImpl final : public FieldImpl {
 public:
  DilateImpl(ScalarField a, double s) : a_(std::move(a)), s_(s) {}
  Jet eval(std::span<const double> x) const override {
    double y[kMaxDim];
    const size_t n = x.size();
    for (size_t i = 0; i < n; ++i) y[i] = s_ * x[i];
    Jet j = a_.jet(std::span<const double>(y, n));
    j.grad *= s_;
    j.hess *= s_ * s_;
    return j;
  }

 private:
  ScalarField a_;
  double s_;
};

class PlaneWaveImpl final : public FieldImpl {
 public:
  PlaneWaveImpl(Vec xi, int phase) : xi_(std::move(xi)), phase_(phase) {}
  Jet eval(std::span<const double> x) const override {
    const int n = static_cast<int>(xi_.size());
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += xi_(i) * x[static_cast<size_t>(i)];
    const double c = std::cos(t), s = std::sin(t);
    Jet j;
    if (phase_ == 0) {
      j.value = c;
      j.grad = -s * xi_;
      j.hess = -c * (xi_ * xi_.transpose());
    } else {
      j.value = s;
      j.grad = c * xi_;
      j.hess = -s * (xi_ * xi_.transpose());
    }
    return j;
  }

 private:
  Vec xi_;
  int phase_;
};

class HarmonicImpl final : public FieldImpl {
 public:
  HarmonicImpl(int k, int part) : k_(k), part_(part) {}
  Jet eval(std::span<const double> x) const override {
    using C = std::complex<double>;
    const C z(x[0], x[1]);
    auto zpow = [&](int e) {
      C r(1.0, 0.0);
      for (int i = 0; i < e; ++i) r *= z;
      return r;
    };
    const C f = zpow(k_);
    const C f1 = k_ >= 1 ? static_cast<double>(k_) * zpow(k_ - 1) : C(0.0);
    const C f2 = k_ >= 2 ? static_cast<double>(k_ * (k_ - 1)) * zpow(k_ - 2) : C(0.0);
    const C i(0.0, 1.0);
    // d/dx = f', d/dy = i f'; dxx = f'', dxy = i f'', dyy = -f''.
    auto pick = [&](C v) { return part_ == 0 ? v.real() : v.imag(); };
    Jet j = zero_jet(2);
    j.value = pick(f);
    j.grad(0) = pick(f1);
    j.grad(1) = pick(i * f1);
    j.hess(0, 0) = pick(f2);
    j.hess(0, 1) = j.hess(1, 0) = pick(i * f2);
    j.hess(1, 1) = -pick(f2);
    return j;
  }

 private:
  int k_, part_;
};

class CoordinatePowerImpl final : public FieldImpl {
 public:
  CoordinatePowerImpl(int n, double gamma) : n_(n), g_(gamma) {}
  Jet eval(std::span<const double> x) const override {
    Jet j = zero_jet(n_);
    const double t = x[static_cast<size_t>(n_ - 1)];
    if (t <= 0.0) return j;
    const double v = std::pow(t, g_);
    j.value = v;
    j.grad(n_ - 1) = g_ * v / t;
    j.hess(n_ - 1, n_ - 1) = g_ * (g_ - 1.0) * v / (t * t);
    return j;
  }

 private:
  int n_;
  double g_;
};

class PolarSeparableImpl final : public FieldImpl {
 public:
  PolarSeparableImpl(ProfilePtr eta, std::shared_ptr<const AngularFunction> a, double inner)
      : eta_(std::move(eta)), a_(std::move(a)), inner_(inner) {}
  Jet eval(std::span<const double> x) const override {
    Jet j = zero_jet(2);
    const double r = std::hypot(x[0], x[1]);
    if (r <= inner_) return j;
    const double phi = std::atan2(x[1], x[0]);
    const RadialJet e = eta_->eval(r);
    double a, da, d2a;
    a_->eval(phi, a, da, d2a);
    const double fr = e.df * a, ff = e.f * da;
    const double frr = e.d2f * a, frf = e.df * da, fff = e.f * d2a;
    const double c = x[0] / r, s = x[1] / r;
    j.value = e.f * a;
    j.grad(0) = c * fr - s * ff / r;
    j.grad(1) = s * fr + c * ff / r;
    // Hessian in the (e_r, e_phi) frame, then rotated to Cartesian axes.
    const double hrr = frr, hrp = frf / r - ff / (r * r), hpp = fr / r + fff / (r * r);
    j.hess(0, 0) = c * c * hrr - 2.0 * c * s * hrp + s * s * hpp;
    j.hess(1, 1) = s * s * hrr + 2.0 * c * s * hrp + c * c * hpp;
    j.hess(0, 1) = j.hess(1, 0) = c * s * (hrr - hpp) + (c * c - s * s) * hrp;
    return j;
  }

 private:
  ProfilePtr eta_;
  std::shared_ptr<const AngularFunction> a_;
  double inner_;
};

// rho_eps(s) = (315/256)/eps (1 - (s/eps)^2)^4 on |s| < eps, unit mass on the circle.
class ConcentratedAngle final : public AngularFunction {
 public:
  ConcentratedAngle(double theta, double eps) : theta_(theta), eps_(eps) {}
  void eval(double phi, double& a, double& da, double& d2a) const override {
    double s = std::remainder(phi - theta_, 2.0 * kPi);
    a = da = d2a = 0.0;
    if (std::abs(s) >= eps_) return;
    constexpr double c = 315.0 / 256.0;
    const double u = s / eps_, q = 1.0 - u * u;
    a = c / eps_ * q * q * q * q;
    da = -8.0 * c / (eps_ * eps_) * u * q * q * q;
    d2a = -8.0 * c / (eps_ * eps_ * eps_) * (q * q * q - 6.0 * u * u * q * q);
  }

 private:
  double theta_, eps_;
};

Vec to_vec(std::span<const double> v, int n) {
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n && i < static_cast<int>(v.size()); ++i) out(i) = v[static_cast<size_t>(i)];
  return out;
}

ScalarField combine_meta(ScalarField out, const ScalarField& a, const ScalarField& b) {
  out = out.with_excluded_radius(std::max(a.excluded_radius(), b.excluded_radius()));
  out = out.with_boundary_gap(std::max(a.boundary_gap(), b.boundary_gap()));
  out = out.with_boundary_vanishing(a.boundary_vanishing() || b.boundary_vanishing());
  Domain d = Domain::whole_space;
  if (a.domain() == Domain::half_space || b.domain() == Domain::half_space)
    d = Domain::half_space;
  else if (out.excluded_radius() > 0.0)
    d = Domain::punctured_plane;
  return out.with_domain(d);
}

}  // namespace

// ---------------------------------------------------------------------------
// Elementary fields

ScalarField radial(ProfilePtr profile, int n, std::span<const double> center) {
  const Vec c = to_vec(center, n);
  const double reach = c.norm() + profile->support_radius();
  std::string name = "radial[" + profile->describe() + "]";
  ScalarField f(std::make_shared<RadialImpl>(profile, n, c), n, Domain::whole_space, reach, name);
  if (c.norm() == 0.0) {
    f = f.with_radial(profile);
    if (profile->vanishes_below() > 0.0)
      f = f.with_excluded_radius(profile->vanishes_below()).with_domain(Domain::punctured_plane);
  } else if (std::isfinite(profile->support_radius())) {
    // Excluded ball around the origin and gap to {x_n = 0} for off-centre compact bumps.
    const double gap_origin = c.norm() - profile->support_radius();
    if (gap_origin > 0.0) f = f.with_excluded_radius(gap_origin);
    const double gap_boundary = c(n - 1) - profile->support_radius();
    if (gap_boundary > 0.0) f = f.with_boundary_gap(gap_boundary);
  }
  return f;
}

ScalarField zero_field(int n) {
  return ScalarField(std::make_shared<ZeroImpl>(n), n, Domain::whole_space, 0.0, "zero");
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  if (a.dimension() != b.dimension()) throw DomainError("product: dimension mismatch");
  ScalarField out(std::make_shared<ProductImpl>(a, b), a.dimension(), Domain::whole_space,
                  std::min(a.support_radius(), b.support_radius()),
                  a.name() + "*" + b.name());
  return combine_meta(out, a, b);
}

ScalarField sum(const ScalarField& a, const ScalarField& b) {
  if (a.dimension() != b.dimension()) throw DomainError("sum: dimension mismatch");
  ScalarField out(std::make_shared<SumImpl>(a, b), a.dimension(), Domain::whole_space,
                  std::max(a.support_radius(), b.support_radius()), a.name() + "+" + b.name());
  out = out.with_excluded_radius(std::min(a.excluded_radius(), b.excluded_radius()))
            .with_boundary_gap(std::min(a.boundary_gap(), b.boundary_gap()))
            .with_boundary_vanishing(a.boundary_vanishing() && b.boundary_vanishing());
  if (a.domain() == Domain::half_space || b.domain() == Domain::half_space)
    out = out.with_domain(Domain::half_space);
  return out;
}

ScalarField scale(const ScalarField& a, double c) {
  ScalarField out(std::make_shared<ScaleImpl>(a, c), a.dimension(), a.domain(), a.support_radius(),
                  fmt(c) + "*" + a.name());
  out = out.with_excluded_radius(a.excluded_radius())
            .with_boundary_gap(a.boundary_gap())
            .with_boundary_vanishing(a.boundary_vanishing());
  if (a.radial_profile()) out = out.with_radial(profiles::scaled(a.radial_profile(), c));
  return out;
}

ScalarField dilate(const ScalarField& a, double s) {
  if (!(s > 0.0)) throw DomainError("dilate: s must be positive");
  ScalarField out(std::make_shared<DilateImpl>(a, s), a.dimension(), a.domain(),
                  a.support_radius() / s, a.name() + "(" + fmt(s) + "x)");
  out = out.with_excluded_radius(a.excluded_radius() / s)
            .with_boundary_gap(a.boundary_gap() / s)
            .with_boundary_vanishing(a.boundary_vanishing());
  for (const auto& [k, v] : a.params()) out = out.with_param(k, v);
  if (a.radial_profile()) out = out.with_radial(profiles::dilated(a.radial_profile(), s));
  return out;
}

ComplexField dilate(const ComplexField& u, double s) {
  ComplexField out{dilate(u.re, s), std::nullopt, u.id + "@s=" + fmt(s)};
  if (u.im) out.im = dilate(*u.im, s);
  return out;
}

ScalarField plane_wave(std::span<const double> xi, int phase) {
  const int n = static_cast<int>(xi.size());
  return ScalarField(std::make_shared<PlaneWaveImpl>(to_vec(xi, n), phase), n, Domain::whole_space,
                     std::numeric_limits<double>::infinity(), phase == 0 ? "cos" : "sin");
}

ScalarField harmonic_polynomial(int k, int part) {
  if (k < 0) throw DomainError("harmonic_polynomial: k must be >= 0");
  return ScalarField(std::make_shared<HarmonicImpl>(k, part), 2, Domain::whole_space,
                     std::numeric_limits<double>::infinity(),
                     std::string(part == 0 ? "Re" : "Im") + " z^" + std::to_string(k));
}

ScalarField coordinate_power(int n, double gamma) {
  ScalarField f(std::make_shared<CoordinatePowerImpl>(n, gamma), n, Domain::half_space,
                std::numeric_limits<double>::infinity(), "x_n^" + fmt(gamma));
  return f.with_boundary_vanishing(gamma > 0.0);
}

ScalarField polar_separable(ProfilePtr eta, std::shared_ptr<const AngularFunction> angular,
                            double inner_radius) {
  const double reach = eta->support_radius();
  const double inner = std::max(inner_radius, eta->vanishes_below());
  ScalarField f(std::make_shared<PolarSeparableImpl>(eta, std::move(angular), inner), 2,
                Domain::punctured_plane, reach, "polar[" + eta->describe() + "]");
  return f.with_excluded_radius(inner);
}

// ---------------------------------------------------------------------------
// Families

namespace {
constexpr std::pair<FamilyKind, const char*> kFamilyNames[] = {
    {FamilyKind::gaussian_bump, "gaussian_bump"},
    {FamilyKind::smooth_cutoff_radial, "smooth_cutoff_radial"},
    {FamilyKind::plane_wave_bump, "plane_wave_bump"},
    {FamilyKind::angular_mode, "angular_mode"},
    {FamilyKind::mollified_log, "mollified_log"},
    {FamilyKind::talenti_profile, "talenti_profile"},
    {FamilyKind::halfspace_lift, "halfspace_lift"},
    {FamilyKind::sphere_concentrated, "sphere_concentrated"},
};

double get(const FamilyParams& p, const std::string& key, double fallback) {
  auto it = p.values.find(key);
  return it == p.values.end() ? fallback : it->second;
}
}  // namespace

std::optional<FamilyKind> family_from_string(const std::string& s) {
  for (const auto& [k, name] : kFamilyNames)
    if (s == name) return k;
  return std::nullopt;
}

std::string to_string(FamilyKind k) {
  for (const auto& [kind, name] : kFamilyNames)
    if (kind == k) return name;
  return "unknown";
}

ComplexField gaussian_bump(int n, std::span<const double> center, double width) {
  ScalarField f = radial(profiles::gaussian(width), n, center);
  std::string id = "gaussian_bump(n=" + std::to_string(n) + ",w=" + fmt(width);
  if (!center.empty()) {
    id += ",c=";
    for (size_t i = 0; i < center.size(); ++i) id += (i ? ":" : "") + fmt(center[i]);
  }
  id += ")";
  return {f.renamed(id), std::nullopt, id};
}

ComplexField smooth_cutoff_radial(int n, double r0, double r1) {
  const std::string id =
      "smooth_cutoff_radial(n=" + std::to_string(n) + "," + fmt(r0) + "," + fmt(r1) + ")";
  return {radial(profiles::smooth_cutoff(r0, r1), n).renamed(id), std::nullopt, id};
}

ComplexField plane_wave_bump(std::span<const double> xi, const ScalarField& base) {
  if (static_cast<int>(xi.size()) != base.dimension())
    throw DomainError("plane_wave_bump: frequency dimension mismatch");
  std::string id = "plane_wave_bump(xi=";
  for (size_t i = 0; i < xi.size(); ++i) id += (i ? ":" : "") + fmt(xi[i]);
  id += "," + base.name() + ")";
  ScalarField re = product(plane_wave(xi, 0), base);
  ScalarField im = product(plane_wave(xi, 1), base);
  return {re.renamed(id + ".re"), im.renamed(id + ".im"), id};
}

ComplexField angular_mode(int k, ProfilePtr radial_factor) {
  if (k < 0) throw DomainError("angular_mode: k must be >= 0");
  const std::string id = "angular_mode(k=" + std::to_string(k) + "," + radial_factor->describe() + ")";
  const ScalarField g = radial(radial_factor, 2);
  ScalarField re = product(g, harmonic_polynomial(k, 0)).with_param("k", k);
  if (k == 0) return {re.with_radial(radial_factor).renamed(id), std::nullopt, id};
  ScalarField im = product(g, harmonic_polynomial(k, 1)).with_param("k", k);
  return {re.renamed(id + ".re"), im.renamed(id + ".im"), id};
}

ComplexField mollified_log(double eps, double cutoff_radius) {
  if (!(cutoff_radius > 0.0)) throw DomainError("mollified_log: cutoff radius must be positive");
  const ProfilePtr p = profiles::product(profiles::mollified_log(eps),
                                         profiles::smooth_cutoff(0.5 * cutoff_radius, cutoff_radius));
  const std::string id = "mollified_log(eps=" + fmt(eps) + ",R=" + fmt(cutoff_radius) + ")";
  return {radial(p, 2).renamed(id).with_param("eps", eps), std::nullopt, id};
}

ComplexField talenti_profile(int m, double cutoff_radius, double extra_decay) {
  ProfilePtr p = profiles::talenti(m, extra_decay);
  if (cutoff_radius > 0.0)
    p = profiles::product(p, profiles::smooth_cutoff(cutoff_radius, 2.0 * cutoff_radius));
  std::string id = "talenti_profile(m=" + std::to_string(m);
  if (cutoff_radius > 0.0) id += ",R=" + fmt(cutoff_radius);
  if (extra_decay != 0.0) id += ",extra=" + fmt(extra_decay);
  id += ")";
  return {radial(p, m).renamed(id), std::nullopt, id};
}

ComplexField halfspace_lift(const ComplexField& v, double exponent) {
  const int n = v.dimension();
  const ScalarField w = coordinate_power(n, exponent);
  if (exponent < 0.0 && !(v.re.boundary_gap() > 0.0))
    throw InadmissibleField("halfspace_lift: negative exponent needs a field vanishing near x_n = 0");
  const std::string id = "halfspace_lift(" + v.id + ",x_n^" + fmt(exponent) + ")";
  auto lift = [&](const ScalarField& f) {
    ScalarField out = product(w, f).with_domain(Domain::half_space);
    out = out.with_boundary_gap(f.boundary_gap());
    return out.with_boundary_vanishing(exponent > 0.0 || f.boundary_gap() > 0.0);
  };
  ComplexField out{lift(v.re).renamed(id), std::nullopt, id};
  if (v.im) out.im = lift(*v.im);
  return out;
}

ComplexField sphere_concentrated(double theta, double eps, ProfilePtr eta, double inner_radius) {
  if (!(eps > 0.0 && eps < kPi)) throw DomainError("sphere_concentrated: need 0 < eps < pi");
  const std::string id = "sphere_concentrated(theta=" + fmt(theta) + ",eps=" + fmt(eps) + "," +
                         eta->describe() + ")";
  ScalarField f =
      polar_separable(std::move(eta), std::make_shared<ConcentratedAngle>(theta, eps), inner_radius)
          .with_param("eps", eps)
          .with_param("theta", theta);
  return {f.renamed(id), std::nullopt, id};
}

ComplexField make_family(FamilyKind kind, const FamilyParams& p) {
  const int n = p.dimension;
  const bool planar = kind == FamilyKind::angular_mode || kind == FamilyKind::mollified_log ||
                      kind == FamilyKind::sphere_concentrated;
  if (planar && n != 2) throw DomainError("make_family: " + to_string(kind) + " is defined in R^2 only");
  switch (kind) {
    case FamilyKind::gaussian_bump:
      return gaussian_bump(n, p.vector, get(p, "width", 1.0));
    case FamilyKind::smooth_cutoff_radial:
      return smooth_cutoff_radial(n, get(p, "r0", 1.0), get(p, "r1", 2.0));
    case FamilyKind::plane_wave_bump: {
      std::vector<double> xi = p.vector;
      if (xi.empty()) xi.assign(static_cast<size_t>(n), 0.0), xi[0] = get(p, "freq", 4.0);
      return plane_wave_bump(xi, gaussian_bump(n, {}, get(p, "width", 1.0)).re);
    }
    case FamilyKind::angular_mode:
      return angular_mode(static_cast<int>(get(p, "k", 1)), profiles::gaussian(get(p, "width", 1.0)));
    case FamilyKind::mollified_log:
      return mollified_log(get(p, "eps", 0.1), get(p, "R", 1.0));
    case FamilyKind::talenti_profile:
      return talenti_profile(static_cast<int>(get(p, "m", n)), get(p, "R", 0.0),
                             get(p, "extra", 0.0));
    case FamilyKind::halfspace_lift: {
      std::vector<double> c(static_cast<size_t>(n), 0.0);
      c.back() = get(p, "height", 2.0);
      return halfspace_lift(gaussian_bump(n, c, get(p, "width", 0.3)), get(p, "exponent", 0.5));
    }
    case FamilyKind::sphere_concentrated:
      return sphere_concentrated(get(p, "theta", 0.5 * kPi), get(p, "eps", 0.2),
                                 profiles::annular_bump(get(p, "a", 1.0), get(p, "b", 3.0)), 0.0);
  }
  throw DomainError("make_family: unknown family");
}

double angular_mean(const ScalarField& field, double r) {
  if (field.dimension() != 2) throw DomainError("angular_mean: field must live in R^2");
  constexpr int kPoints = 1024;
  double s = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double phi = 2.0 * kPi * i / kPoints;
    const double x[2] = {r * std::cos(phi), r * std::sin(phi)};
    s += field.value(x);
  }
  return s / kPoints;
}

DerivativeCheck check_derivatives(const ScalarField& field, int points, unsigned seed,
                                  double step) {
  const int n = field.dimension();
  std::mt19937 rng(seed);
  double reach = field.support_radius();
  if (!std::isfinite(reach)) reach = 4.0;
  std::uniform_real_distribution<double> uni(-reach, reach);
  // Errors are norm-wise: scaled by the largest gradient (Hessian) over the sample, since
  // pointwise ratios blow up where the field flattens out and |grad u| -> 0.
  struct Sample {
    double grad_err, lap_err, grad_norm, hess_norm, asym;
  };
  std::vector<Sample> samples;
  for (int attempt = 0; static_cast<int>(samples.size()) < points && attempt < 100 * points; ++attempt) {
    double x[kMaxDim] = {};
    for (int i = 0; i < n; ++i) x[i] = uni(rng);
    if (field.domain() == Domain::half_space) x[n - 1] = std::abs(x[n - 1]) + 10.0 * step;
    double r = 0.0;
    for (int i = 0; i < n; ++i) r += x[i] * x[i];
    if (std::sqrt(r) <= field.excluded_radius() + 10.0 * step) continue;
    const std::span<const double> xs(x, static_cast<size_t>(n));
    const Jet j = field.jet(xs);
    // Skip points where the field is numerically absent.
    if (j.grad.norm() < 1e-12 && std::abs(j.laplacian()) < 1e-12) continue;
    Vec fd_grad(n);
    double fd_lap = 0.0;
    for (int i = 0; i < n; ++i) {
      const double keep = x[i];
      x[i] = keep + step;
      const Jet p = field.jet(xs);
      x[i] = keep - step;
      const Jet m = field.jet(xs);
      x[i] = keep;
      fd_grad(i) = (p.value - m.value) / (2.0 * step);
      fd_lap += (p.grad(i) - m.grad(i)) / (2.0 * step);
    }
    samples.push_back({(fd_grad - j.grad).norm(), std::abs(fd_lap - j.laplacian()), j.grad.norm(),
                       std::max(std::abs(j.laplacian()), j.hess.norm()),
                       (j.hess - j.hess.transpose()).norm() / std::max(j.hess.norm(), 1e-300)});
  }
  double gscale = 1e-300, lscale = 1e-300;
  for (const auto& s : samples) gscale = std::max(gscale, s.grad_norm), lscale = std::max(lscale, s.hess_norm);
  DerivativeCheck out;
  for (const auto& s : samples) {
    out.max_grad_rel_error = std::max(out.max_grad_rel_error, s.grad_err / gscale);
    out.max_laplacian_rel_error = std::max(out.max_laplacian_rel_error, s.lap_err / lscale);
    out.max_hessian_asymmetry = std::max(out.max_hessian_asymmetry, s.asym);
  }
  return out;
}

}  // namespace sharpconst::fields
