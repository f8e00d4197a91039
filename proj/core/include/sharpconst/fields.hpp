#pragma once

// Analytic test functions with exact derivatives up to second order.
//
// Fields are immutable values sharing an evaluator; evaluation is pure and may
// run concurrently.  Complex test functions are carried as (re, im) pairs.

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sharpconst::fields {

inline constexpr int kMaxDim = 8;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

struct Jet {
  double value = 0.0;
  Vec grad;
  Mat hess;
  double laplacian() const { return hess.trace(); }
};

// f, f', f'' and f'/r of a profile; f'/r is supplied separately so that r = 0
// needs no division.
struct RadialJet {
  double f = 0.0, df = 0.0, d2f = 0.0, df_over_r = 0.0;
};

/// A twice differentiable function of r >= 0.
class RadialProfile {
 public:
  virtual ~RadialProfile() = default;
  virtual RadialJet eval(double r) const = 0;
  /// Radius beyond which |f| < 1e-16; +inf for slowly decaying profiles.
  virtual double support_radius() const = 0;
  /// True when f is nonincreasing on [0, inf).
  virtual bool nonincreasing() const { return false; }
  virtual bool nonnegative() const { return false; }
  /// Radius below which f vanishes identically (0 if none).
  virtual double vanishes_below() const { return 0.0; }
  virtual std::string describe() const = 0;
};
using ProfilePtr = std::shared_ptr<const RadialProfile>;

namespace profiles {
ProfilePtr gaussian(double width);                        // exp(-r^2/(2 w^2))
ProfilePtr smooth_cutoff(double r0, double r1);           // 1 on [0,r0], 0 beyond r1
ProfilePtr annular_bump(double a, double b);              // exp(-1/((r-a)(b-r))) on (a,b)
ProfilePtr mollified_log(double eps);                     // log sqrt(r^2 + eps^2)
ProfilePtr talenti(int m, double extra_decay = 0.0);      // (1+r^2)^{-(m-2)/2 - extra}
ProfilePtr p_talenti(double p, int n);                    // (1 + r^{p/(p-1)})^{-(n-p)/p}
ProfilePtr tent(double radius);                           // max(0, 1 - r/R); not C^1
ProfilePtr product(ProfilePtr f, ProfilePtr g);
ProfilePtr scaled(ProfilePtr f, double c);
ProfilePtr dilated(ProfilePtr f, double s);               // f(s r)
}  // namespace profiles

enum class Domain { whole_space, half_space, punctured_plane };

class FieldImpl {
 public:
  virtual ~FieldImpl() = default;
  virtual Jet eval(std::span<const double> x) const = 0;
};

/// Real scalar field on R^n (or a half-space / punctured plane).
class ScalarField {
 public:
  ScalarField(std::shared_ptr<const FieldImpl> impl, int dimension, Domain domain,
              double support_radius, std::string name);

  int dimension() const noexcept { return dim_; }
  Domain domain() const noexcept { return domain_; }
  double support_radius() const noexcept { return support_radius_; }
  const std::string& name() const noexcept { return name_; }

  /// The Hessian is symmetrised so that H_ij == H_ji holds bit for bit.
  Jet jet(std::span<const double> x) const {
    Jet j = impl_->eval(x);
    for (int i = 0; i < j.hess.rows(); ++i)
      for (int k = i + 1; k < j.hess.cols(); ++k) j.hess(i, k) = j.hess(k, i) = 0.5 * (j.hess(i, k) + j.hess(k, i));
    return j;
  }
  double value(std::span<const double> x) const { return impl_->eval(x).value; }
  Vec gradient(std::span<const double> x) const { return impl_->eval(x).grad; }
  Mat hessian(std::span<const double> x) const { return jet(x).hess; }
  double laplacian(std::span<const double> x) const { return impl_->eval(x).laplacian(); }

  /// Non-null iff the field is f(|x|) for this profile.
  const ProfilePtr& radial_profile() const noexcept { return radial_; }
  /// Half-space fields that vanish on {x_n = 0}.
  bool boundary_vanishing() const noexcept { return boundary_vanishing_; }
  /// Radius of a ball around the origin on which the field vanishes identically (0 if none).
  double excluded_radius() const noexcept { return excluded_radius_; }
  /// Distance from the boundary {x_n = 0} below which the field vanishes identically.
  double boundary_gap() const noexcept { return boundary_gap_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }

  ScalarField with_radial(ProfilePtr p) const;
  ScalarField with_boundary_vanishing(bool v) const;
  ScalarField with_excluded_radius(double r) const;
  ScalarField with_boundary_gap(double g) const;
  ScalarField with_domain(Domain d) const;
  ScalarField with_param(const std::string& key, double v) const;
  ScalarField renamed(std::string name) const;

 private:
  std::shared_ptr<const FieldImpl> impl_;
  int dim_;
  Domain domain_;
  double support_radius_;
  std::string name_;
  ProfilePtr radial_;
  bool boundary_vanishing_ = false;
  double excluded_radius_ = 0.0;
  double boundary_gap_ = 0.0;
  std::map<std::string, double> params_;
};

/// u = re + i im; `im` absent for real fields.
struct ComplexField {
  ScalarField re;
  std::optional<ScalarField> im;
  std::string id;

  int dimension() const { return re.dimension(); }
  double support_radius() const;
};

// ---------------------------------------------------------------------------
// Elementary fields and combinators

ScalarField radial(ProfilePtr profile, int n, std::span<const double> center = {});
ScalarField zero_field(int n);
ScalarField product(const ScalarField& a, const ScalarField& b);
ScalarField sum(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double c);
/// u_s(x) = u(s x).
ScalarField dilate(const ScalarField& a, double s);
/// cos(xi . x) (phase = 0) or sin(xi . x) (phase = 1).
ScalarField plane_wave(std::span<const double> xi, int phase);
/// Re (x1 + i x2)^k (part = 0) or Im (part = 1) in R^2.
ScalarField harmonic_polynomial(int k, int part);
/// x_n^gamma on the half-space.
ScalarField coordinate_power(int n, double gamma);
/// eta(r) * a(phi) in R^2 where eta vanishes near r = 0.
class AngularFunction {
 public:
  virtual ~AngularFunction() = default;
  /// a, a', a'' at angle phi.
  virtual void eval(double phi, double& a, double& da, double& d2a) const = 0;
};
ScalarField polar_separable(ProfilePtr eta, std::shared_ptr<const AngularFunction> angular,
                            double inner_radius);
ComplexField dilate(const ComplexField& u, double s);

// ---------------------------------------------------------------------------
// Registered families

enum class FamilyKind {
  gaussian_bump,
  smooth_cutoff_radial,
  plane_wave_bump,
  angular_mode,
  mollified_log,
  talenti_profile,
  halfspace_lift,
  sphere_concentrated,
};

std::optional<FamilyKind> family_from_string(const std::string& s);
std::string to_string(FamilyKind k);

ComplexField gaussian_bump(int n, std::span<const double> center, double width);
ComplexField smooth_cutoff_radial(int n, double r0, double r1);
/// e^{i xi.x} * base.
ComplexField plane_wave_bump(std::span<const double> xi, const ScalarField& base);
/// g(|x|) (x1 + i x2)^k in R^2; the angular mean vanishes for k >= 1.
ComplexField angular_mode(int k, ProfilePtr radial_factor);
/// eta(|x|) log sqrt(|x|^2 + eps^2) with eta = 1 on [0, R/2] and 0 beyond R.
ComplexField mollified_log(double eps, double cutoff_radius = 1.0);
/// (1+|z|^2)^{-(m-2)/2 - extra_decay} on R^m, optionally cut off smoothly on [R, 2R].
ComplexField talenti_profile(int m, double cutoff_radius = 0.0, double extra_decay = 0.0);
/// x_n^{exponent} v for a half-space field v (exponent = +-1/2).
ComplexField halfspace_lift(const ComplexField& v, double exponent);
/// eta(|x|) rho_eps(angle(x) - theta): concentration on the ray through theta, R^2.
ComplexField sphere_concentrated(double theta, double eps, ProfilePtr eta, double inner_radius);

/// Named-parameter dispatcher used by the CLI.
struct FamilyParams {
  int dimension = 2;
  std::map<std::string, double> values;
  std::vector<double> vector;  // centre or frequency
};
ComplexField make_family(FamilyKind kind, const FamilyParams& params);

/// (1/2pi) int_0^{2pi} u(r cos phi, r sin phi) dphi, 1024-point trapezoid.
double angular_mean(const ScalarField& field, double r);

struct DerivativeCheck {
  double max_grad_rel_error = 0.0;
  double max_laplacian_rel_error = 0.0;
  double max_hessian_asymmetry = 0.0;
};
/// Central differences at random points inside the support.  Errors are relative to
/// the largest analytic gradient (Hessian) norm over the sampled points.
DerivativeCheck check_derivatives(const ScalarField& field, int points, unsigned seed,
                                  double step = 1e-5);

}  // namespace sharpconst::fields
