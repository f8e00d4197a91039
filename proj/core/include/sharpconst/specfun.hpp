#pragma once

// Closed-form sharp constants built from Gamma-function expressions.
//
// All formulas are evaluated in log-space where Gamma factors appear, so the
// results stay finite for large dimensions and exponents.

#include <complex>
#include <string>
#include <vector>

namespace sharpconst::specfun {

/// Exponents and dimension of a weighted Hardy-Sobolev problem
///   (int |u|^q |x|^-b)^(1/q) <= C (int |grad u|^p |x|^-a)^(1/p)  on R^n.
///
/// Construction enforces 1 <= p < n, 0 <= a < n-p and a n/(n-p) <= b <= a+p.
class HSParams {
 public:
  HSParams(double p, double a, double b, int n);

  double p() const noexcept { return p_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int n() const noexcept { return n_; }

  /// Exponent q = (n-b)p/(n-p-a) for which the Lorentz estimate is an L^q estimate.
  double critical_q() const noexcept;

  /// Non-throwing validity check; on failure `reason` names the violated condition.
  static bool valid(double p, double a, double b, int n, std::string* reason = nullptr);

 private:
  double p_, a_, b_;
  int n_;
};

/// Constant-coefficient complex n x n matrix defining <A grad u, grad u>.
class MatrixForm {
 public:
  using Complex = std::complex<double>;

  explicit MatrixForm(int n);
  MatrixForm(int n, std::vector<Complex> row_major);
  static MatrixForm real(int n, const std::vector<double>& row_major);

  int n() const noexcept { return n_; }
  Complex operator()(int i, int j) const { return a_[static_cast<size_t>(i * n_ + j)]; }
  Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i * n_ + j)]; }

  Complex trace() const noexcept;
  /// Exact comparison with zero; the entries are user data, not computed values.
  bool trace_is_zero() const noexcept { return trace() == Complex{0.0, 0.0}; }

  /// sum_ij a_ij w_i w_j for a real vector w.
  Complex evaluate(const double* w) const noexcept;
  MatrixForm transposed() const;
  MatrixForm scaled(double c) const;

 private:
  int n_;
  std::vector<Complex> a_;
};

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// max over real unit vectors w of |sum_ij a_ij w_i w_j|.
double sphere_max_abs(const MatrixForm& a);

/// Best constant in |int <A grad u, grad u>| <= C (int |(-Delta)^{(n+2)/4} u|)^2.
/// Throws NoFiniteConstant when tr A != 0.
double qf_best_constant(const MatrixForm& a);

/// Best constant for P(D), Q(D) whose ratio P/|Q|^2 is a spherical harmonic:
/// (4 pi)^{-n/2} Gamma(m)/Gamma(n/2+m) * max_abs_ratio.  Supported for m > 0.
double z10_constant(int n, double m, double max_abs_ratio);

/// Constant A_{p,q} of the capacitary integral inequality.
double capacitary_Apq(double p, double q);

/// Best constant of the isocapacitary inequality mu_b(K)^{(n-p-a)/(n-b)} <= c cap_{p,a}(K).
double isocap_constant(const HSParams& h);

/// Best constant of the Lorentz-norm Hardy-Sobolev inequality for exponent q >= p.
double hs_constant(const HSParams& h, double q);

/// hs_constant at q = (n-b)p/(n-p-a): the sharp weighted L^q estimate.
double hs_constant_critical(const HSParams& h);

/// Sharp Sobolev constant S_m in int |grad w|^2 >= S_m ||w||^2_{2m/(m-2)} on R^m, m >= 3.
double sobolev_constant(int m);

/// Sharp constant of the Sobolev remainder term in the half-space Hardy inequality on R^n_+.
double hardy_remainder_constant(int n);

/// x^y with the convention 0^0 = 1; requires x >= 0.
double pow0(double x, double y);

}  // namespace sharpconst::specfun
