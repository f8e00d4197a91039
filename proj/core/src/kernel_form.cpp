#include "sharpconst/kernel_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sharpconst/errors.hpp"

namespace sharpconst::kernel {

namespace {

constexpr int kOrder = 8;

struct Rule {
  double x[kOrder];
  double w[kOrder];
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
const Rule& gauss_legendre() {
  static const Rule rule = [] {
    Rule r{};
    for (int i = 0; i < kOrder; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      double dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= kOrder; ++k) {
          const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = kOrder * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.x[i] = z;
      r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

struct Node {
  double x1, x2;
  std::complex<double> hw;  // h times the quadrature weight
};

std::vector<Node> nodes(const ComplexFn& h, const PolarWindow& w, int radial_panels, int angular_panels) {
  if (!(w.r_hi > w.r_lo) || !(w.phi_hi > w.phi_lo)) throw DomainError("kernel_form: empty window");
  if (w.log_radial && !(w.r_lo > 0.0)) throw DomainError("kernel_form: log panels need r_lo > 0");
  const Rule& g = gauss_legendre();
  std::vector<Node> out;
  out.reserve(static_cast<size_t>(radial_panels * angular_panels * kOrder * kOrder));
  const double t_lo = w.log_radial ? std::log(w.r_lo) : w.r_lo;
  const double t_hi = w.log_radial ? std::log(w.r_hi) : w.r_hi;
  const double dt = (t_hi - t_lo) / radial_panels;
  const double dphi = (w.phi_hi - w.phi_lo) / angular_panels;
  for (int pr = 0; pr < radial_panels; ++pr) {
    for (int i = 0; i < kOrder; ++i) {
      const double t = t_lo + dt * (pr + 0.5 * (g.x[i] + 1.0));
      const double r = w.log_radial ? std::exp(t) : t;
      // dx = r dr dphi, dr = r dt on log panels.
      const double wr = 0.5 * dt * g.w[i] * r * (w.log_radial ? r : 1.0);
      for (int pa = 0; pa < angular_panels; ++pa) {
        for (int j = 0; j < kOrder; ++j) {
          const double phi = w.phi_lo + dphi * (pa + 0.5 * (g.x[j] + 1.0));
          const double x1 = r * std::cos(phi), x2 = r * std::sin(phi);
          const std::complex<double> hv = h(x1, x2);
          if (hv == 0.0) continue;
          out.push_back({x1, x2, hv * (wr * 0.5 * dphi * g.w[j])});
        }
      }
    }
  }
  return out;
}

std::complex<double> pair_sum(const std::vector<Node>& pts, const specfun::MatrixForm& a) {
  const std::complex<double> c11 = a(0, 0), c12 = a(0, 1) + a(1, 0), c22 = a(1, 1);
  std::complex<double> total = 0.0;
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) {
    std::complex<double> row = 0.0;
    for (size_t j = i + 1; j < n; ++j) {
      const double z1 = pts[i].x1 - pts[j].x1, z2 = pts[i].x2 - pts[j].x2;
      const double zz = z1 * z1 + z2 * z2;
      if (zz == 0.0) continue;
      const std::complex<double> k = -0.5 * (c11 * (z1 * z1) + c12 * (z1 * z2) + c22 * (z2 * z2)) / zz;
      row += k * (2.0 * std::real(pts[i].hw * std::conj(pts[j].hw)));
    }
    total += row;
  }
  // Diagonal terms: K has zero mean over directions, so the coincident pairs carry no mass.
  return total / (2.0 * std::numbers::pi);
}

}  // namespace

std::complex<double> kernel(const specfun::MatrixForm& a, double z1, double z2) {
  if (a.n() != 2) throw DomainError("kernel: only n = 2 is supported");
  const double zz = z1 * z1 + z2 * z2;
  if (zz == 0.0) throw DomainError("kernel: K is not defined at z = 0");
  return -0.5 * (a(0, 0) * (z1 * z1) + (a(0, 1) + a(1, 0)) * (z1 * z2) + a(1, 1) * (z2 * z2)) / zz;
}

KernelResult kernel_form(const ComplexFn& h, const PolarWindow& w, const specfun::MatrixForm& a) {
  if (a.n() != 2) throw DomainError("kernel_form: only n = 2 is supported");
  KernelResult r;
  r.value = pair_sum(nodes(h, w, w.radial_panels, w.angular_panels), a);
  const int rp = std::max(1, w.radial_panels / 2), ap = std::max(1, w.angular_panels / 2);
  r.abs_error_estimate = std::abs(r.value - pair_sum(nodes(h, w, rp, ap), a));
  return r;
}

namespace {

std::complex<double> smooth_rule(const ComplexFn& h, double R, const specfun::MatrixForm& a, int panels) {
  const Rule& g = gauss_legendre();
  const int angles = 8 * panels;
  std::vector<double> ca(static_cast<size_t>(angles)), sa(ca.size());
  std::vector<std::complex<double>> ka(ca.size());
  for (int j = 0; j < angles; ++j) {
    const double al = 2.0 * std::numbers::pi * j / angles;
    ca[static_cast<size_t>(j)] = std::cos(al);
    sa[static_cast<size_t>(j)] = std::sin(al);
    ka[static_cast<size_t>(j)] = kernel(a, ca[static_cast<size_t>(j)], sa[static_cast<size_t>(j)]);
  }
  PolarWindow outer;
  outer.r_hi = R;
  outer.radial_panels = panels;
  outer.angular_panels = panels;
  const std::vector<Node> xs = nodes(h, outer, panels, panels);
  std::complex<double> total = 0.0;
  for (const Node& x : xs) {
    // |x - y| <= |x| + R covers the support of h.
    const double T = std::hypot(x.x1, x.x2) + R;
    const double dt = T / panels;
    std::complex<double> conv = 0.0;
    for (int p = 0; p < panels; ++p) {
      for (int i = 0; i < kOrder; ++i) {
        const double t = dt * (p + 0.5 * (g.x[i] + 1.0));
        const double wt = 0.5 * dt * g.w[i] * t * (2.0 * std::numbers::pi / angles);
        std::complex<double> ring = 0.0;
        for (int j = 0; j < angles; ++j) {
          const double y1 = x.x1 - t * ca[static_cast<size_t>(j)], y2 = x.x2 - t * sa[static_cast<size_t>(j)];
          if (y1 * y1 + y2 * y2 > R * R) continue;
          ring += ka[static_cast<size_t>(j)] * h(y1, y2);
        }
        conv += wt * ring;
      }
    }
    total += conv * std::conj(x.hw);
  }
  return total / (2.0 * std::numbers::pi);
}

}  // namespace

KernelResult kernel_form_smooth(const ComplexFn& h, double support_radius, const specfun::MatrixForm& a,
                                int panels) {
  if (a.n() != 2) throw DomainError("kernel_form_smooth: only n = 2 is supported");
  if (!(support_radius > 0.0) || !std::isfinite(support_radius))
    throw DomainError("kernel_form_smooth: need a finite support radius");
  KernelResult r;
  r.value = smooth_rule(h, support_radius, a, panels);
  r.abs_error_estimate = std::abs(r.value - smooth_rule(h, support_radius, a, std::max(2, panels / 2)));
  return r;
}

double l1_norm(const ComplexFn& h, const PolarWindow& w) {
  double s = 0.0;
  for (const Node& p : nodes(h, w, w.radial_panels, w.angular_panels)) s += std::abs(p.hw);
  return s;
}

}  // namespace sharpconst::kernel
