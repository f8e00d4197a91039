#include "sharpconst/sl_eigen.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sharpconst/errors.hpp"
#include "sharpconst/quad.hpp"

namespace sharpconst::sl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-300;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> x, w;
};

GaussRule make_gauss(int n) {
  GaussRule r;
  r.x.resize(static_cast<size_t>(n));
  r.w.resize(static_cast<size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[static_cast<size_t>(i)] = 0.5 * (1.0 - z);
    r.x[static_cast<size_t>(n - 1 - i)] = 0.5 * (1.0 + z);
    r.w[static_cast<size_t>(i)] = r.w[static_cast<size_t>(n - 1 - i)] = 0.5 * w;
  }
  return r;
}

const GaussRule& gauss16() {
  static const GaussRule r = make_gauss(16);
  return r;
}

Where at_lo_end(double seg_lo, double seg_hi, double d) {
  return {seg_lo + d, seg_lo, seg_hi, d, (seg_hi - seg_lo) - d};
}
Where at_hi_end(double seg_lo, double seg_hi, double d) {
  return {seg_hi - d, seg_lo, seg_hi, (seg_hi - seg_lo) - d, d};
}

double nearest_t(const Where& w) {
  return w.from_lo <= w.from_hi ? w.seg_lo + w.from_lo : w.seg_hi - w.from_hi;
}

// Position in t = sin(phi) coordinates on (0, 1) with exact distance to 0.
Where sin_where(const Where& w) {
  const double t = abs_sin(w);
  return {t, 0.0, 1.0, t, 1.0 - t};
}

// Position in t = cos(theta) coordinates on (-1, 1); 1 - cos d = 2 sin^2(d/2).
Where cos_where(const Where& w) {
  const double t = std::cos(w.x);
  if (w.from_lo <= w.from_hi) {
    const double s = std::sin(0.5 * w.from_lo);
    return {t, -1.0, 1.0, 2.0 - 2.0 * s * s, 2.0 * s * s};
  }
  const double s = std::sin(0.5 * w.from_hi);
  return {t, -1.0, 1.0, 2.0 * s * s, 2.0 - 2.0 * s * s};
}

EndpointClass times_power(const EndpointClass& c, double scale_alpha, double add_alpha) {
  EndpointClass out = c;
  if (c.kind == EndpointClass::Kind::regular) {
    if (add_alpha == 0.0) return out;
    return EndpointClass::power(add_alpha);
  }
  out.alpha = scale_alpha * c.alpha + add_alpha;
  return out;
}

}  // namespace

double abs_sin(const Where& w) {
  const bool lower = w.from_lo <= w.from_hi;
  const double e = lower ? w.seg_lo : w.seg_hi;
  const double d = lower ? w.from_lo : w.from_hi;
  const double k = std::round(e / kPi);
  if (std::abs(e - k * kPi) <= 1e-12 * std::max(1.0, std::abs(e))) return std::abs(std::sin(d));
  return std::abs(std::sin(w.x));
}

// ---------------------------------------------------------------------------
// EndpointClass and WeightExpr

double EndpointClass::model(double d) const {
  switch (kind) {
    case Kind::regular:
      return 1.0;
    case Kind::power:
      return std::pow(d, alpha);
    case Kind::power_log:
      return std::pow(d, alpha) * std::pow(1.0 - std::log(d), beta);
  }
  return 1.0;
}

bool EndpointClass::integrable(double extra) const {
  if (kind == Kind::regular) return true;
  const double a = alpha + extra;
  if (a > -1.0) return true;
  return kind == Kind::power_log && a == -1.0 && beta < -1.0;
}

std::string EndpointClass::describe() const {
  switch (kind) {
    case Kind::regular:
      return "regular";
    case Kind::power:
      return "power(" + fmt(alpha) + ")";
    case Kind::power_log:
      return "power_log(" + fmt(alpha) + "," + fmt(beta) + ")";
  }
  return "";
}

WeightExpr::WeightExpr(Fn f, EndpointClass at_lo, EndpointClass at_hi, std::string name)
    : f_(std::move(f)), lo_(at_lo), hi_(at_hi), name_(std::move(name)) {}

WeightExpr WeightExpr::of_t(std::function<double(double)> f, double lo, double hi,
                            EndpointClass at_lo, EndpointClass at_hi, std::string name) {
  WeightExpr w([f = std::move(f)](const Where& p) { return f(nearest_t(p)); }, at_lo, at_hi,
               std::move(name));
  w.self_test(lo, hi);
  return w;
}

WeightExpr WeightExpr::constant(double c, std::string name) {
  if (name.empty()) name = fmt(c);
  return WeightExpr([c](const Where&) { return c; }, EndpointClass::regular(),
                    EndpointClass::regular(), std::move(name));
}

void WeightExpr::self_test(double lo, double hi) const {
  auto check = [&](const EndpointClass& c, bool lower) {
    if (c.kind == EndpointClass::Kind::regular) return;
    double ratio[2];
    const double ds[2] = {1e-6, 1e-9};
    for (int i = 0; i < 2; ++i) {
      const Where w = lower ? at_lo_end(lo, hi, ds[i]) : at_hi_end(lo, hi, ds[i]);
      ratio[i] = f_(w) / c.model(ds[i]);
    }
    if (ratio[0] == 0.0 && ratio[1] == 0.0) return;  // identically zero near the end
    const bool ok = std::isfinite(ratio[0]) && std::isfinite(ratio[1]) && ratio[0] > 0.0 &&
                    ratio[1] > 0.0 && std::max(ratio[0], ratio[1]) <= 2.0 * std::min(ratio[0], ratio[1]);
    if (!ok)
      throw DomainError("weight '" + name_ + "' does not match its declared " +
                        (lower ? "lower" : "upper") + " endpoint class " + c.describe());
  };
  check(lo_, true);
  check(hi_, false);
}

// ---------------------------------------------------------------------------
// SLProblem

SLProblem::SLProblem(double lo, double hi, WeightExpr leading, WeightExpr potential, WeightExpr rhs,
                     Boundary boundary, std::vector<double> breaks, std::string name)
    : lo_(lo),
      hi_(hi),
      leading_(std::move(leading)),
      potential_(std::move(potential)),
      rhs_(std::move(rhs)),
      boundary_(boundary),
      breaks_(std::move(breaks)),
      name_(std::move(name)) {
  if (!(hi_ > lo_)) throw DomainError("SLProblem: need lo < hi");
  std::sort(breaks_.begin(), breaks_.end());
  for (double b : breaks_)
    if (!(b > lo_ && b < hi_)) throw DomainError("SLProblem: breakpoints must lie inside the interval");
  const std::vector<double> pts = segment_points();
  for (const WeightExpr* w : {&leading_, &potential_, &rhs_}) {
    w->self_test(pts[0], pts[1]);
    w->self_test(pts[pts.size() - 2], pts.back());
  }
  for (const WeightExpr* w : {&leading_, &potential_})
    if (!w->at_lo().integrable() || !w->at_hi().integrable())
      throw DomainError("SLProblem: weight '" + w->name() + "' is not integrable");
  if (leading_.at_lo().alpha < 0.0 || leading_.at_hi().alpha < 0.0)
    throw DomainError("SLProblem: leading weight may not blow up at an endpoint");
}

std::vector<double> SLProblem::segment_points() const {
  std::vector<double> pts{lo_};
  pts.insert(pts.end(), breaks_.begin(), breaks_.end());
  pts.push_back(hi_);
  return pts;
}

// ---------------------------------------------------------------------------
// Endpoint-aware one-dimensional integrals

namespace {

// int_0^L g(d) dd where g ~ c(d) near d = 0.  Log-critical classes use the
// substitution S = (1 - log d)^{beta+1} on [0, min(L, 1e-2)].
double endpoint_integral(const std::function<double(double)>& g, const EndpointClass& c, double L,
                         double rel_tol = 1e-12) {
  if (!c.integrable()) return kInf;
  quad::QuadOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = 1e-300;
  o.throw_on_failure = false;
  o.max_evaluations = 400000;
  if (c.kind == EndpointClass::Kind::regular) return quad::integrate(g, 0.0, L, o).value;
  if (c.alpha > -1.0) {
    // d = L v^{1/(1+alpha)} removes the algebraic singularity.
    const double e = 1.0 / (1.0 + c.alpha);
    o.grade_lower = c.kind == EndpointClass::Kind::power_log;
    return quad::integrate(
               [&](double v) {
                 if (v <= 0.0) return 0.0;
                 const double d = std::max(L * std::pow(v, e), kTiny);
                 return g(d) * L * e * std::pow(v, e - 1.0);
               },
               0.0, 1.0, o)
        .value;
  }
  const double b1 = c.beta + 1.0;
  const double delta = std::min(L, 1e-2);
  const double s_top = std::pow(1.0 - std::log(delta), b1);
  o.grade_lower = true;
  const double near = quad::integrate(
                          [&](double S) {
                            if (S <= 0.0) return 0.0;
                            const double lg = 1.0 - std::pow(S, 1.0 / b1);  // log d
                            const double d = std::max(std::exp(lg), kTiny);
                            const double ld = 1.0 - std::max(lg, std::log(kTiny));
                            return g(d) * d / (-b1 * std::pow(ld, c.beta));
                          },
                          0.0, s_top, o)
                          .value;
  o.grade_lower = false;
  const double far = delta < L ? quad::integrate(g, delta, L, o).value : 0.0;
  return near + far;
}

}  // namespace

// ---------------------------------------------------------------------------
// Standard weights on (0, 1)

namespace weights {
WeightExpr one() {
  return WeightExpr::of_t([](double) { return 1.0; }, 0.0, 1.0, EndpointClass::regular(),
                          EndpointClass::regular(), "1");
}
WeightExpr log_critical() {
  return WeightExpr::of_t(
      [](double t) {
        const double l = 1.0 - std::log(t);
        return 1.0 / (t * l * l);
      },
      0.0, 1.0, EndpointClass::power_log(-1.0, -2.0), EndpointClass::regular(),
      "t^-1(1-log t)^-2");
}
WeightExpr inverse() {
  return WeightExpr::of_t([](double t) { return 1.0 / t; }, 0.0, 1.0, EndpointClass::power(-1.0),
                          EndpointClass::regular(), "t^-1");
}
WeightExpr sqrt_t() {
  return WeightExpr::of_t([](double t) { return std::sqrt(t); }, 0.0, 1.0,
                          EndpointClass::power(0.5), EndpointClass::regular(), "t^(1/2)");
}
WeightExpr inverse_log() {
  return WeightExpr::of_t([](double t) { return 1.0 / (1.0 - std::log(t)); }, 0.0, 1.0,
                          EndpointClass::power_log(0.0, -1.0), EndpointClass::regular(),
                          "(1-log t)^-1");
}
}  // namespace weights

// ---------------------------------------------------------------------------
// Problem constructors

SLProblem build_problem(ProblemKind kind, const ProblemParams& params) {
  const auto sin_power = EndpointClass::power(1.0);
  auto leading_sin = [&](double c, std::string name) {
    return WeightExpr([c](const Where& w) { return c * abs_sin(w); }, sin_power, sin_power,
                      std::move(name));
  };
  switch (kind) {
    case ProblemKind::corollary2:
      return build_problem(ProblemKind::theorem31, {weights::one(), {}, 0.0, 3, {}});
    case ProblemKind::corollary81:
      return build_problem(ProblemKind::theorem31, {weights::log_critical(), {}, 0.0, 3, {}});
    case ProblemKind::theorem31: {
      if (!params.q) throw DomainError("theorem31 needs a weight q");
      const WeightExpr q = *params.q;
      WeightExpr rhs([q](const Where& w) { return q(sin_where(w)); }, q.at_lo(), q.at_lo(),
                     "q(sin phi) with q = " + q.name());
      return SLProblem(0.0, kPi, leading_sin(1.0, "sin phi"), leading_sin(0.25, "sin phi / 4"),
                       std::move(rhs), Boundary::natural, {}, "theorem31[q=" + q.name() + "]");
    }
    case ProblemKind::remark7: {
      const WeightExpr p = params.p ? *params.p : WeightExpr::constant(1.0, "1");
      const WeightExpr q = params.q ? *params.q : WeightExpr::constant(1.0, "1");
      const int n = params.n;
      if (n < 2) throw DomainError("remark7: need n >= 2");
      const double c = params.mu - 1.0 + 0.5 * n;
      auto compose = [n](const WeightExpr& f, double factor, std::string name) {
        // theta = 0 sees f near t = 1; theta = pi sees f near t = -1.
        return WeightExpr(
            [f, factor, n](const Where& w) {
              return factor * f(cos_where(w)) * std::pow(abs_sin(w), n - 2);
            },
            times_power(f.at_hi(), 2.0, n - 2.0), times_power(f.at_lo(), 2.0, n - 2.0),
            std::move(name));
      };
      return SLProblem(0.0, kPi, compose(p, 1.0, "p(cos) sin^(n-2)"),
                       compose(p, c * c, "(mu-1+n/2)^2 p(cos) sin^(n-2)"),
                       compose(q, 1.0, "q(cos) sin^(n-2)"), Boundary::natural, {},
                       "remark7[n=" + std::to_string(n) + ",mu=" + fmt(params.mu) + "]");
    }
    case ProblemKind::remark8: {
      if (!params.p) throw DomainError("remark8 needs a weight p");
      const WeightExpr p = *params.p;
      const double mu2 = params.mu * params.mu;
      WeightExpr leading([p](const Where& w) { return p(sin_where(w)); }, p.at_lo(), p.at_lo(),
                         "p(sin phi)");
      WeightExpr potential([p, mu2](const Where& w) { return mu2 * p(sin_where(w)); }, p.at_lo(),
                           p.at_lo(), "mu^2 p(sin phi)");
      std::optional<WeightExpr> rhs = params.rhs_angle;
      if (!rhs) {
        if (!params.q) throw DomainError("remark8 needs q or an angular rhs");
        const WeightExpr q = *params.q;
        rhs = WeightExpr([q](const Where& w) { return q(sin_where(w)); }, q.at_lo(), q.at_lo(),
                         "q(sin phi)");
      }
      return SLProblem(0.0, 2.0 * kPi, std::move(leading), std::move(potential), *rhs,
                       Boundary::periodic, {kPi}, "remark8[mu=" + fmt(params.mu) + "]");
    }
  }
  throw DomainError("build_problem: unknown kind");
}

// ---------------------------------------------------------------------------
// Finite elements

namespace {

constexpr double kGradeRatio = 0.75;

struct Segment {
  double lo = 0.0, hi = 0.0;
  bool graded_lo = false, graded_hi = false;
  std::vector<double> lengths;
};

bool singular(const EndpointClass& c) { return c.kind != EndpointClass::Kind::regular; }
bool log_class(const EndpointClass& c) { return c.kind == EndpointClass::Kind::power_log; }

std::vector<Segment> base_mesh(const SLProblem& pb, const SolveOptions& opts) {
  const std::vector<double> pts = pb.segment_points();
  const WeightExpr* ws[3] = {&pb.leading(), &pb.potential(), &pb.rhs()};
  bool sing_lo = false, sing_hi = false, deep_lo = false, deep_hi = false;
  for (const WeightExpr* w : ws) {
    sing_lo = sing_lo || singular(w->at_lo());
    sing_hi = sing_hi || singular(w->at_hi());
    deep_lo = deep_lo || log_class(w->at_lo());
    deep_hi = deep_hi || log_class(w->at_hi());
  }
  std::vector<Segment> segs;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Segment s;
    s.lo = pts[i];
    s.hi = pts[i + 1];
    s.graded_lo = sing_lo;
    s.graded_hi = sing_hi;
    const double L = s.hi - s.lo;
    const int n0 = std::max(opts.base_elements, 8);
    const double h0 = L / n0;
    auto layers = [&](bool graded, bool deep) -> std::vector<double> {
      if (!graded) return {};
      int k = opts.graded_layers;
      if (deep)
        k = std::max(k, static_cast<int>(std::ceil(std::log(opts.log_class_depth / h0) /
                                                   std::log(kGradeRatio))));
      // Endpoint element first, then growing layers.
      std::vector<double> v{h0 * std::pow(kGradeRatio, k)};
      for (int j = k; j >= 1; --j) v.push_back(h0 * std::pow(kGradeRatio, j));
      return v;
    };
    const std::vector<double> left = layers(s.graded_lo, deep_lo);
    std::vector<double> right = layers(s.graded_hi, deep_hi);
    double g = 0.0;
    for (double x : left) g += x;
    for (double x : right) g += x;
    const double mid = (L - g) / n0;
    s.lengths = left;
    for (int j = 0; j < n0; ++j) s.lengths.push_back(mid);
    std::reverse(right.begin(), right.end());
    s.lengths.insert(s.lengths.end(), right.begin(), right.end());
    segs.push_back(std::move(s));
  }
  return segs;
}

Segment refine(const Segment& s) {
  Segment r = s;
  r.lengths.clear();
  r.lengths.reserve(2 * s.lengths.size());
  for (double h : s.lengths) r.lengths.insert(r.lengths.end(), {0.5 * h, 0.5 * h});
  return r;
}

// Symmetric tridiagonal matrix with an optional (0, n-1) corner.
struct Tridiag {
  std::vector<double> d, o;
  double corner = 0.0;
  bool cyclic = false;
  int size() const { return static_cast<int>(d.size()); }
};

struct Pencil {
  Tridiag K, M;
  std::vector<double> x;       // node positions (reduced numbering)
  std::vector<int> full_to_reduced;
  std::vector<double> full_x;  // node positions (full numbering)
  long elements = 0;
};

// Moments of one element: mean of p, int V N_a N_b, int w N_a N_b.
struct Moments {
  double p = 0.0;
  double v[3] = {0, 0, 0};  // 00, 01, 11
  double w[3] = {0, 0, 0};
};

Moments element_moments(const SLProblem& pb, const Segment& s, double from_lo0, double from_hi1,
                        double h, bool lo_end, bool hi_end, bool drop_lo, bool drop_hi) {
  Moments m;
  const bool special = (lo_end && s.graded_lo) || (hi_end && s.graded_hi);
  if (!special) {
    const GaussRule& g = gauss16();
    for (size_t i = 0; i < g.x.size(); ++i) {
      const double t = g.x[i];
      const Where w{s.lo + from_lo0 + h * t, s.lo, s.hi, from_lo0 + h * t, from_hi1 + h * (1.0 - t)};
      const double wt = g.w[i] * h;
      const double n0 = 1.0 - t, n1 = t;
      const double pv = pb.potential()(w), rv = pb.rhs()(w);
      m.p += g.w[i] * pb.leading()(w);
      m.v[0] += wt * pv * n0 * n0, m.v[1] += wt * pv * n0 * n1, m.v[2] += wt * pv * n1 * n1;
      m.w[0] += wt * rv * n0 * n0, m.w[1] += wt * rv * n0 * n1, m.w[2] += wt * rv * n1 * n1;
    }
    return m;
  }
  // d is the distance from the singular end; `e` the endpoint basis, `i` the interior one.
  const bool at_lo = lo_end && s.graded_lo;
  auto where = [&](double d) {
    return at_lo ? Where{s.lo + d, s.lo, s.hi, d, (from_hi1 + h) - d}
                 : Where{s.hi - d, s.lo, s.hi, (from_lo0 + h) - d, d};
  };
  const bool drop_end = at_lo ? drop_lo : drop_hi;
  auto moment = [&](const WeightExpr& wx, int power_interior) {
    // power_interior: number of interior-basis factors (0, 1, 2); the rest are endpoint basis.
    const EndpointClass& c = at_lo ? wx.at_lo() : wx.at_hi();
    const int power_end = 2 - power_interior;
    if (drop_end && power_end > 0) return 0.0;
    EndpointClass eff = c;
    if (c.kind == EndpointClass::Kind::regular && power_interior > 0)
      eff = EndpointClass::power(power_interior);
    else if (c.kind != EndpointClass::Kind::regular)
      eff.alpha += power_interior;
    return endpoint_integral(
        [&](double d) {
          const double bi = d / h, be = 1.0 - d / h;
          return wx(where(d)) * std::pow(bi, power_interior) * std::pow(be, power_end);
        },
        eff, h, 1e-13);
  };
  // Mean of p over the element, integrated in u = d / h so it cannot underflow.
  const EndpointClass& pc = at_lo ? pb.leading().at_lo() : pb.leading().at_hi();
  if (pc.kind == EndpointClass::Kind::power_log)
    m.p = endpoint_integral([&](double d) { return pb.leading()(where(d)); }, pc, h, 1e-13) / h;
  else
    m.p = endpoint_integral([&](double u) { return pb.leading()(where(h * u)); }, pc, 1.0, 1e-13);
  const double ve = moment(pb.potential(), 0), vx = moment(pb.potential(), 1),
               vi = moment(pb.potential(), 2);
  const double we = moment(pb.rhs(), 0), wxm = moment(pb.rhs(), 1), wi = moment(pb.rhs(), 2);
  if (at_lo) {
    m.v[0] = ve, m.v[1] = vx, m.v[2] = vi;
    m.w[0] = we, m.w[1] = wxm, m.w[2] = wi;
  } else {
    m.v[0] = vi, m.v[1] = vx, m.v[2] = ve;
    m.w[0] = wi, m.w[1] = wxm, m.w[2] = we;
  }
  return m;
}

Pencil assemble(const SLProblem& pb, const std::vector<Segment>& segs) {
  const bool periodic = pb.boundary() == Boundary::periodic;
  const bool dirichlet = pb.boundary() == Boundary::dirichlet;
  size_t full_nodes = 1;
  for (const auto& s : segs) full_nodes += s.lengths.size();
  std::vector<double> Kd(full_nodes, 0.0), Ko(full_nodes - 1, 0.0), Md(full_nodes, 0.0),
      Mo(full_nodes - 1, 0.0), xs(full_nodes, 0.0);
  size_t base = 0;
  long elements = 0;
  for (size_t si = 0; si < segs.size(); ++si) {
    const Segment& s = segs[si];
    const size_t m = s.lengths.size();
    std::vector<double> pre(m + 1, 0.0), suf(m + 1, 0.0);
    for (size_t i = 0; i < m; ++i) pre[i + 1] = pre[i] + s.lengths[i];
    for (size_t i = m; i-- > 0;) suf[i] = suf[i + 1] + s.lengths[i];
    for (size_t i = 0; i <= m; ++i)
      xs[base + i] = pre[i] <= suf[i] ? s.lo + pre[i] : s.hi - suf[i];
    for (size_t i = 0; i < m; ++i) {
      const double h = s.lengths[i];
      const bool lo_end = i == 0, hi_end = i + 1 == m;
      const bool drop_lo = dirichlet && si == 0 && lo_end;
      const bool drop_hi = dirichlet && si + 1 == segs.size() && hi_end;
      const Moments mm = element_moments(pb, s, pre[i], suf[i + 1], h, lo_end, hi_end, drop_lo, drop_hi);
      const size_t a = base + i;
      const double k = mm.p / h;
      Kd[a] += k + mm.v[0];
      Kd[a + 1] += k + mm.v[2];
      Ko[a] += -k + mm.v[1];
      Md[a] += mm.w[0];
      Md[a + 1] += mm.w[2];
      Mo[a] += mm.w[1];
      ++elements;
    }
    base += m;
  }
  Pencil pc;
  pc.elements = elements;
  pc.full_x = xs;
  const int nf = static_cast<int>(full_nodes);
  pc.full_to_reduced.assign(full_nodes, -1);
  auto take = [&](int first, int last) {
    for (int i = first; i <= last; ++i) {
      pc.full_to_reduced[static_cast<size_t>(i)] = i - first;
      pc.x.push_back(xs[static_cast<size_t>(i)]);
    }
    pc.K.d.assign(Kd.begin() + first, Kd.begin() + last + 1);
    pc.M.d.assign(Md.begin() + first, Md.begin() + last + 1);
    pc.K.o.assign(Ko.begin() + first, Ko.begin() + last);
    pc.M.o.assign(Mo.begin() + first, Mo.begin() + last);
  };
  if (dirichlet) {
    take(1, nf - 2);
  } else if (periodic) {
    take(0, nf - 2);
    pc.full_to_reduced[static_cast<size_t>(nf - 1)] = 0;
    pc.K.d[0] += Kd[static_cast<size_t>(nf - 1)];
    pc.M.d[0] += Md[static_cast<size_t>(nf - 1)];
    pc.K.cyclic = pc.M.cyclic = true;
    pc.K.corner = Ko[static_cast<size_t>(nf - 2)];
    pc.M.corner = Mo[static_cast<size_t>(nf - 2)];
  } else {
    take(0, nf - 1);
  }
  return pc;
}

// Number of negative pivots of K - sigma M (= eigenvalues below sigma).
int sturm_count(const Pencil& pc, double sigma) {
  const int n = pc.K.size();
  const auto& Kd = pc.K.d;
  const auto& Md = pc.M.d;
  auto offd = [&](int i) { return pc.K.o[static_cast<size_t>(i)] - sigma * pc.M.o[static_cast<size_t>(i)]; };
  auto guard = [](double d) { return d == 0.0 ? -1e-300 : d; };
  int count = 0;
  if (!pc.K.cyclic || n < 3) {
    double d = guard(Kd[0] - sigma * Md[0]);
    if (d < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      const double b = offd(i - 1);
      d = guard(Kd[static_cast<size_t>(i)] - sigma * Md[static_cast<size_t>(i)] - b * b / d);
      if (d < 0.0) ++count;
    }
    return count;
  }
  // Bordered elimination: nodes 0..n-2 form a chain, node n-1 couples to 0 and n-2.
  const int last = n - 1;
  double a_last = Kd[static_cast<size_t>(last)] - sigma * Md[static_cast<size_t>(last)];
  double e = pc.K.corner - sigma * pc.M.corner;
  double d = 0.0;
  for (int i = 0; i <= n - 2; ++i) {
    double a = Kd[static_cast<size_t>(i)] - sigma * Md[static_cast<size_t>(i)];
    if (i > 0) a -= offd(i - 1) * offd(i - 1) / d;
    d = guard(a);
    if (d < 0.0) ++count;
    if (i < n - 2) {
      const double b = offd(i);
      a_last -= e * e / d;
      double next_e = i + 1 == n - 2 ? offd(n - 2) : 0.0;
      next_e -= b * e / d;
      e = next_e;
    } else {
      a_last -= e * e / d;
    }
  }
  if (guard(a_last) < 0.0) ++count;
  return count;
}

double quadratic(const Tridiag& T, const Eigen::VectorXd& v) {
  const int n = T.size();
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += T.d[static_cast<size_t>(i)] * v(i) * v(i);
  for (int i = 0; i + 1 < n; ++i) s += 2.0 * T.o[static_cast<size_t>(i)] * v(i) * v(i + 1);
  if (T.cyclic) s += 2.0 * T.corner * v(0) * v(n - 1);
  return s;
}

Eigen::SparseMatrix<double> to_sparse(const Pencil& pc, double sigma) {
  const int n = pc.K.size();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(3 * n + 2));
  for (int i = 0; i < n; ++i)
    t.emplace_back(i, i, pc.K.d[static_cast<size_t>(i)] - sigma * pc.M.d[static_cast<size_t>(i)]);
  for (int i = 0; i + 1 < n; ++i) {
    const double b = pc.K.o[static_cast<size_t>(i)] - sigma * pc.M.o[static_cast<size_t>(i)];
    t.emplace_back(i, i + 1, b);
    t.emplace_back(i + 1, i, b);
  }
  if (pc.K.cyclic) {
    const double c = pc.K.corner - sigma * pc.M.corner;
    t.emplace_back(0, n - 1, c);
    t.emplace_back(n - 1, 0, c);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Eigen::VectorXd mass_times(const Tridiag& T, const Eigen::VectorXd& v) {
  const int n = T.size();
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r(i) = T.d[static_cast<size_t>(i)] * v(i);
  for (int i = 0; i + 1 < n; ++i) {
    r(i) += T.o[static_cast<size_t>(i)] * v(i + 1);
    r(i + 1) += T.o[static_cast<size_t>(i)] * v(i);
  }
  if (T.cyclic) {
    r(0) += T.corner * v(n - 1);
    r(n - 1) += T.corner * v(0);
  }
  return r;
}

struct DiscreteEigen {
  double lambda = 0.0;
  Eigen::VectorXd vec;
};

DiscreteEigen solve_pencil(const Pencil& pc) {
  const int n = pc.K.size();
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const double upper = quadratic(pc.K, ones) / quadratic(pc.M, ones);
  DiscreteEigen out;
  if (!(upper > 0.0)) {
    out.lambda = 0.0;
    out.vec = ones;
    return out;
  }
  double lo = 0.0, hi = upper * (1.0 + 1e-12);
  if (sturm_count(pc, hi) < 1) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(pc, mid) >= 1 ? hi : lo) = mid;
  }
  out.lambda = 0.5 * (lo + hi);
  // Inverse iteration just below the eigenvalue, where K - sigma M is positive definite.
  const double sigma = lo * (1.0 - 1e-9);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(to_sparse(pc, sigma));
  Eigen::VectorXd v = ones;
  if (ldlt.info() == Eigen::Success) {
    for (int it = 0; it < 4; ++it) {
      v = ldlt.solve(mass_times(pc.M, v));
      v /= v.cwiseAbs().maxCoeff();
    }
  }
  if (v.sum() < 0.0) v = -v;
  out.vec = v;
  return out;
}

void check_rhs_integrable(const SLProblem& pb) {
  const bool dir = pb.boundary() == Boundary::dirichlet;
  const bool multi = !pb.breaks().empty();
  const double extra_lo = dir && !multi ? 2.0 : 0.0;
  const double extra_hi = dir && !multi ? 2.0 : 0.0;
  if (!pb.rhs().at_lo().integrable(extra_lo) || !pb.rhs().at_hi().integrable(extra_hi))
    throw NoFiniteConstant("rhs weight '" + pb.rhs().name() +
                           "' is not integrable: the inequality admits no finite constant");
}

}  // namespace

EigenResult smallest_eigenvalue(const SLProblem& problem, double tol, const SolveOptions& opts) {
  if (!(tol > 0.0)) throw DomainError("smallest_eigenvalue: tol must be positive");
  check_rhs_integrable(problem);
  std::vector<Segment> segs = base_mesh(problem, opts);
  EigenResult res;
  double prev = 0.0, best = 0.0, err = kInf;
  DiscreteEigen last;
  Pencil last_pc;
  for (int level = 0;; ++level) {
    Pencil pc = assemble(problem, segs);
    DiscreteEigen de = solve_pencil(pc);
    res.mesh_levels.emplace_back(pc.elements, de.lambda);
    if (level == 0) {
      best = de.lambda;
    } else {
      err = std::abs(prev - de.lambda) / 3.0;
      best = de.lambda - (prev - de.lambda) / 3.0;
    }
    prev = de.lambda;
    last = std::move(de);
    last_pc = std::move(pc);
    const bool enough = level + 1 >= opts.min_levels;
    if (enough && err <= tol) break;
    if (2 * last_pc.elements > opts.max_elements) {
      if (err > tol) {
        throw ToleranceNotMet("smallest_eigenvalue: refinement did not reach tol for " + problem.name(),
                              best, err);
      }
      break;
    }
    for (auto& s : segs) s = refine(s);
  }
  // Log-class endpoints: the mesh stops at a finite depth, which Richardson
  // cannot see.  Halving log(depth) on the base mesh and doubling the change
  // bounds the remaining truncation error.
  bool deep = false;
  for (const WeightExpr* w : {&problem.leading(), &problem.potential(), &problem.rhs()})
    deep = deep || log_class(w->at_lo()) || log_class(w->at_hi());
  if (deep) {
    SolveOptions shallow = opts;
    shallow.log_class_depth = std::sqrt(opts.log_class_depth);
    const double a = solve_pencil(assemble(problem, base_mesh(problem, opts))).lambda;
    const double b = solve_pencil(assemble(problem, base_mesh(problem, shallow))).lambda;
    err += 2.0 * std::abs(a - b);
    if (err > tol)
      throw ToleranceNotMet("smallest_eigenvalue: endpoint truncation exceeds tol for " + problem.name(),
                            best, err);
  }
  res.lambda = best;
  res.error_estimate = err;
  res.nodes = last_pc.full_x;
  res.eigenfunction.resize(res.nodes.size());
  for (size_t i = 0; i < res.nodes.size(); ++i) {
    const int r = last_pc.full_to_reduced[i];
    res.eigenfunction[i] = r < 0 ? 0.0 : last.vec(r);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Rayleigh quotient

double rayleigh_quotient(const SLProblem& pb, const Trial& trial) {
  const std::vector<double> pts = pb.segment_points();
  const bool dir = pb.boundary() == Boundary::dirichlet;
  double num = 0.0, den = 0.0;
  for (size_t si = 0; si + 1 < pts.size(); ++si) {
    const double lo = pts[si], hi = pts[si + 1], half = 0.5 * (hi - lo);
    for (int side = 0; side < 2; ++side) {
      const bool lower = side == 0;
      auto where = [&](double d) { return lower ? at_lo_end(lo, hi, d) : at_hi_end(lo, hi, d); };
      const bool global_end = lower ? si == 0 : si + 2 == pts.size();
      const bool pinned = dir && global_end;
      if (pinned && std::abs(trial(where(0.0)).first) > 1e-8)
        throw DomainError("rayleigh_quotient: trial violates the Dirichlet condition");
      auto cls = [&](const WeightExpr& w) {
        EndpointClass c = lower ? w.at_lo() : w.at_hi();
        // A pinned trial vanishes linearly, which tames the weight by d^2.
        if (pinned && c.kind != EndpointClass::Kind::regular) c.alpha += 2.0;
        return c;
      };
      num += endpoint_integral(
          [&](double d) {
            const double yp = trial(where(d)).second;
            return pb.leading()(where(d)) * yp * yp;
          },
          lower ? pb.leading().at_lo() : pb.leading().at_hi(), half);
      num += endpoint_integral(
          [&](double d) {
            const double y = trial(where(d)).first;
            return pb.potential()(where(d)) * y * y;
          },
          cls(pb.potential()), half);
      den += endpoint_integral(
          [&](double d) {
            const double y = trial(where(d)).first;
            return pb.rhs()(where(d)) * y * y;
          },
          cls(pb.rhs()), half);
    }
  }
  if (!(den > 0.0)) throw DomainError("rayleigh_quotient: zero denominator");
  return num / den;
}

// ---------------------------------------------------------------------------
// Condition functional and trial-function bounds

namespace {

Where t_where(double t) { return {t, 0.0, 1.0, t, 1.0 - t}; }

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double hardy_condition_sup(const WeightExpr& q) {
  for (int j = 0; j <= 60; ++j) {
    const double t = std::ldexp(1.0, -j) * (j == 0 ? 0.999 : 1.0);
    if (q(t_where(t)) < 0.0) throw DomainError("hardy_condition_sup: weight is negative");
  }
  auto g = [&](double t) { return q(t_where(t)); };
  constexpr int kLevels = 60;
  std::vector<double> I(kLevels + 1);
  const double t_last = std::ldexp(1.0, -kLevels);
  I[kLevels] = endpoint_integral(g, q.at_lo(), t_last, 1e-13);
  if (!std::isfinite(I[kLevels])) return kInf;
  quad::QuadOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-300;
  o.throw_on_failure = false;
  for (int j = kLevels - 1; j >= 0; --j) {
    const double a = std::ldexp(1.0, -j - 1), b = std::ldexp(1.0, -j);
    double piece;
    if (j == 0 && q.at_hi().kind != EndpointClass::Kind::regular) {
      if (!q.at_hi().integrable()) return kInf;
      piece = endpoint_integral([&](double d) { return q({1.0 - d, 0.0, 1.0, 1.0 - d, d}); },
                                q.at_hi(), 0.5, 1e-13);
    } else {
      piece = quad::integrate(g, a, b, o).value;
    }
    I[static_cast<size_t>(j)] = I[static_cast<size_t>(j + 1)] + piece;
  }
  int arg = 0;
  double best = -1.0;
  for (int j = 0; j <= kLevels; ++j) {
    const double t = std::ldexp(1.0, -j);
    const double v = (1.0 - std::log(t)) * I[static_cast<size_t>(j)];
    if (v > 1e300) return kInf;
    if (v > best) best = v, arg = j;
  }
  // Refine in log t between the neighbouring grid points.
  const int j_lo = std::min(arg + 1, kLevels);
  const double anchor_t = std::ldexp(1.0, -j_lo);
  const double anchor_I = I[static_cast<size_t>(j_lo)];
  const double a = std::log(anchor_t), b = arg == 0 ? 0.0 : std::log(std::ldexp(1.0, -(arg - 1)));
  auto F = [&](double lt) {
    const double t = std::exp(lt);
    if (t <= anchor_t) return (1.0 - lt) * anchor_I;
    return (1.0 - lt) * (anchor_I + quad::integrate(g, anchor_t, t, o).value);
  };
  if (!(arg == 0 && q.at_hi().kind != EndpointClass::Kind::regular))
    best = std::max(best, golden_max(F, a, b, 1e-9));
  return best;
}

double lambda_upper_bounds(const WeightExpr& q) {
  if (!q.at_lo().integrable()) return 0.0;
  auto J = [&](double phi0) {
    if (phi0 <= 0.0) return 0.0;
    return endpoint_integral(
        [&](double d) {
          const Where w{d, 0.0, kPi, d, kPi - d};
          return q(sin_where(w));
        },
        q.at_lo(), phi0, 1e-12);
  };
  const double full = J(0.5 * kPi);
  if (!std::isfinite(full) || !(full > 0.0)) return 0.0;
  double best = 0.25 / full;
  // z = min(xi/eta, 1): (1/eta + 1/4) / int_eta^inf q(sech) sech = (1/eta + 1/4) / J(2 arccot e^eta).
  auto bound = [&](double log_eta) {
    const double eta = std::exp(log_eta);
    const double j = J(2.0 * std::atan(std::exp(-eta)));
    return j > 0.0 ? (1.0 / eta + 0.25) / j : kInf;
  };
  int arg = -21;
  double grid_best = kInf;
  for (int k = -20; k <= 20; ++k) {
    const double v = bound(k * std::log(2.0));
    if (v < grid_best) grid_best = v, arg = k;
  }
  if (std::isfinite(grid_best)) {
    const double refined =
        -golden_max([&](double le) { return -bound(le); }, (arg - 1) * std::log(2.0),
                    (arg + 1) * std::log(2.0), 1e-7);
    best = std::min({best, grid_best, refined});
  }
  return best;
}

// ---------------------------------------------------------------------------
// Registered problems

std::vector<std::string> problem_names() {
  return {"corollary2", "corollary81", "legendre", "hlp", "remark8_hlp", "remark7_n3"};
}

SLProblem named_problem(const std::string& name) {
  const auto sin1 = EndpointClass::power(1.0);
  if (name == "corollary2") return build_problem(ProblemKind::corollary2);
  if (name == "corollary81") return build_problem(ProblemKind::corollary81);
  if (name == "legendre") {
    auto sinw = [&](double c, std::string n) {
      return WeightExpr([c](const Where& w) { return c * abs_sin(w); }, sin1, sin1, std::move(n));
    };
    return SLProblem(0.0, kPi, sinw(1.0, "sin phi"), sinw(0.25, "sin phi / 4"), sinw(1.0, "sin phi"),
                     Boundary::natural, {}, "legendre");
  }
  if (name == "hlp") {
    const auto inv = EndpointClass::power(-1.0);
    WeightExpr rhs([](const Where& w) { return 1.0 / (w.from_lo * w.from_hi); }, inv, inv,
                   "1/(phi(pi-phi))");
    return SLProblem(0.0, kPi, WeightExpr::constant(1.0), WeightExpr::constant(0.0), std::move(rhs),
                     Boundary::dirichlet, {}, "hlp");
  }
  if (name == "remark8_hlp") {
    ProblemParams pp;
    pp.p = WeightExpr::of_t([](double t) { return t * t; }, 0.0, 1.0, EndpointClass::power(2.0),
                            EndpointClass::regular(), "t^2");
    pp.mu = 1.0;
    pp.rhs_angle = WeightExpr(
        [](const Where& w) {
          const double s = abs_sin(w);
          return s * s / (w.from_lo * w.from_hi);
        },
        sin1, sin1, "sin^2 phi/(psi(pi-psi))");
    SLProblem p = build_problem(ProblemKind::remark8, pp);
    return p;
  }
  if (name == "remark7_n3") {
    ProblemParams pp;
    pp.n = 3;
    pp.mu = 0.0;
    return build_problem(ProblemKind::remark7, pp);
  }
  throw DomainError("unknown problem '" + name + "'");
}

}  // namespace sharpconst::sl
