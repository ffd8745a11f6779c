#include "lag_geoflow/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dopri.hpp"
#include "lag_geoflow/errors.hpp"

namespace lag_geoflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDomainBound = 1e6;

cplx ipow(cplx z, int p) {
  if (p < 0) return 1.0 / ipow(z, -p);
  cplx out = 1.0;
  for (int i = 0; i < p; ++i) out *= z;
  return out;
}

cplx as_cplx(const Tangent& t) { return {t[0], t[1]}; }
Tangent as_tangent(cplx c) { return {c.real(), c.imag()}; }

double angular_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

double distance_to_singular(const std::vector<double>& angles, double r, double theta) {
  double best = std::numeric_limits<double>::infinity();
  for (double s : angles) best = std::min(best, angular_distance(theta, s));
  return std::hypot(r, best);
}

// Leaf direction in the zeta-chart before sign selection.
cplx zeta_field(int n, cplx z) {
  if (n == 2) return {0.0, 1.0};
  const cplx w = ipow(z, n - 2);
  return cplx(0.0, 1.0) * std::conj(w) / std::abs(w);
}

// dzeta image of a polar-chart tangent (dr, dtheta) at p.
cplx polar_to_dzeta(const MilnorFiber& F, const ChartPoint& p, const Tangent& t) {
  const cplx e = std::polar(1.0, p.theta);
  const cplx dz = e * cplx(t[0], p.r * t[1]);
  return 2.0 * p.z / F.fprime(p.zeta) * dz;
}

cplx chart_dzeta(const MilnorFiber& F, const ChartPoint& p, const Tangent& t) {
  return p.chart == ChartKind::Zeta ? as_cplx(t) : polar_to_dzeta(F, p, t);
}

bool segment_hit(cplx a, cplx b, cplx c, cplx d, double* t_ab, double* t_cd) {
  const cplx e = b - a, g = d - c, w = c - a;
  const double den = e.real() * g.imag() - e.imag() * g.real();
  if (den == 0.0) return false;
  const double t = (w.real() * g.imag() - w.imag() * g.real()) / den;
  const double s = (w.real() * e.imag() - w.imag() * e.real()) / den;
  constexpr double slack = 1e-12;
  if (t < -slack || t > 1 + slack || s < -slack || s > 1 + slack) return false;
  *t_ab = std::clamp(t, 0.0, 1.0);
  *t_cd = std::clamp(s, 0.0, 1.0);
  return true;
}

double side_of(cplx a, cplx b, cplx p) {
  const cplx e = b - a, w = p - a;
  return e.real() * w.imag() - e.imag() * w.real();
}

}  // namespace

// ---------------------------------------------------------------------------

ChartPoint ChartPoint::polar_chart(const MilnorFiber& fiber, int j, double r, double theta,
                                   const ToleranceProfile& tol) {
  ChartPoint p;
  p.chart = ChartKind::Polar;
  p.root = j;
  p.r = r;
  p.theta = theta;
  p.z = std::polar(1.0, theta) * r;
  p.zeta = local_inverse(fiber, j, p.z, std::nullopt, tol);
  return p;
}

cplx local_inverse(const MilnorFiber& fiber, int j, cplx z, std::optional<cplx> seed, const ToleranceProfile& tol) {
  const cplx root = fiber.roots().at(j);
  const cplx w = z * z;
  if (w == cplx{}) return root;
  cplx zeta = seed ? *seed : root + w / fiber.fprime(root);
  for (int it = 0; it < 50; ++it) {
    const cplx step = (fiber.f(zeta) - w) / fiber.fprime(zeta);
    zeta -= step;
    if (std::abs(step) <= tol.local_inverse_tol * (1.0 + std::abs(zeta))) return zeta;
  }
  throw GeoflowError(ErrorKind::BranchFailure, "local inverse did not converge; point outside the polar chart");
}

double chart_radius(const MilnorFiber& fiber, int j, const ToleranceProfile& tol) {
  return tol.chart_radius_factor * fiber.local_scale(j);
}

std::vector<double> singular_angles(const MilnorFiber& fiber, int j) {
  const int n = fiber.dimension();
  const double alpha = std::arg(fiber.fprime(fiber.roots().at(j)));
  std::vector<double> out;
  for (int m = 0; m < 2 * n; ++m) {
    double theta = std::fmod((alpha + kPi / 2 + kPi * m) / n, 2.0 * kPi);
    if (theta < 0) theta += 2.0 * kPi;
    out.push_back(theta);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Tangent blowup_field(const MilnorFiber& fiber, int j, double r, double theta, const ToleranceProfile& tol) {
  const cplx z = std::polar(1.0, theta) * r;
  const cplx zeta = local_inverse(fiber, j, z, std::nullopt, tol);
  const cplx fp = fiber.fprime(zeta);
  const double phi = kPi / 2 + std::arg(fp) - fiber.dimension() * theta;
  const double a = std::abs(fp);
  return {a * r * std::cos(phi), a * std::sin(phi)};
}

Tangent direction(const MilnorFiber& fiber, const ChartPoint& p, const std::optional<Tangent>& previous,
                  const ToleranceProfile& tol) {
  Tangent d;
  if (p.chart == ChartKind::Zeta) {
    if (std::abs(p.z) <= tol.sing_radius && fiber.dimension() != 2)
      throw GeoflowError(ErrorKind::AtSingularity, "leaf direction undefined at z = 0 in the zeta-chart");
    d = as_tangent(zeta_field(fiber.dimension(), p.z));
  } else {
    if (distance_to_singular(singular_angles(fiber, p.root), p.r, p.theta) <= tol.sing_radius)
      throw GeoflowError(ErrorKind::AtSingularity, "point lies on the singular set of the blowup field");
    const Tangent x = blowup_field(fiber, p.root, p.r, p.theta, tol);
    const double norm = std::hypot(x[0], x[1]);
    d = {x[0] / norm, x[1] / norm};
  }
  if (previous && d[0] * (*previous)[0] + d[1] * (*previous)[1] < 0.0) d = {-d[0], -d[1]};
  return d;
}

double zeta_density(const MilnorFiber& fiber, cplx zeta) {
  const double fa = std::abs(fiber.f(zeta));
  if (fa == 0.0) throw GeoflowError(ErrorKind::AtBranchPoint, "area density in the zeta-chart is singular at a root");
  return 1.0 + std::norm(fiber.fprime(zeta)) / (4.0 * fa);
}

double area_form(const MilnorFiber& fiber, const ChartPoint& p, const Tangent& a, const Tangent& b) {
  const double det = a[0] * b[1] - a[1] * b[0];
  if (p.chart == ChartKind::Zeta) return zeta_density(fiber, p.zeta) * det;
  const double psi = 1.0 + 4.0 * std::norm(p.z) / std::norm(fiber.fprime(p.zeta));
  return p.r * psi * det;
}

double leaf_residual(const MilnorFiber& fiber, cplx z, cplx dzeta) {
  const cplx w = ipow(z, fiber.dimension() - 2) * dzeta;
  const double m = std::abs(w);
  return m == 0.0 ? 0.0 : std::abs(w.real()) / m;
}

CurveTarget CurveTarget::from_circle(const SymmetricCircle& circle) {
  // The circle covers both sheets over its zeta-arc, so no sheet test.
  return {circle.zeta(), {}};
}

// ---------------------------------------------------------------------------
// trace_leaf

namespace {

struct Tracer {
  const MilnorFiber& F;
  const ToleranceProfile& tol;
  const StopRule& stop;
  int n;

  // Moving state.
  ChartPoint p;
  double sigma = 1.0;  // sign applied to the canonical chart field
  std::vector<double> sing_angles;  // of p.root while in a polar chart

  cplx field(const ChartPoint& base, cplx y) const {
    if (base.chart == ChartKind::Zeta) {
      const cplx z = nearest_sqrt(F.f(y), base.z);
      return sigma * zeta_field(n, z);
    }
    const Tangent x = blowup_field(F, base.root, y.real(), y.imag(), tol);
    const double norm = std::hypot(x[0], x[1]);
    if (norm == 0.0) throw GeoflowError(ErrorKind::SingularityApproach, "trace reached a zero of the blowup field");
    return sigma * cplx(x[0], x[1]) / norm;
  }

  cplx state(const ChartPoint& q) const { return q.chart == ChartKind::Zeta ? q.zeta : cplx(q.r, q.theta); }

  ChartPoint make_point(const ChartPoint& base, cplx y) const {
    if (base.chart == ChartKind::Zeta) return ChartPoint::zeta_chart(y, nearest_sqrt(F.f(y), base.z));
    ChartPoint q;
    q.chart = ChartKind::Polar;
    q.root = base.root;
    q.r = y.real();
    q.theta = y.imag();
    q.z = std::polar(1.0, q.theta) * q.r;
    q.zeta = local_inverse(F, q.root, q.z, base.zeta, tol);
    return q;
  }

  Tangent current_direction() const {
    const cplx d = field(p, state(p));
    return {d.real(), d.imag()};
  }

  // Switch charts when crossing the hysteresis band; keeps the direction continuous.
  void maybe_switch() {
    if (p.chart == ChartKind::Zeta) {
      double dist = 0;
      const int j = F.nearest_root(p.zeta, &dist);
      const double R = chart_radius(F, j, tol);
      if (std::abs(p.z) >= 0.9 * R) return;
      const cplx old = chart_dzeta(F, p, current_direction());
      ChartPoint q;
      q.chart = ChartKind::Polar;
      q.root = j;
      q.r = std::abs(p.z);
      q.theta = std::arg(p.z);
      q.z = p.z;
      q.zeta = p.zeta;
      p = q;
      sing_angles = singular_angles(F, j);
      sigma = 1.0;
      const cplx now = chart_dzeta(F, p, current_direction());
      if ((std::conj(now) * old).real() < 0.0) sigma = -1.0;
    } else {
      const double R = chart_radius(F, p.root, tol);
      if (std::abs(p.r) <= R) return;
      const cplx old = chart_dzeta(F, p, current_direction());
      p = ChartPoint::zeta_chart(p.zeta, p.z);
      sigma = 1.0;
      const cplx now = current_direction()[0] + cplx(0.0, 1.0) * current_direction()[1];
      if ((std::conj(now) * old).real() < 0.0) sigma = -1.0;
    }
  }

  void check_singular() const {
    if (p.chart == ChartKind::Polar) {
      if (distance_to_singular(sing_angles, p.r, p.theta) <= tol.sing_radius)
        throw GeoflowError(ErrorKind::SingularityApproach, "leaf came within sing_radius of the singular set");
    } else if (std::abs(p.z) <= tol.sing_radius && n != 2) {
      throw GeoflowError(ErrorKind::SingularityApproach, "leaf reached z = 0 in the zeta-chart");
    }
  }
};

}  // namespace

LeafTrace trace_leaf(const MilnorFiber& fiber, const ChartPoint& start, int sign, const StopRule& stop,
                     const ToleranceProfile& tol) {
  if (sign != 1 && sign != -1) throw GeoflowError(ErrorKind::InvalidInput, "trace sign must be +1 or -1");
  Tracer tr{fiber, tol, stop, fiber.dimension(), start, 1.0, {}};
  if (start.chart == ChartKind::Polar) tr.sing_angles = singular_angles(fiber, start.root);
  tr.check_singular();
  try {
    (void)direction(fiber, start, std::nullopt, tol);
  } catch (const GeoflowError& e) {
    throw GeoflowError(ErrorKind::SingularityApproach, e.detail());
  }
  tr.sigma = sign;

  LeafTrace out;
  out.origin = start;
  out.direction_sign = sign;
  out.points.push_back(start);
  out.arclength.push_back(0.0);
  tr.maybe_switch();

  const bool hit_rule = stop.kind == StopRule::Kind::HitCurve;
  const auto& target = stop.target.zeta;
  double ell = 0.0;
  double h = tol.leaf_max_step;

  auto try_hit = [&](const ChartPoint& a, const ChartPoint& b, double h_used,
                     double ell0) -> std::optional<std::pair<HitInfo, ChartPoint>> {
    double best_t = 2.0;
    int best_seg = -1;
    for (std::size_t s = 0; s + 1 < target.size(); ++s) {
      double t = 0, u = 0;
      if (segment_hit(a.zeta, b.zeta, target[s], target[s + 1], &t, &u) && t < best_t && (t > 0.0 || ell0 > 0.0)) {
        best_t = t;
        best_seg = static_cast<int>(s);
      }
    }
    if (best_seg < 0) return std::nullopt;
    const cplx ta = target[best_seg], tb = target[best_seg + 1];
    // Bisection in the step length on the side-of-segment function.
    const cplx y0 = tr.state(a);
    auto advance = [&](double hh) { return tr.make_point(a, detail::dopri_step([&](cplx y) { return tr.field(a, y); }, y0, hh).y); };
    double lo = 0.0, hi = h_used;
    const double s_lo = side_of(ta, tb, a.zeta);
    ChartPoint mid = b;
    if (s_lo != 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-10 * h_used; ++it) {
        const double m = 0.5 * (lo + hi);
        mid = advance(m);
        if ((side_of(ta, tb, mid.zeta) > 0) == (s_lo > 0)) lo = m;
        else hi = m;
      }
      mid = advance(0.5 * (lo + hi));
    } else {
      mid = a;
      hi = lo = 0.0;
    }
    const cplx e = tb - ta;
    const double param = std::clamp(((mid.zeta - ta) * std::conj(e)).real() / std::norm(e), 0.0, 1.0);
    HitInfo info{best_seg, param, mid.zeta, mid.z, ell0 + 0.5 * (lo + hi)};
    if (!stop.target.z.empty()) {
      const cplx zt = (1.0 - param) * stop.target.z[best_seg] + param * stop.target.z[best_seg + 1];
      if (std::abs(info.z - zt) > tol.sheet_match_rel * std::abs(zt)) return std::nullopt;
    }
    return std::make_pair(info, mid);
  };

  while (stop.length - ell > tol.min_step) {
    const double remaining = stop.length - ell;
    double step = std::min({h, tol.leaf_max_step, remaining});
    const ChartPoint base = tr.p;
    const cplx y0 = tr.state(base);
    detail::DopriResult res;
    while (true) {
      if (step < tol.min_step) throw GeoflowError(ErrorKind::StepCollapse, "adaptive leaf step fell below min_step");
      res = detail::dopri_step([&](cplx y) { return tr.field(base, y); }, y0, step);
      const double allowed = tol.leaf_rtol * (1.0 + std::abs(y0));
      const double ratio = res.error / allowed;
      bool ok = ratio <= 1.0;
      if (ok && base.chart == ChartKind::Zeta) {
        const cplx znew = nearest_sqrt(fiber.f(res.y), base.z);
        ok = std::abs(znew - base.z) <= 0.5 * std::abs(base.z) + tol.branch_delta;
      }
      if (ok) {
        out.max_step_error = std::max(out.max_step_error, res.error / step);
        h = detail::dopri_next_step(step, ratio);
        break;
      }
      step = std::min(0.5 * step, detail::dopri_next_step(step, ratio));
    }
    ChartPoint next = tr.make_point(base, res.y);
    if (hit_rule) {
      if (auto hit = try_hit(base, next, step, ell)) {
        out.points.push_back(hit->second);
        out.arclength.push_back(hit->first.arclength);
        out.termination = Termination::HitCurve;
        out.hit = hit->first;
        return out;
      }
    }
    ell += step;
    tr.p = next;
    tr.check_singular();
    out.points.push_back(next);
    out.arclength.push_back(ell);
    if (std::abs(next.zeta) > kDomainBound) {
      out.termination = Termination::LeftDomain;
      return out;
    }
    tr.maybe_switch();
  }
  if (hit_rule) {
    std::ostringstream os;
    os << "no intersection within arclength " << stop.length;
    throw GeoflowError(ErrorKind::NoIntersection, os.str());
  }
  out.termination = Termination::Arclength;
  return out;
}

}  // namespace lag_geoflow
