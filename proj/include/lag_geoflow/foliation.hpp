#pragma once

// The horizontal foliation of M^1 \ {z = 0}: leaves are the curves with
// Re(z^{n-2} dzeta) = 0. Near a root zeta_j the surface is charted by
// z = r e^{i theta} (real blowup), where the extended field
//   X = |f'| (r cos(phi) d_r + sin(phi) d_theta),  phi = pi/2 + arg f'(zeta) - n theta
// is smooth and vanishes only at the 2n singular angles on r = 0.

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "lag_geoflow/cycle.hpp"
#include "lag_geoflow/fiber.hpp"
#include "lag_geoflow/tolerance.hpp"

namespace lag_geoflow {

enum class ChartKind { Zeta, Polar };

struct ChartPoint {
  ChartKind chart = ChartKind::Zeta;
  int root = -1;  // polar chart only
  cplx zeta{};
  cplx z{};
  double r = 0.0;  // polar chart only; may be negative
  double theta = 0.0;

  static ChartPoint zeta_chart(cplx zeta, cplx z) { return {ChartKind::Zeta, -1, zeta, z, 0.0, 0.0}; }
  // Fills zeta from the local inverse near root j.
  static ChartPoint polar_chart(const MilnorFiber& fiber, int j, double r, double theta,
                                const ToleranceProfile& tol = {});
};

// Chart components: (Re dzeta, Im dzeta) in the zeta-chart, (dr, dtheta) in a polar chart.
using Tangent = std::array<double, 2>;

// Unit leaf direction in chart coordinates. With `previous`, the sign is chosen
// for a nonnegative inner product; otherwise it is i conj(z^{n-2}) / |z^{n-2}|
// (zeta-chart) or X / |X| (polar chart). Throws AtSingularity.
Tangent direction(const MilnorFiber& fiber, const ChartPoint& p, const std::optional<Tangent>& previous = {},
                  const ToleranceProfile& tol = {});

// The 2n angles in [0, 2pi) with n theta - arg f'(zeta_j) in pi/2 + pi Z, ascending.
std::vector<double> singular_angles(const MilnorFiber& fiber, int j);

// (dr, dtheta) components of the unnormalized extended field at (r, theta) near root j.
Tangent blowup_field(const MilnorFiber& fiber, int j, double r, double theta, const ToleranceProfile& tol = {});

// zeta with f(zeta) = z^2 near root j, by Newton from zeta_j + z^2 / f'(zeta_j) or `seed`.
cplx local_inverse(const MilnorFiber& fiber, int j, cplx z, std::optional<cplx> seed = {},
                   const ToleranceProfile& tol = {});

// Radius in |z| of the polar chart around root j.
double chart_radius(const MilnorFiber& fiber, int j, const ToleranceProfile& tol = {});

// omega(a, b) in chart coordinates: g(zeta) det(a, b) with g = 1 + |f'|^2 / (4|f|)
// in the zeta-chart, r psi(z) det(a, b) with psi = 1 + 4|z|^2 / |f'|^2 in a polar chart.
// Throws AtBranchPoint for a zeta-chart point with f(zeta) = 0.
double area_form(const MilnorFiber& fiber, const ChartPoint& p, const Tangent& a, const Tangent& b);
double zeta_density(const MilnorFiber& fiber, cplx zeta);

// ---------------------------------------------------------------------------
// Leaf tracing with chart switching.

struct CurveTarget {
  std::vector<cplx> zeta;  // polyline
  std::vector<cplx> z;     // optional; when present a hit also needs |z - z_target| <= sheet_match_rel |z_target|

  static CurveTarget from_circle(const SymmetricCircle& circle);
};

struct StopRule {
  enum class Kind { MaxArclength, HitCurve } kind = Kind::MaxArclength;
  double length = 1.0;
  CurveTarget target;

  static StopRule max_arclength(double L) { return {Kind::MaxArclength, L, {}}; }
  static StopRule hit_curve(CurveTarget target, double max_length) { return {Kind::HitCurve, max_length, std::move(target)}; }
};

struct HitInfo {
  int segment = -1;
  double segment_param = 0.0;
  cplx zeta{};
  cplx z{};
  double arclength = 0.0;
};

enum class Termination { Arclength, HitCurve, NearSingularity, LeftDomain };

struct LeafTrace {
  ChartPoint origin;
  std::vector<ChartPoint> points;
  std::vector<double> arclength;
  int direction_sign = 1;
  Termination termination = Termination::Arclength;
  std::optional<HitInfo> hit;
  double max_step_error = 0.0;  // largest accepted embedded error per unit length
};

// Throws SingularityApproach, NoIntersection (HitCurve rule exhausted), StepCollapse.
LeafTrace trace_leaf(const MilnorFiber& fiber, const ChartPoint& start, int sign, const StopRule& stop,
                     const ToleranceProfile& tol = {});

// Leaf residual |Re(z^{n-2} T)| / |z^{n-2} T| of a zeta-chart tangent T at (zeta, z).
double leaf_residual(const MilnorFiber& fiber, cplx z, cplx dzeta);

// ---------------------------------------------------------------------------
// A single leaf in the zeta-chart, parametrized by signed zeta-arclength from
// its seed point, with the orientation T = i conj(z^{n-2}) / |z^{n-2}|.
// Nodes are added on demand; evaluation is thread-safe.

class LeafTable {
 public:
  struct Sample {
    cplx zeta;
    cplx z;
    cplx tangent;  // unit dzeta / dl
  };

  LeafTable(FiberPtr fiber, cplx zeta0, cplx z0, const ToleranceProfile& tol = {});

  Sample at(double ell) const;
  // Nodes with ell in [a, b], including both interpolated ends.
  std::vector<std::pair<double, Sample>> polyline(double a, double b) const;
  const MilnorFiber& fiber() const { return *fiber_; }
  Sample origin() const { return origin_; }

  cplx tangent_at(cplx zeta, cplx z) const;

 private:
  struct Node {
    double ell;
    Sample s;
  };

  void extend_to(double ell) const;  // caller holds mutex_
  Sample at_locked(double ell) const;
  Sample integrate(const Node& from, double ell) const;

  FiberPtr fiber_;
  ToleranceProfile tol_;
  Sample origin_;
  mutable std::mutex mutex_;
  mutable std::vector<Node> forward_;   // ell ascending, starts at 0
  mutable std::vector<Node> backward_;  // ell descending, starts at 0
};

using LeafPtr = std::shared_ptr<const LeafTable>;

// ---------------------------------------------------------------------------

struct MatchResult {
  std::vector<ChartPoint> beta1;  // k = 0..N
  std::vector<double> v;          // gamma1-parameter in [0, pi]
  std::vector<double> s_arclength;  // signed leaf arclength from gamma0(u_k) to beta1_k
  int sheet = 1;                  // -1: beta1_k = (zeta1(v_k), -z1(v_k))
  std::vector<LeafPtr> leaves;    // null at k = 0, N
};

// Leafwise matching of gamma0's markers with points of gamma1.
// Throws NotIsotopic, NotPositive, NoIntersection, DoubleIntersection.
MatchResult horizontal_match(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1,
                             const ToleranceProfile& tol = {});

// Spectral (cosine / sine series) evaluation of a circle at arbitrary u.
class CircleInterpolant {
 public:
  explicit CircleInterpolant(const SymmetricCircle& circle);
  cplx zeta(double u) const;
  cplx dzeta(double u) const;
  cplx z(double u) const;

 private:
  int N_;
  std::vector<double> zr_, zi_;  // cosine coefficients of zeta
  std::vector<double> wr_, wi_;  // sine coefficients of z
};

}  // namespace lag_geoflow
