#pragma once

// Geodesics of positive matching cycles. Every marker gamma(u_k) moves inside
// its own leaf; the velocity potential h satisfies omega(d_t gamma, d_u gamma) = h'(u)
// for all t, with h fixed along the markers.

#include <optional>
#include <string>
#include <vector>

#include "lag_geoflow/cycle.hpp"
#include "lag_geoflow/foliation.hpp"
#include "lag_geoflow/tolerance.hpp"

namespace lag_geoflow {

struct GeodesicDiagnostics {
  std::vector<double> positivity_margin;  // per snapshot
  std::vector<double> leaf_drift;         // IVP: per step, |RK4 combination in zeta - on-leaf point|
  std::vector<double> endpoint_theta0;    // IVP: exceptional-divisor angle of the u = 0 marker
  std::vector<double> endpoint_thetapi;   // IVP: same at u = pi
  double cross_check = 0.0;               // BVP: max |(h - h(0)) - (A - A(0))|
  int tau_nodes = 0;
  bool horizon_reached = false;
  std::string horizon_reason;
};

struct GeodesicPath {
  enum class Kind { Ivp, Bvp };

  Kind kind = Kind::Ivp;
  std::vector<double> times;
  std::vector<SymmetricCircle> snapshots;
  InvariantFunction h;     // velocity potential on snapshots.front()
  std::vector<double> s;   // BVP: flow time of cos(u), s = h' / (-sin u)
  std::vector<double> ell; // per marker leaf arclength at the last snapshot
  std::optional<MatchResult> match;
  double distance = 0.0;   // Upsilon-length
  GeodesicDiagnostics diagnostics;
};

struct BvpOptions {
  int tau_nodes = 32;  // Chebyshev degree in the leaf parameter
  bool cross_check = true;
};

// Throws NotPositive, StepUnstable. Stops early (horizon_reached) if positivity is
// lost or a marker runs into a branch point.
GeodesicPath ivp_solve(const SymmetricCircle& gamma0, const InvariantFunction& h0, double T, double dt,
                       const ToleranceProfile& tol = {});

// Throws the errors of horizontal_match and CrossCheckFailure.
GeodesicPath bvp_solve(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1,
                       const std::vector<double>& t_samples, const ToleranceProfile& tol = {},
                       const BvpOptions& opts = {});

double distance(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1, const ToleranceProfile& tol = {});

struct TransportMap {
  std::vector<double> v;  // gamma1-parameter of the leafwise image of gamma0(u_k)
  int target_half_size = 0;
};

TransportMap transport(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1, const ToleranceProfile& tol = {});
TransportMap transport_from_match(const MatchResult& m, int target_half_size);
// (phi^* h)(u_k) = h(v_k), cubic interpolation on gamma1's grid.
InvariantFunction pullback(const TransportMap& T, const InvariantFunction& h);
// T2 after T1: gamma0 -> gamma1 -> gamma2.
TransportMap compose(const TransportMap& T1, const TransportMap& T2);

struct GeodesicReport {
  double residual = 0.0;            // max over interior t and u of |h_t - h_0| / ||h_0||_inf
  std::vector<double> residual_per_time;
  std::vector<double> speed;        // Upsilon-norm of h_t per interior time
  double speed_variation = 0.0;     // (max - min) / max of speed
};

GeodesicReport verify_geodesic(const GeodesicPath& path, const ToleranceProfile& tol = {});

double triangle_identity(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1, const SymmetricCircle& gamma2,
                         const ToleranceProfile& tol = {});

// |d(exp h1, exp h2) - ||h1 - h2||| / ||h1 - h2||; throws HorizonReached.
double exp_isometry_check(const SymmetricCircle& gamma0, const InvariantFunction& h1, const InvariantFunction& h2,
                          double dt, const ToleranceProfile& tol = {});

double check_horizontal_family(const std::vector<SymmetricCircle>& snapshots);

std::vector<SymmetricCircle> horizontal_reparametrize(const std::vector<SymmetricCircle>& family,
                                                      const ToleranceProfile& tol = {});

}  // namespace lag_geoflow
