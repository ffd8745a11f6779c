#pragma once

namespace lag_geoflow {

// Every numeric threshold used by the library, with its default. The CLI
// exposes each field as an override flag and echoes the effective values.
struct ToleranceProfile {
  double root_simplicity_rel = 1e-8;   // relative to max|root|
  double root_simplicity_floor = 1e-10;
  double root_residual = 1e-10;        // |f(root)| / (1 + max|coeff|)
  double branch_delta = 1e-6;          // min distance of a tracked path from roots
  double branch_residual = 1e-12;
  double arc_endpoint = 1e-8;          // arc endpoints must be this close to a root
  double on_fiber = 1e-10;
  double positivity_floor = 1e-6;
  double special_tol = 1e-6;           // radians
  double leaf_tol = 1e-8;
  double leaf_rtol = 1e-12;            // adaptive leaf integration tolerance
  double leaf_max_step = 0.02;
  double min_step = 1e-12;
  double sing_radius = 1e-4;
  double chart_radius_factor = 0.25;
  double local_inverse_tol = 1e-12;
  double hit_tol = 1e-10;
  double sheet_match_rel = 0.2;
  double audit_extra = 0.1;            // uniqueness audit, fraction of hit arclength
  double max_leaf_length = 20.0;
  double cross_tol = 1e-4;
};

}  // namespace lag_geoflow
