#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "lag_geoflow/cycle.hpp"
#include "lag_geoflow/errors.hpp"

namespace lgtest {

using lag_geoflow::cplx;

inline std::shared_ptr<const lag_geoflow::MilnorFiber> unit_fiber(int n) {
  return std::make_shared<const lag_geoflow::MilnorFiber>(std::vector<cplx>{1.0, 0.0, -1.0}, n);
}

// zeta = cos u, z = sin u
inline lag_geoflow::SymmetricCircle round_cycle(int n, int N) {
  return lag_geoflow::cycle_from_arc(unit_fiber(n), lag_geoflow::Arc::segment(1.0, -1.0), N);
}

// zeta = cos u + i a sin^2 u
inline lag_geoflow::SymmetricCircle parabolic_cycle(int n, int N, double a) {
  return lag_geoflow::cycle_from_arc(unit_fiber(n), lag_geoflow::Arc::parabolic(1.0, -1.0, a), N);
}

// Cubic Bezier from +1 to -1 with wiggling control points; positive for n = 2.
inline lag_geoflow::Arc random_arc(std::mt19937_64& rng, double amplitude = 0.3) {
  std::uniform_real_distribution<double> d(-amplitude, amplitude);
  return lag_geoflow::Arc::bezier({cplx(1.0, 0.0), cplx(1.0 / 3.0, d(rng)), cplx(-1.0 / 3.0, d(rng)), cplx(-1.0, 0.0)});
}

template <class F>
lag_geoflow::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const lag_geoflow::GeoflowError& e) {
    return e.kind();
  }
  FAIL("expected a GeoflowError");
  return lag_geoflow::ErrorKind::InvalidInput;
}

}  // namespace lgtest

namespace lgtest {

// Gauss-Legendre nodes and weights on [a, b].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
  std::vector<double> x(n), w(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = 0.5 * (a + b) + 0.5 * (b - a) * t;
    w[i] = (b - a) / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

}  // namespace lgtest
