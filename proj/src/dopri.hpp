#pragma once

// Dormand-Prince 5(4) step for autonomous planar fields packed as complex numbers.

#include <complex>

namespace lag_geoflow::detail {

struct DopriResult {
  std::complex<double> y;
  double error;  // |y5 - y4|
};

template <class F>
DopriResult dopri_step(F&& f, std::complex<double> y, double h) {
  using C = std::complex<double>;
  const C k1 = f(y);
  const C k2 = f(y + h * (1.0 / 5.0) * k1);
  const C k3 = f(y + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2));
  const C k4 = f(y + h * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3));
  const C k5 = f(y + h * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 + (64448.0 / 6561.0) * k3 -
                          (212.0 / 729.0) * k4));
  const C k6 = f(y + h * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 + (46732.0 / 5247.0) * k3 +
                          (49.0 / 176.0) * k4 - (5103.0 / 18656.0) * k5));
  const C y5 = y + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 + (125.0 / 192.0) * k4 -
                        (2187.0 / 6784.0) * k5 + (11.0 / 84.0) * k6);
  const C k7 = f(y5);
  const C e = h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 + (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
                   (125.0 / 192.0 - 393.0 / 640.0) * k4 + (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 +
                   (11.0 / 84.0 - 187.0 / 2100.0) * k6 - (1.0 / 40.0) * k7);
  return {y5, std::abs(e)};
}

// Standard step-size update for a 5(4) pair; ratio = error / allowed.
inline double dopri_next_step(double h, double ratio) {
  if (ratio <= 0.0) return 5.0 * h;
  double factor = 0.9 * std::pow(ratio, -0.2);
  if (factor > 5.0) factor = 5.0;
  if (factor < 0.2) factor = 0.2;
  return h * factor;
}

}  // namespace lag_geoflow::detail
