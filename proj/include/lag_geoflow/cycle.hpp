#pragma once

// Symmetric circles gamma(u) = (z(u), zeta(u)) on M^1 and the matching
// cycles they sweep out in M^n. All quantities live on the half grid
// u_k = pi k / N, k = 0..N; the other half follows from
// zeta(-u) = zeta(u), z(-u) = -z(u).

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lag_geoflow/fiber.hpp"
#include "lag_geoflow/tolerance.hpp"

namespace lag_geoflow {

using FiberPtr = std::shared_ptr<const MilnorFiber>;

// A regular curve x in [0, 1] -> zeta joining two roots of f.
class Arc {
 public:
  Arc(std::function<cplx(double)> value, std::function<cplx(double)> derivative);

  static Arc bezier(std::vector<cplx> control);
  static Arc segment(cplx from, cplx to);
  // from + e x - 2 i a e x (1 - x), e = to - from: bulges to the left of the chord.
  static Arc parabolic(cplx from, cplx to, double a);
  // Derivative by centered differences.
  static Arc from_function(std::function<cplx(double)> value);

  cplx operator()(double x) const { return value_(x); }
  cplx derivative(double x) const { return derivative_(x); }
  Arc reversed() const;

 private:
  std::function<cplx(double)> value_;
  std::function<cplx(double)> derivative_;
};

class SymmetricCircle {
 public:
  // Validates every invariant; throws InvalidInput / ArcEndpointNotRoot on failure.
  SymmetricCircle(FiberPtr fiber, std::vector<cplx> zeta, std::vector<cplx> z,
                  const ToleranceProfile& tol = {});

  const MilnorFiber& fiber() const { return *fiber_; }
  const FiberPtr& fiber_ptr() const { return fiber_; }
  int half_size() const { return N_; }
  double u(int k) const;
  const std::vector<cplx>& zeta() const { return zeta_; }
  const std::vector<cplx>& z() const { return z_; }
  int root_at_0() const { return root0_; }
  int root_at_pi() const { return root_pi_; }

  // Full periodic grid access, k taken mod 2N.
  cplx zeta_at(int k) const;
  cplx z_at(int k) const;

  // Same Lagrangian, parametrized by u -> -u (z -> -z on the half grid).
  SymmetricCircle mirrored() const;

 private:
  FiberPtr fiber_;
  int N_;
  std::vector<cplx> zeta_;
  std::vector<cplx> z_;
  int root0_ = -1;
  int root_pi_ = -1;
};

// Even function on the circle, stored on the half grid.
struct InvariantFunction {
  std::vector<double> values;
  bool mean_zero = false;

  static InvariantFunction from(const SymmetricCircle& circle, const std::function<double(double)>& h);
  int half_size() const { return static_cast<int>(values.size()) - 1; }
};

struct PositivityReport {
  bool is_positive = false;
  double margin = 0.0;
  double worst_u = 0.0;
};

SymmetricCircle cycle_from_arc(FiberPtr fiber, const Arc& arc, int N, const ToleranceProfile& tol = {});

// rho_k = zeta'(u_k) z_k^{n-2} / 2, the pullback coefficient of Omega (k = 0..N; ends are 0 for n >= 3).
std::vector<cplx> omega_density(const SymmetricCircle& circle);

PositivityReport check_positive(const SymmetricCircle& circle, const ToleranceProfile& tol = {});

// Volume of the unit (n-1)-sphere; V_0 = 2.
double sphere_volume(int n_minus_one);

// mu_k = V_{n-1} |Re rho_k|. Throws NotPositive.
std::vector<double> measure_density(const SymmetricCircle& circle, const ToleranceProfile& tol = {});

// Quadrature weights w_k with int h dmu = sum_k w_k h_k mu_k (full circle).
// Spectrally accurate for both parities of n.
std::vector<double> quadrature_weights(int N, int n);

double integrate(const SymmetricCircle& circle, const InvariantFunction& h, const ToleranceProfile& tol = {});
double inner(const SymmetricCircle& circle, const InvariantFunction& h, const InvariantFunction& k,
             const ToleranceProfile& tol = {});
double upsilon_norm(const SymmetricCircle& circle, const InvariantFunction& h, const ToleranceProfile& tol = {});
InvariantFunction project_mean_zero(const SymmetricCircle& circle, const InvariantFunction& h,
                                    const ToleranceProfile& tol = {});

bool is_special(const SymmetricCircle& circle, double tol_radians = 1e-6, const ToleranceProfile& tol = {});

// Symmetric Hausdorff distance between the zeta-images (half-grid polylines).
double hausdorff_zeta(const SymmetricCircle& a, const SymmetricCircle& b);

// Cubic interpolation of zeta, z on the periodic grid at arbitrary u.
cplx interp_zeta(const SymmetricCircle& circle, double u);
cplx interp_z(const SymmetricCircle& circle, double u);
// Cubic interpolation of an even grid function.
double interp_even(std::span<const double> values, double u);

}  // namespace lag_geoflow
