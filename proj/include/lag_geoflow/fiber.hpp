#pragma once

// The A_m Milnor fiber data: a polynomial f with simple zeros and the
// ambient dimension n. M^1 = {z^2 = f(zeta)} is the surface everything
// else is computed on.

#include <complex>
#include <span>
#include <vector>

#include "lag_geoflow/tolerance.hpp"

namespace lag_geoflow {

using cplx = std::complex<double>;

class MilnorFiber {
 public:
  // coeffs in ascending degree. Throws EmptyPolynomial / DegenerateRoots.
  MilnorFiber(std::vector<cplx> coeffs, int n, const ToleranceProfile& tol = {});

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  const std::vector<cplx>& roots() const { return roots_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int dimension() const { return n_; }
  double root_separation() const { return root_sep_; }

  cplx f(cplx zeta) const;
  cplx fprime(cplx zeta) const;
  cplx fsecond(cplx zeta) const;

  // Index of the root nearest to zeta, and the distance to it.
  int nearest_root(cplx zeta, double* distance = nullptr) const;

  // Local z-scale of root j: sqrt(|f'(zeta_j)| * distance to nearest other root).
  // For a single root the distance is replaced by 1.
  double local_scale(int j) const;

 private:
  std::vector<cplx> coeffs_;
  std::vector<cplx> derivative_;
  std::vector<cplx> second_;
  std::vector<cplx> roots_;
  int n_;
  double root_sep_ = 0.0;
};

MilnorFiber make_fiber(std::vector<cplx> coeffs, int n, const ToleranceProfile& tol = {});

// Continuous branch of sqrt(f) along a polyline in the zeta-plane.
// Throws BadSeed if seed^2 != f(path[0]), StepTooLarge if a step jumps sheets.
std::vector<cplx> branch_track_sqrt(const MilnorFiber& fiber, std::span<const cplx> path, cplx seed,
                                    const ToleranceProfile& tol = {});

// The square root of w nearest to `near`.
cplx nearest_sqrt(cplx w, cplx near);

}  // namespace lag_geoflow
