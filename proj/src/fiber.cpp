#include "lag_geoflow/fiber.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lag_geoflow/errors.hpp"

namespace lag_geoflow {

namespace {

cplx horner(std::span<const cplx> c, cplx x) {
  cplx acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<cplx> differentiate(std::span<const cplx> c) {
  if (c.size() <= 1) return {cplx{}};
  std::vector<cplx> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

std::vector<cplx> companion_roots(std::span<const cplx> c) {
  const int d = static_cast<int>(c.size()) - 1;
  if (d == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(C, false);
  std::vector<cplx> out(d);
  for (int i = 0; i < d; ++i) out[i] = solver.eigenvalues()[i];
  return out;
}

}  // namespace

MilnorFiber::MilnorFiber(std::vector<cplx> coeffs, int n, const ToleranceProfile& tol)
    : coeffs_(std::move(coeffs)), n_(n) {
  if (n_ < 1) throw GeoflowError(ErrorKind::InvalidInput, "dimension n must be >= 1");
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
  if (coeffs_.empty()) throw GeoflowError(ErrorKind::EmptyPolynomial, "all coefficients are zero");
  if (coeffs_.size() < 2)
    throw GeoflowError(ErrorKind::InvalidInput, "f must have degree >= 1");
  derivative_ = differentiate(coeffs_);
  second_ = differentiate(derivative_);

  roots_ = companion_roots(coeffs_);
  for (auto& r : roots_) {
    for (int it = 0; it < 10; ++it) {
      const cplx fp = fprime(r);
      if (std::abs(fp) == 0.0) break;
      const cplx step = f(r) / fp;
      r -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(r))) break;
    }
  }
  // Deterministic order: by real part, then imaginary part.
  std::sort(roots_.begin(), roots_.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  double max_abs = 0.0;
  for (auto r : roots_) max_abs = std::max(max_abs, std::abs(r));
  root_sep_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roots_.size(); ++i)
    for (std::size_t j = i + 1; j < roots_.size(); ++j)
      root_sep_ = std::min(root_sep_, std::abs(roots_[i] - roots_[j]));
  const double simplicity = std::max(tol.root_simplicity_rel * max_abs, tol.root_simplicity_floor);
  if (root_sep_ <= simplicity) {
    std::ostringstream os;
    os << "roots closer than " << simplicity << " (separation " << root_sep_ << ")";
    throw GeoflowError(ErrorKind::DegenerateRoots, os.str());
  }
  double max_coeff = 0.0;
  for (auto c : coeffs_) max_coeff = std::max(max_coeff, std::abs(c));
  for (auto r : roots_) {
    if (std::abs(f(r)) > tol.root_residual * (1.0 + max_coeff)) {
      std::ostringstream os;
      os << "root polishing did not converge at " << r;
      throw GeoflowError(ErrorKind::DegenerateRoots, os.str());
    }
  }
}

cplx MilnorFiber::f(cplx zeta) const { return horner(coeffs_, zeta); }
cplx MilnorFiber::fprime(cplx zeta) const { return horner(derivative_, zeta); }
cplx MilnorFiber::fsecond(cplx zeta) const { return horner(second_, zeta); }

int MilnorFiber::nearest_root(cplx zeta, double* distance) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(roots_.size()); ++j) {
    const double d = std::abs(zeta - roots_[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  if (distance) *distance = best_d;
  return best;
}

double MilnorFiber::local_scale(int j) const {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(roots_.size()); ++i)
    if (i != j) d = std::min(d, std::abs(roots_[i] - roots_[j]));
  if (!std::isfinite(d)) d = 1.0;
  return std::sqrt(std::abs(fprime(roots_[j])) * d);
}

MilnorFiber make_fiber(std::vector<cplx> coeffs, int n, const ToleranceProfile& tol) {
  return MilnorFiber(std::move(coeffs), n, tol);
}

cplx nearest_sqrt(cplx w, cplx near) {
  const cplx s = std::sqrt(w);
  return std::abs(s - near) <= std::abs(s + near) ? s : -s;
}

std::vector<cplx> branch_track_sqrt(const MilnorFiber& fiber, std::span<const cplx> path, cplx seed,
                                    const ToleranceProfile& tol) {
  std::vector<cplx> out;
  if (path.empty()) return out;
  out.reserve(path.size());
  const cplx f0 = fiber.f(path[0]);
  if (std::abs(seed * seed - f0) > 1e-10 * (1.0 + std::abs(f0)))
    throw GeoflowError(ErrorKind::BadSeed, "seed^2 does not match f(path[0])");
  out.push_back(seed);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const cplx fk = fiber.f(path[k]);
    const cplx prev = out.back();
    cplx next = nearest_sqrt(fk, prev);
    // One Newton step on z^2 = f polishes the residual to round-off.
    if (next != cplx{}) next -= (next * next - fk) / (2.0 * next);
    if (std::abs(prev) > tol.branch_delta &&
        std::abs(next - prev) > 0.5 * std::abs(prev) + tol.branch_delta) {
      std::ostringstream os;
      os << "sheet ambiguity at step " << k << " (zeta = " << path[k] << ")";
      throw GeoflowError(ErrorKind::StepTooLarge, os.str());
    }
    out.push_back(next);
  }
  return out;
}

}  // namespace lag_geoflow
