#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dopri.hpp"
#include "lag_geoflow/errors.hpp"
#include "lag_geoflow/foliation.hpp"
#include "lag_geoflow/spectral.hpp"

namespace lag_geoflow {

namespace {

cplx ipow(cplx z, int p) {
  if (p < 0) return 1.0 / ipow(z, -p);
  cplx out = 1.0;
  for (int i = 0; i < p; ++i) out *= z;
  return out;
}

}  // namespace

LeafTable::LeafTable(FiberPtr fiber, cplx zeta0, cplx z0, const ToleranceProfile& tol)
    : fiber_(std::move(fiber)), tol_(tol) {
  if (std::abs(z0) <= tol_.sing_radius)
    throw GeoflowError(ErrorKind::SingularityApproach, "leaf seed lies on a branch point");
  origin_ = {zeta0, z0, tangent_at(zeta0, z0)};
  forward_.push_back({0.0, origin_});
  backward_.push_back({0.0, origin_});
}

cplx LeafTable::tangent_at(cplx zeta, cplx z) const {
  (void)zeta;
  const int n = fiber_->dimension();
  if (n == 2) return {0.0, 1.0};
  const cplx w = ipow(z, n - 2);
  return cplx(0.0, 1.0) * std::conj(w) / std::abs(w);
}

LeafTable::Sample LeafTable::integrate(const Node& from, double ell) const {
  const auto& F = *fiber_;
  Sample cur = from.s;
  double pos = from.ell;
  const double dir = ell >= pos ? 1.0 : -1.0;
  double h = tol_.leaf_max_step;
  while (dir * (ell - pos) > tol_.min_step) {
    double step = std::min({h, tol_.leaf_max_step, dir * (ell - pos)});
    const cplx zb = cur.z;
    auto field = [&](cplx y) { return dir * tangent_at(y, nearest_sqrt(F.f(y), zb)); };
    detail::DopriResult res;
    while (true) {
      if (step < tol_.min_step) throw GeoflowError(ErrorKind::StepCollapse, "leaf table step fell below min_step");
      res = detail::dopri_step(field, cur.zeta, step);
      const double ratio = res.error / (tol_.leaf_rtol * (1.0 + std::abs(cur.zeta)));
      bool ok = ratio <= 1.0;
      if (ok) {
        const cplx znew = nearest_sqrt(F.f(res.y), zb);
        ok = std::abs(znew - zb) <= 0.5 * std::abs(zb) + tol_.branch_delta;
      }
      if (ok) {
        h = detail::dopri_next_step(step, ratio);
        break;
      }
      step = std::min(0.5 * step, detail::dopri_next_step(step, ratio));
    }
    pos += dir * step;
    const cplx z = nearest_sqrt(F.f(res.y), zb);
    if (std::abs(z) <= tol_.sing_radius)
      throw GeoflowError(ErrorKind::SingularityApproach, "leaf runs into a branch point");
    cur = {res.y, z, tangent_at(res.y, z)};
  }
  return cur;
}

void LeafTable::extend_to(double ell) const {
  if (std::abs(ell) > 4.0 * tol_.max_leaf_length + 1.0)
    throw GeoflowError(ErrorKind::NoIntersection, "leaf table request beyond the maximal leaf length");
  auto& nodes = ell >= 0 ? forward_ : backward_;
  const double dir = ell >= 0 ? 1.0 : -1.0;
  while (dir * (ell - nodes.back().ell) > 0.0) {
    const Node& last = nodes.back();
    const double target = last.ell + dir * tol_.leaf_max_step;
    Sample s = integrate(last, target);
    nodes.push_back({target, s});
  }
}

LeafTable::Sample LeafTable::at(double ell) const {
  std::lock_guard lock(mutex_);
  return at_locked(ell);
}

LeafTable::Sample LeafTable::at_locked(double ell) const {
  extend_to(ell);
  const auto& nodes = ell >= 0 ? forward_ : backward_;
  // Nodes sit at multiples of leaf_max_step.
  std::size_t i = static_cast<std::size_t>(std::llround(std::abs(ell) / tol_.leaf_max_step));
  i = std::min(i, nodes.size() - 1);
  if (nodes[i].ell == ell) return nodes[i].s;
  return integrate(nodes[i], ell);
}

std::vector<std::pair<double, LeafTable::Sample>> LeafTable::polyline(double a, double b) const {
  if (a > b) std::swap(a, b);
  std::lock_guard lock(mutex_);
  std::vector<std::pair<double, Sample>> out;
  out.emplace_back(a, at_locked(a));
  const Sample end = at_locked(b);
  for (auto it = backward_.rbegin(); it != backward_.rend(); ++it)
    if (it->ell > a && it->ell < b && it->ell != 0.0) out.emplace_back(it->ell, it->s);
  for (const auto& nd : forward_)
    if (nd.ell > a && nd.ell < b) out.emplace_back(nd.ell, nd.s);
  if (b > a) out.emplace_back(b, end);
  return out;
}

// ---------------------------------------------------------------------------

CircleInterpolant::CircleInterpolant(const SymmetricCircle& circle) : N_(circle.half_size()) {
  const auto& g = spectral_grid(N_);
  std::vector<double> a(N_ + 1), b(N_ + 1), c(N_ + 1), d(N_ + 1);
  for (int k = 0; k <= N_; ++k) {
    a[k] = circle.zeta()[k].real();
    b[k] = circle.zeta()[k].imag();
    c[k] = circle.z()[k].real();
    d[k] = circle.z()[k].imag();
  }
  zr_ = g.cos_coeffs(a);
  zi_ = g.cos_coeffs(b);
  wr_ = g.sin_coeffs(c);
  wi_ = g.sin_coeffs(d);
}

cplx CircleInterpolant::zeta(double u) const {
  double re = 0.0, im = 0.0;
  const cplx step = std::polar(1.0, u);
  cplx e = 1.0;
  for (int m = 0; m <= N_; ++m) {
    re += zr_[m] * e.real();
    im += zi_[m] * e.real();
    e *= step;
  }
  return {re, im};
}

cplx CircleInterpolant::dzeta(double u) const {
  double re = 0.0, im = 0.0;
  const cplx step = std::polar(1.0, u);
  cplx e = 1.0;
  for (int m = 0; m <= N_; ++m) {
    re -= m * zr_[m] * e.imag();
    im -= m * zi_[m] * e.imag();
    e *= step;
  }
  return {re, im};
}

cplx CircleInterpolant::z(double u) const {
  double re = 0.0, im = 0.0;
  const cplx step = std::polar(1.0, u);
  cplx e = 1.0;
  for (int m = 0; m <= N_; ++m) {
    re += wr_[m] * e.imag();
    im += wi_[m] * e.imag();
    e *= step;
  }
  return {re, im};
}

}  // namespace lag_geoflow
