#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lag_geoflow/errors.hpp"
#include "lag_geoflow/foliation.hpp"
#include "lag_geoflow/parallel.hpp"
#include "lag_geoflow/spectral.hpp"

namespace lag_geoflow {

namespace {

constexpr double kPi = std::numbers::pi;

struct Crossing {
  double ell;
  int segment;
  double param;
};

bool chord_hit(cplx a, cplx b, cplx c, cplx d, double* t_ab, double* t_cd) {
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

double distance_to_polyline(cplx p, const std::vector<cplx>& poly, int* segment, double* param) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < poly.size(); ++j) {
    const cplx e = poly[j + 1] - poly[j];
    const double t = std::clamp(((p - poly[j]) * std::conj(e)).real() / std::norm(e), 0.0, 1.0);
    const double d = std::abs(p - (poly[j] + t * e));
    if (d < best) {
      best = d;
      *segment = static_cast<int>(j);
      *param = t;
    }
  }
  return best;
}

// Crossings of the leaf polyline over [-W, W] with the target polyline; crossings
// closer than `same` in arclength count once.
std::vector<Crossing> scan(const LeafTable& leaf, double W, const std::vector<cplx>& target, double same) {
  std::vector<Crossing> out;
  const auto nodes = leaf.polyline(-W, W);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const cplx a = nodes[i].second.zeta, b = nodes[i + 1].second.zeta;
    for (std::size_t j = 0; j + 1 < target.size(); ++j) {
      double t = 0, s = 0;
      if (chord_hit(a, b, target[j], target[j + 1], &t, &s)) {
        const double ell = nodes[i].first + t * (nodes[i + 1].first - nodes[i].first);
        bool dup = false;
        for (const auto& c : out) dup = dup || std::abs(c.ell - ell) < same;
        if (!dup) out.push_back({ell, static_cast<int>(j), s});
      }
    }
  }
  return out;
}

}  // namespace

MatchResult horizontal_match(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1,
                             const ToleranceProfile& tol) {
  const auto& F = gamma0.fiber();
  if (F.coeffs() != gamma1.fiber().coeffs() || F.dimension() != gamma1.fiber().dimension())
    throw GeoflowError(ErrorKind::NotIsotopic, "cycles live in different fibers");
  if (F.dimension() < 2) throw GeoflowError(ErrorKind::InvalidInput, "leafwise matching needs n >= 2");
  if (gamma0.root_at_0() != gamma1.root_at_0() || gamma0.root_at_pi() != gamma1.root_at_pi())
    throw GeoflowError(ErrorKind::NotIsotopic, "cycles join different ordered root pairs");
  for (const auto* c : {&gamma0, &gamma1}) {
    const auto rep = check_positive(*c, tol);
    if (!rep.is_positive) {
      std::ostringstream os;
      os << "cycle is not positive (margin " << rep.margin << ")";
      throw GeoflowError(ErrorKind::NotPositive, os.str());
    }
  }

  const int N = gamma0.half_size();
  const int N1 = gamma1.half_size();
  const CircleInterpolant ci(gamma1);
  const auto& target = gamma1.zeta();
  double scale = 1.0;
  for (auto p : target) scale = std::max(scale, 1.0 + std::abs(p));

  MatchResult out;
  out.beta1.resize(N + 1);
  out.v.assign(N + 1, 0.0);
  out.s_arclength.assign(N + 1, 0.0);
  out.leaves.assign(N + 1, nullptr);
  std::vector<int> sheets(N + 1, 0);

  parallel_for(1, N, [&](int k) {
    auto leaf = std::make_shared<const LeafTable>(gamma0.fiber_ptr(), gamma0.zeta()[k], gamma0.z()[k], tol);
    int seg = -1;
    double param = 0.0;
    std::vector<Crossing> hits;
    if (distance_to_polyline(gamma0.zeta()[k], target, &seg, &param) < tol.hit_tol * scale) {
      hits.push_back({0.0, seg, param});
    } else {
      for (double W = 0.25;; W *= 2.0) {
        const double Wc = std::min(W, tol.max_leaf_length);
        hits = scan(*leaf, Wc, target, tol.leaf_max_step);
        if (!hits.empty() || Wc >= tol.max_leaf_length) break;
      }
    }
    if (hits.empty()) {
      std::ostringstream os;
      os << "leaf through u = " << gamma0.u(k) << " misses the target within arclength " << tol.max_leaf_length;
      throw GeoflowError(ErrorKind::NoIntersection, os.str());
    }
    const auto first = *std::min_element(hits.begin(), hits.end(),
                                         [](const Crossing& a, const Crossing& b) { return std::abs(a.ell) < std::abs(b.ell); });
    // Uniqueness audit past the first hit.
    const double audit = std::abs(first.ell) * (1.0 + tol.audit_extra) + 2.0 * tol.leaf_max_step;
    for (const auto& c : scan(*leaf, audit, target, tol.leaf_max_step)) {
      if (std::abs(c.ell - first.ell) > tol.leaf_max_step) {
        std::ostringstream os;
        os << "leaf through u = " << gamma0.u(k) << " meets the target twice (arclengths " << first.ell << ", "
           << c.ell << ")";
        throw GeoflowError(ErrorKind::DoubleIntersection, os.str());
      }
    }

    // Newton on leaf(ell) = zeta1(v).
    double ell = first.ell;
    double v = (first.segment + first.param) * kPi / N1;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const auto s = leaf->at(ell);
      const cplx r = s.zeta - ci.zeta(v);
      if (std::abs(r) <= tol.hit_tol * scale) {
        converged = true;
        break;
      }
      const cplx d = ci.dzeta(v);
      const double a11 = s.tangent.real(), a12 = -d.real(), a21 = s.tangent.imag(), a22 = -d.imag();
      const double det = a11 * a22 - a12 * a21;
      if (det == 0.0) break;
      const double dl = (-r.real() * a22 + r.imag() * a12) / det;
      const double dv = (-a11 * r.imag() + a21 * r.real()) / det;
      ell += dl;
      v += dv;
    }
    if (!converged) {
      std::ostringstream os;
      os << "intersection refinement failed for u = " << gamma0.u(k);
      throw GeoflowError(ErrorKind::NoIntersection, os.str());
    }
    v = std::abs(std::remainder(v, 2.0 * kPi));
    const auto s = leaf->at(ell);
    const cplx z1 = ci.z(v);
    if (std::abs(s.z - z1) <= tol.sheet_match_rel * std::abs(z1)) sheets[k] = 1;
    else if (std::abs(s.z + z1) <= tol.sheet_match_rel * std::abs(z1)) sheets[k] = -1;
    else throw GeoflowError(ErrorKind::BranchFailure, "leaf endpoint matches neither sheet of the target");
    out.beta1[k] = ChartPoint::zeta_chart(s.zeta, s.z);
    out.v[k] = v;
    out.s_arclength[k] = ell;
    out.leaves[k] = leaf;
  });

  out.sheet = sheets[1];
  for (int k = 1; k < N; ++k)
    if (sheets[k] != out.sheet)
      throw GeoflowError(ErrorKind::BranchFailure, "leafwise matches land on both sheets of the target");

  // Endpoints on the exceptional divisors: direction of the target's tangent.
  const auto dz1 = spectral_grid(N1).diff_odd(std::span<const cplx>(gamma1.z()));
  const double flip = out.sheet < 0 ? kPi : 0.0;
  out.beta1[0] = ChartPoint{ChartKind::Polar, gamma1.root_at_0(), gamma1.zeta()[0], 0.0, 0.0,
                            std::remainder(std::arg(dz1[0]) + flip, 2.0 * kPi)};
  out.beta1[N] = ChartPoint{ChartKind::Polar, gamma1.root_at_pi(), gamma1.zeta()[N1], 0.0, 0.0,
                            std::remainder(std::arg(dz1[N1]) + flip, 2.0 * kPi)};
  out.v[0] = 0.0;
  out.v[N] = kPi;
  for (int k = 0; k < N; ++k)
    if (!(out.v[k + 1] > out.v[k]))
      throw GeoflowError(ErrorKind::CrossCheckFailure, "leafwise matching parameter is not increasing");
  return out;
}

}  // namespace lag_geoflow
