#include "lag_geoflow/geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lag_geoflow/errors.hpp"
#include "lag_geoflow/parallel.hpp"
#include "lag_geoflow/spectral.hpp"

namespace lag_geoflow {

namespace {

constexpr double kPi = std::numbers::pi;

cplx ipow(cplx z, int p) {
  if (p < 0) return 1.0 / ipow(z, -p);
  cplx out = 1.0;
  for (int i = 0; i < p; ++i) out *= z;
  return out;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Value at u = 0 of an even function from its samples at u = h, 2h, 3h (quadratic in u^2).
double even_extrapolate(double f1, double f2, double f3) { return 1.5 * f1 - 0.6 * f2 + 0.1 * f3; }

// Lagrange interpolation on S consecutive nodes (S even) of the periodic grid,
// with even (sign = +1) or odd (sign = -1) reflection about u = 0 and u = pi.
// Returns value and d/du.
template <int S, class T>
std::pair<T, T> lagrange_reflect(const std::vector<T>& f, double u, double sign) {
  const int N = static_cast<int>(f.size()) - 1;
  const double h = kPi / N;
  const auto at = [&](int k) -> T {
    k %= 2 * N;
    if (k < 0) k += 2 * N;
    return k <= N ? f[k] : sign * f[2 * N - k];
  };
  const double x = u / h;
  const int i = static_cast<int>(std::floor(x));
  const double s = x - i;
  // Node m sits at offset m - S/2 + 1 from i.
  std::array<double, S> d;
  for (int m = 0; m < S; ++m) d[m] = s - (m - S / 2 + 1);
  T val{}, der{};
  for (int m = 0; m < S; ++m) {
    double denom = 1.0, w = 1.0, dw = 0.0;
    for (int l = 0; l < S; ++l) {
      if (l == m) continue;
      denom *= m - l;
      dw = dw * d[l] + w;
      w *= d[l];
    }
    const T fm = at(i - S / 2 + 1 + m);
    val += (w / denom) * fm;
    der += (dw / denom) * fm;
  }
  return {val, der / h};
}

template <class T>
std::pair<T, T> cubic_reflect(const std::vector<T>& f, double u, double sign) {
  return lagrange_reflect<4>(f, u, sign);
}

void check_times(const std::vector<double>& t) {
  if (t.empty()) throw GeoflowError(ErrorKind::InvalidInput, "no time samples");
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (!(t[j] >= 0.0 && t[j] <= 1.0)) throw GeoflowError(ErrorKind::InvalidInput, "time samples must lie in [0, 1]");
    if (j > 0 && !(t[j] > t[j - 1])) throw GeoflowError(ErrorKind::InvalidInput, "time samples must increase");
  }
}

// omega(a, b) for zeta-chart vectors at zeta.
double omega(const MilnorFiber& F, cplx zeta, cplx a, cplx b) {
  return zeta_density(F, zeta) * (std::conj(a) * b).imag();
}

struct Front {
  std::vector<cplx> zeta, z, tangent;
};

}  // namespace

// ---------------------------------------------------------------------------
// Boundary-value problem.

GeodesicPath bvp_solve(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1,
                       const std::vector<double>& t_samples, const ToleranceProfile& tol, const BvpOptions& opts) {
  check_times(t_samples);
  if (opts.tau_nodes < 4) throw GeoflowError(ErrorKind::InvalidInput, "tau_nodes must be at least 4");
  auto match = horizontal_match(gamma0, gamma1, tol);
  const auto& F = gamma0.fiber();
  const int N = gamma0.half_size();
  const int M = opts.tau_nodes;
  const Chebyshev01 cheb(M);
  const auto& tau = cheb.nodes();
  const auto& grid = spectral_grid(N);
  const cplx zeta0 = gamma0.zeta()[0], zetaN = gamma0.zeta()[N];

  // Q(u_k, tau_j) = leaf_k(tau_j ell_k), P = d_tau Q.
  std::vector<std::vector<cplx>> Q(M + 1, std::vector<cplx>(N + 1)), P(M + 1, std::vector<cplx>(N + 1));
  for (int j = 0; j <= M; ++j) {
    Q[j][0] = zeta0;
    Q[j][N] = zetaN;
  }
  parallel_for(1, N, [&](int k) {
    const double ell = match.s_arclength[k];
    for (int j = 0; j <= M; ++j) {
      const auto s = match.leaves[k]->at(tau[j] * ell);
      Q[j][k] = s.zeta;
      P[j][k] = ell * s.tangent;
    }
  });

  // w(u_k, tau_j) = omega(d_tau Q, d_u Q).
  std::vector<std::vector<double>> W(N + 1, std::vector<double>(M + 1, 0.0));
  for (int j = 0; j <= M; ++j) {
    const auto D = grid.diff_even(std::span<const cplx>(Q[j]));
    for (int k = 1; k < N; ++k) W[k][j] = omega(F, Q[j][k], P[j][k], D[k]);
  }
  std::vector<double> hp(N + 1, 0.0);
  for (int k = 1; k < N; ++k)
    for (int j = 0; j <= M; ++j) hp[k] += cheb.weights()[j] * W[k][j];

  GeodesicPath path;
  path.kind = GeodesicPath::Kind::Bvp;
  path.diagnostics.tau_nodes = M;
  InvariantFunction h;
  h.values = grid.integrate_odd(hp);
  path.h = project_mean_zero(gamma0, h, tol);

  // s = h' / k' with k = cos u; even, ends by extrapolation.
  path.s.assign(N + 1, 0.0);
  for (int k = 1; k < N; ++k) path.s[k] = hp[k] / -std::sin(grid.u(k));
  if (N >= 4) {
    path.s[0] = even_extrapolate(path.s[1], path.s[2], path.s[3]);
    path.s[N] = even_extrapolate(path.s[N - 1], path.s[N - 2], path.s[N - 3]);
  }

  // Swept area of the bands [0, u_k] x [0, 1] by Gauss-Legendre in u on local
  // sixth-order interpolants of Q and P, Clenshaw-Curtis in tau.
  if (opts.cross_check && N >= 4) {
    static const std::array<double, 3> gx = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    static const std::array<double, 3> gw = {5.0 / 18, 8.0 / 18, 5.0 / 18};
    std::vector<double> A(N + 1, 0.0);
    const double du = kPi / N;
    for (int k = 0; k < N; ++k) {
      double band = 0.0;
      for (int j = 0; j <= M; ++j) {
        if (cheb.weights()[j] == 0.0) continue;
        for (int q = 0; q < 3; ++q) {
          const double u = (k + gx[q]) * du;
          const auto [zq, dzq] = lagrange_reflect<6>(Q[j], u, 1.0);
          const cplx pq = lagrange_reflect<6>(P[j], u, 1.0).first;
          if (std::abs(F.f(zq)) == 0.0) continue;
          band += cheb.weights()[j] * gw[q] * du * omega(F, zq, pq, dzq);
        }
      }
      A[k + 1] = A[k] + band;
    }
    double dev = 0.0, span = 0.0;
    for (int k = 0; k <= N; ++k) {
      dev = std::max(dev, std::abs((path.h.values[k] - path.h.values[0]) - A[k]));
      span = std::max(span, std::abs(A[k]));
    }
    path.diagnostics.cross_check = dev;
    if (dev > tol.cross_tol * std::max(1.0, span)) {
      std::ostringstream os;
      os << "velocity potential and swept area disagree by " << dev;
      throw GeoflowError(ErrorKind::CrossCheckFailure, os.str());
    }
  }

  // Snapshots: marker k sits where the cumulative time C_k(tau) / C_k(1) equals t.
  std::vector<std::vector<double>> C(N + 1);
  const double hp_scale = sup_norm(hp);
  for (int k = 1; k < N; ++k) C[k] = cheb.primitive(cheb.coeffs(W[k]));
  const auto tau_at = [&](int k, double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double total = Chebyshev01::eval(C[k], 1.0);
    if (std::abs(total) <= 1e-14 * hp_scale || total == 0.0) return t;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (Chebyshev01::eval(C[k], mid) / total < t) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  for (double t : t_samples) {
    if (t == 0.0) {
      path.snapshots.push_back(gamma0);
    } else {
      std::vector<cplx> zeta(N + 1), z(N + 1, 0.0);
      zeta[0] = zeta0;
      zeta[N] = zetaN;
      parallel_for(1, N, [&](int k) {
        const auto s = match.leaves[k]->at(tau_at(k, t) * match.s_arclength[k]);
        zeta[k] = s.zeta;
        z[k] = s.z;
      });
      path.snapshots.emplace_back(gamma0.fiber_ptr(), std::move(zeta), std::move(z), tol);
    }
    path.times.push_back(t);
    path.diagnostics.positivity_margin.push_back(check_positive(path.snapshots.back(), tol).margin);
  }
  path.ell = match.s_arclength;
  path.distance = upsilon_norm(gamma0, path.h, tol);
  path.match = std::move(match);
  return path;
}

double distance(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1, const ToleranceProfile& tol) {
  BvpOptions opts;
  opts.cross_check = false;
  return bvp_solve(gamma0, gamma1, {0.0}, tol, opts).distance;
}

// ---------------------------------------------------------------------------
// Initial-value problem.

namespace {

struct Horizon {
  std::string reason;
};

}  // namespace

GeodesicPath ivp_solve(const SymmetricCircle& gamma0, const InvariantFunction& h0, double T, double dt,
                       const ToleranceProfile& tol) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw GeoflowError(ErrorKind::InvalidInput, "dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw GeoflowError(ErrorKind::InvalidInput, "T must be nonnegative");
  const int N = gamma0.half_size();
  if (h0.half_size() != N) throw GeoflowError(ErrorKind::InvalidInput, "h0 lives on a different grid");
  const auto rep0 = check_positive(gamma0, tol);
  if (!rep0.is_positive) {
    std::ostringstream os;
    os << "initial cycle is not positive (margin " << rep0.margin << ")";
    throw GeoflowError(ErrorKind::NotPositive, os.str());
  }
  const auto& F = gamma0.fiber();
  const auto& grid = spectral_grid(N);
  const auto hp = grid.diff_even(std::span<const double>(h0.values));

  GeodesicPath path;
  path.kind = GeodesicPath::Kind::Ivp;
  path.h = project_mean_zero(gamma0, h0, tol);

  std::vector<LeafPtr> leaves(N + 1);
  parallel_for(1, N, [&](int k) {
    leaves[k] = std::make_shared<const LeafTable>(gamma0.fiber_ptr(), gamma0.zeta()[k], gamma0.z()[k], tol);
  });

  double scale = 1.0;
  for (auto p : gamma0.zeta()) scale = std::max(scale, std::abs(p));
  const double max_jump = 0.25 * scale;

  const auto front = [&](const std::vector<double>& ell) {
    Front fr{std::vector<cplx>(N + 1), std::vector<cplx>(N + 1, 0.0), std::vector<cplx>(N + 1, 0.0)};
    fr.zeta[0] = gamma0.zeta()[0];
    fr.zeta[N] = gamma0.zeta()[N];
    parallel_for(1, N, [&](int k) {
      const auto s = leaves[k]->at(ell[k]);
      fr.zeta[k] = s.zeta;
      fr.z[k] = s.z;
      fr.tangent[k] = s.tangent;
    });
    return fr;
  };

  // Orientation of omega(T, D_u q) on the initial front; a sign change means positivity was lost.
  double orient = 0.0;
  const auto velocity = [&](const Front& fr) {
    const auto D = grid.diff_even(std::span<const cplx>(fr.zeta));
    std::vector<double> lam(N + 1, 0.0);
    for (int k = 1; k < N; ++k) {
      const double den = omega(F, fr.zeta[k], fr.tangent[k], D[k]);
      if (orient == 0.0) orient = den > 0 ? 1.0 : -1.0;
      if (!(den * orient > 0.0)) throw Horizon{"markers stopped being transverse to the leaves"};
      lam[k] = hp[k] / den;
      if (!std::isfinite(lam[k])) throw GeoflowError(ErrorKind::StepUnstable, "non-finite marker speed");
    }
    return lam;
  };

  // Endpoint markers on the exceptional divisors: theta' = -chi_r / psi(0), psi(0) = 1,
  // with h0 o P ~ h0(end) + c r^2 fitted through the two nearest interior markers.
  const auto fit = [&](const Front& fr, int k0, int k1, int k2) {
    const double r1 = std::norm(fr.z[k1]), r2 = std::norm(fr.z[k2]);
    const double d1 = h0.values[k1] - h0.values[k0], d2 = h0.values[k2] - h0.values[k0];
    return (d1 * r1 + d2 * r2) / (r1 * r1 + r2 * r2);
  };
  const auto theta_rates = [&](const Front& fr) -> std::array<double, 2> {
    if (N < 3) return {0.0, 0.0};
    return {-2.0 * fit(fr, 0, 1, 2), -2.0 * fit(fr, N, N - 1, N - 2)};
  };
  const auto dz = grid.diff_odd(std::span<const cplx>(gamma0.z()));
  std::array<double, 2> theta = {std::arg(dz[0]), std::arg(dz[N])};

  std::vector<double> ell(N + 1, 0.0);
  Front cur = front(ell);
  double t = 0.0;
  path.times.push_back(0.0);
  path.snapshots.push_back(gamma0);
  path.diagnostics.positivity_margin.push_back(rep0.margin);
  path.diagnostics.endpoint_theta0.push_back(theta[0]);
  path.diagnostics.endpoint_thetapi.push_back(theta[1]);

  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  for (long step = 0; step < steps; ++step) {
    const double t_next = step + 1 == steps ? T : std::min(T, (step + 1) * dt);
    const double h = t_next - t;
    if (h <= 0.0) break;
    try {
      const auto shifted = [&](const std::vector<double>& k, double c) {
        std::vector<double> out(ell);
        for (int i = 1; i < N; ++i) out[i] += c * k[i];
        return out;
      };
      const auto k1 = velocity(cur);
      const Front f2 = front(shifted(k1, 0.5 * h));
      const auto k2 = velocity(f2);
      const Front f3 = front(shifted(k2, 0.5 * h));
      const auto k3 = velocity(f3);
      const Front f4 = front(shifted(k3, h));
      const auto k4 = velocity(f4);
      std::vector<double> next(ell);
      double jump = 0.0;
      for (int i = 1; i < N; ++i) {
        const double inc = h * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) / 6.0;
        next[i] += inc;
        jump = std::max(jump, std::abs(inc));
      }
      if (!(jump <= max_jump)) {
        std::ostringstream os;
        os << "a marker moves " << jump << " in one step; reduce dt";
        throw GeoflowError(ErrorKind::StepUnstable, os.str());
      }
      Front nf = front(next);
      // The same RK4 combination taken in zeta, before it is put back on the leaf.
      double drift = 0.0;
      for (int i = 1; i < N; ++i) {
        const cplx free = cur.zeta[i] + h / 6.0 *
                                            (k1[i] * cur.tangent[i] + 2 * k2[i] * f2.tangent[i] +
                                             2 * k3[i] * f3.tangent[i] + k4[i] * f4.tangent[i]);
        drift = std::max(drift, std::abs(free - nf.zeta[i]));
      }
      const auto r1 = theta_rates(cur), r2 = theta_rates(f2), r3 = theta_rates(f3), r4 = theta_rates(f4);
      SymmetricCircle snap(gamma0.fiber_ptr(), nf.zeta, nf.z, tol);
      const auto rep = check_positive(snap, tol);
      if (!rep.is_positive) throw Horizon{"positivity margin fell below the floor"};
      ell = std::move(next);
      cur = std::move(nf);
      t = t_next;
      path.times.push_back(t);
      path.snapshots.push_back(std::move(snap));
      path.diagnostics.positivity_margin.push_back(rep.margin);
      path.diagnostics.leaf_drift.push_back(drift);
      for (int e = 0; e < 2; ++e) theta[e] += h * (r1[e] + 2 * r2[e] + 2 * r3[e] + r4[e]) / 6.0;
      path.diagnostics.endpoint_theta0.push_back(theta[0]);
      path.diagnostics.endpoint_thetapi.push_back(theta[1]);
    } catch (const Horizon& hz) {
      path.diagnostics.horizon_reached = true;
      path.diagnostics.horizon_reason = hz.reason;
      break;
    } catch (const GeoflowError& e) {
      if (e.kind() != ErrorKind::SingularityApproach && e.kind() != ErrorKind::InvalidInput &&
          e.kind() != ErrorKind::NoIntersection)
        throw;
      path.diagnostics.horizon_reached = true;
      path.diagnostics.horizon_reason = e.detail();
      break;
    }
  }
  path.ell = ell;
  path.distance = path.times.back() * upsilon_norm(gamma0, path.h, tol);
  return path;
}

// ---------------------------------------------------------------------------
// Transport.

TransportMap transport_from_match(const MatchResult& m, int target_half_size) {
  return {m.v, target_half_size};
}

TransportMap transport(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1, const ToleranceProfile& tol) {
  return transport_from_match(horizontal_match(gamma0, gamma1, tol), gamma1.half_size());
}

InvariantFunction pullback(const TransportMap& T, const InvariantFunction& h) {
  if (h.half_size() != T.target_half_size)
    throw GeoflowError(ErrorKind::InvalidInput, "function does not live on the transport target grid");
  InvariantFunction out;
  out.mean_zero = h.mean_zero;
  out.values.reserve(T.v.size());
  for (double v : T.v) out.values.push_back(interp_even(h.values, v));
  return out;
}

TransportMap compose(const TransportMap& T1, const TransportMap& T2) {
  if (static_cast<int>(T2.v.size()) - 1 != T1.target_half_size)
    throw GeoflowError(ErrorKind::InvalidInput, "transport maps do not compose");
  // v - u is odd and periodic.
  const int N1 = T1.target_half_size;
  std::vector<double> w(N1 + 1);
  for (int k = 0; k <= N1; ++k) w[k] = T2.v[k] - kPi * k / N1;
  TransportMap out{std::vector<double>(T1.v.size()), T2.target_half_size};
  for (std::size_t k = 0; k < T1.v.size(); ++k) out.v[k] = T1.v[k] + cubic_reflect(w, T1.v[k], -1.0).first;
  out.v.front() = 0.0;
  out.v.back() = kPi;
  return out;
}

// ---------------------------------------------------------------------------
// Verification.

GeodesicReport verify_geodesic(const GeodesicPath& path, const ToleranceProfile& tol) {
  const auto& snaps = path.snapshots;
  const std::size_t J = snaps.size();
  if (J < 3 || path.times.size() != J)
    throw GeoflowError(ErrorKind::InvalidInput, "verification needs at least three snapshots");
  const int N = snaps[0].half_size();
  const auto& F = snaps[0].fiber();
  const auto& grid = spectral_grid(N);
  const auto h0 = project_mean_zero(snaps[0], path.h, tol);
  const double ref = sup_norm(h0.values);

  GeodesicReport rep;
  for (std::size_t j = 1; j + 1 < J; ++j) {
    const double a = path.times[j] - path.times[j - 1], b = path.times[j + 1] - path.times[j];
    const double wm = -b / (a * (a + b)), w0 = (b - a) / (a * b), wp = a / (b * (a + b));
    const auto D = grid.diff_even(std::span<const cplx>(snaps[j].zeta()));
    std::vector<double> hp(N + 1, 0.0);
    for (int k = 1; k < N; ++k) {
      const cplx dt = wm * snaps[j - 1].zeta()[k] + w0 * snaps[j].zeta()[k] + wp * snaps[j + 1].zeta()[k];
      hp[k] = omega(F, snaps[j].zeta()[k], dt, D[k]);
    }
    InvariantFunction ht;
    ht.values = grid.integrate_odd(hp);
    ht = project_mean_zero(snaps[j], ht, tol);
    double dev = 0.0;
    for (int k = 0; k <= N; ++k) dev = std::max(dev, std::abs(ht.values[k] - h0.values[k]));
    const double r = ref > 0.0 ? dev / ref : dev;
    rep.residual_per_time.push_back(r);
    rep.residual = std::max(rep.residual, r);
    rep.speed.push_back(upsilon_norm(snaps[j], ht, tol));
  }
  const auto [lo, hi] = std::minmax_element(rep.speed.begin(), rep.speed.end());
  rep.speed_variation = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  return rep;
}

double triangle_identity(const SymmetricCircle& gamma0, const SymmetricCircle& gamma1, const SymmetricCircle& gamma2,
                         const ToleranceProfile& tol) {
  BvpOptions opts;
  opts.cross_check = false;
  const auto p01 = bvp_solve(gamma0, gamma1, {0.0}, tol, opts);
  const auto p02 = bvp_solve(gamma0, gamma2, {0.0}, tol, opts);
  const auto p12 = bvp_solve(gamma1, gamma2, {0.0}, tol, opts);
  const auto phi = transport_from_match(*p01.match, gamma1.half_size());
  const auto pulled = project_mean_zero(gamma0, pullback(phi, p12.h), tol);
  InvariantFunction diff;
  diff.values.resize(p02.h.values.size());
  for (std::size_t k = 0; k < diff.values.size(); ++k)
    diff.values[k] = p02.h.values[k] - p01.h.values[k] - pulled.values[k];
  diff = project_mean_zero(gamma0, diff, tol);
  const double den = std::max({upsilon_norm(gamma0, p02.h, tol), upsilon_norm(gamma0, p01.h, tol),
                               upsilon_norm(gamma0, pulled, tol), 1e-12});
  return upsilon_norm(gamma0, diff, tol) / den;
}

double exp_isometry_check(const SymmetricCircle& gamma0, const InvariantFunction& h1, const InvariantFunction& h2,
                          double dt, const ToleranceProfile& tol) {
  const auto a = ivp_solve(gamma0, h1, 1.0, dt, tol);
  const auto b = ivp_solve(gamma0, h2, 1.0, dt, tol);
  for (const auto* p : {&a, &b})
    if (p->diagnostics.horizon_reached)
      throw GeoflowError(ErrorKind::HorizonReached, "exponential map undefined: " + p->diagnostics.horizon_reason);
  InvariantFunction diff;
  diff.values.resize(h1.values.size());
  for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] = h1.values[k] - h2.values[k];
  const double ref = upsilon_norm(gamma0, project_mean_zero(gamma0, diff, tol), tol);
  const double d = distance(a.snapshots.back(), b.snapshots.back(), tol);
  return ref > 0.0 ? std::abs(d - ref) / ref : d;
}

double check_horizontal_family(const std::vector<SymmetricCircle>& snapshots) {
  if (snapshots.size() < 2) throw GeoflowError(ErrorKind::InvalidInput, "need at least two snapshots");
  const int N = snapshots[0].half_size();
  const auto& F = snapshots[0].fiber();
  const int n = F.dimension();
  // z^{n-2} dzeta = 2 z^{n-1} dz / f' is holomorphic on M^1, so its integral along the
  // lifted chord equals the integral along the leaf: purely imaginary for a horizontal pair.
  static const std::array<double, 5> gx = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                           0.9061798459386640};
  static const std::array<double, 5> gw = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                           0.2369268850561891, 0.2369268850561891};
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < snapshots.size(); ++j) {
    const auto &A = snapshots[j], &B = snapshots[j + 1];
    if (B.half_size() != N) throw GeoflowError(ErrorKind::InvalidInput, "snapshots live on different grids");
    for (int k = 1; k < N; ++k) {
      const cplx dz = B.z()[k] - A.z()[k];
      const cplx dzeta = B.zeta()[k] - A.zeta()[k];
      if (std::abs(dz) < 1e-14 || std::abs(dzeta) == 0.0) continue;
      cplx I = 0.0;
      for (std::size_t q = 0; q < gx.size(); ++q) {
        const double s = 0.5 * (1.0 + gx[q]);
        const cplx zeta = A.zeta()[k] + s * dzeta;
        const cplx z = nearest_sqrt(F.f(zeta), A.z()[k] + s * dz);
        I += 0.5 * gw[q] * ipow(z, n - 2);
      }
      I *= dzeta;
      if (std::abs(I) == 0.0) continue;
      worst = std::max(worst, std::abs(I.real()) / std::abs(I));
    }
  }
  return worst;
}

std::vector<SymmetricCircle> horizontal_reparametrize(const std::vector<SymmetricCircle>& family,
                                                      const ToleranceProfile& tol) {
  if (family.empty()) return {};
  std::vector<SymmetricCircle> out{family.front()};
  const auto& g0 = family.front();
  const int N = g0.half_size();
  for (std::size_t j = 1; j < family.size(); ++j) {
    const auto m = horizontal_match(g0, family[j], tol);
    std::vector<cplx> zeta(N + 1), z(N + 1, 0.0);
    zeta[0] = g0.zeta()[0];
    zeta[N] = g0.zeta()[N];
    for (int k = 1; k < N; ++k) {
      zeta[k] = m.beta1[k].zeta;
      z[k] = m.beta1[k].z;
    }
    out.emplace_back(g0.fiber_ptr(), std::move(zeta), std::move(z), tol);
  }
  return out;
}

}  // namespace lag_geoflow
