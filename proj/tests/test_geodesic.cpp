#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "lag_geoflow/geodesic.hpp"
#include "lag_geoflow/spectral.hpp"
#include "support.hpp"

using namespace lag_geoflow;
using namespace lgtest;

namespace {

constexpr double kPi = std::numbers::pi;

double max_re_dev(const SymmetricCircle& c) {
  double m = 0.0;
  for (int k = 0; k <= c.half_size(); ++k) m = std::max(m, std::abs(c.zeta()[k].real() - std::cos(c.u(k))));
  return m;
}

// Area of {cos u <= x <= 1, 0 <= y <= 0.3 (1 - x^2)} under g = 1 + |zeta|^2 / |1 - zeta^2|,
// through y = 0.3 (1 - x^2) eta: a(x) = 0.3 (1 - x^2) int_0^1 g d eta.
double band_density(double x) {
  const auto [eta, we] = gauss_legendre(40, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const cplx z(x, 0.3 * (1 - x * x) * eta[i]);
    s += we[i] * (1.0 + std::norm(z) / std::abs(1.0 - z * z));
  }
  return 0.3 * (1 - x * x) * s;
}

double band_area(double c) {
  const auto [x, w] = gauss_legendre(60, c, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * band_density(x[i]);
  return s;
}

InvariantFunction mean_zero(const SymmetricCircle& c, const std::function<double(double)>& f) {
  return project_mean_zero(c, InvariantFunction::from(c, f));
}

}  // namespace

TEST_CASE("bvp: round to parabolic, n = 2, follows vertical leaves and matches the band-area oracle") {
  const int N = 128;
  const auto g0 = round_cycle(2, N);
  const auto g1 = parabolic_cycle(2, N, 0.3);
  const auto path = bvp_solve(g0, g1, {0.0, 0.25, 0.5, 0.75, 1.0});
  REQUIRE(path.snapshots.size() == 5);
  for (const auto& s : path.snapshots) CHECK(max_re_dev(s) <= 1e-8);
  CHECK(hausdorff_zeta(path.snapshots.back(), g1) <= 1e-8);
  // h(u) = h(0) + A(cos u) and mean zero against sin u du.
  const auto [x, w] = gauss_legendre(60, -1.0, 1.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mean += w[i] * band_density(x[i]) * (1 + x[i]);
  const double h0 = -0.5 * mean;
  MESSAGE("h(0) = " << path.h.values[0] << " oracle " << h0 << " cross " << path.diagnostics.cross_check);
  CHECK(path.h.values[0] == doctest::Approx(h0).epsilon(1e-8));
  for (int k : {16, 40, 64, 100}) CHECK(path.h.values[k] == doctest::Approx(h0 + band_area(std::cos(g0.u(k)))).epsilon(1e-7));
  // s is the flow time of cos u: h' = s k'.
  const auto hp = spectral_grid(N).diff_even(std::span<const double>(path.h.values));
  for (int k = 1; k < N; ++k) CHECK(hp[k] == doctest::Approx(-path.s[k] * std::sin(g0.u(k))).epsilon(1e-9));
  CHECK(path.distance > 0.0);
}

TEST_CASE("bvp: identical cycles give the constant path") {
  for (int n : {2, 3}) {
    const auto g = round_cycle(n, 32);
    const auto path = bvp_solve(g, g, {0.0, 0.5, 1.0});
    for (double s : path.s) CHECK(std::abs(s) <= 1e-12);
    for (double h : path.h.values) CHECK(std::abs(h) <= 1e-12);
    for (const auto& snap : path.snapshots) CHECK(hausdorff_zeta(snap, g) <= 1e-12);
    CHECK(distance(g, g) <= 1e-12);
  }
}

TEST_CASE("ivp/bvp roundtrip, N = 128, dt = 1/200") {
  for (int n : {2, 3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g0 = round_cycle(n, 128);
    const auto g1 = parabolic_cycle(n, 128, 0.3);
    const auto bvp = bvp_solve(g0, g1, {0.0, 0.5, 1.0});
    const auto ivp = ivp_solve(g0, bvp.h, 1.0, 1.0 / 200);
    const double dist = hausdorff_zeta(ivp.snapshots.back(), g1);
    const auto rep = verify_geodesic(ivp);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("n=" << n << " hausdorff " << dist << " verify " << rep.residual << " speed var " << rep.speed_variation
                 << " time " << secs << " drift " << ivp.diagnostics.leaf_drift.back());
    CHECK_FALSE(ivp.diagnostics.horizon_reached);
    CHECK(dist <= 1e-3);
    CHECK(rep.residual <= 1e-3);
    CHECK(std::abs(ivp.distance - bvp.distance) <= 1e-3 * bvp.distance);
  }
}

TEST_CASE("verify_geodesic: bvp path, constant path, corrupted path") {
  const auto g0 = round_cycle(3, 64);
  const auto g1 = parabolic_cycle(3, 64, 0.3);
  std::vector<double> t;
  for (int j = 0; j <= 32; ++j) t.push_back(j / 32.0);
  const auto path = bvp_solve(g0, g1, t);
  const auto rep = verify_geodesic(path);
  MESSAGE("bvp verify " << rep.residual << " speed var " << rep.speed_variation);
  CHECK(rep.residual <= 1e-3);
  CHECK(rep.speed_variation <= 1e-3);

  std::vector<double> t2;
  for (double x : t) t2.push_back(x * x);
  auto bad = bvp_solve(g0, g1, t2);
  bad.times = t;
  const auto brep = verify_geodesic(bad);
  MESSAGE("corrupted " << brep.residual);
  CHECK(brep.residual > 1e-1);

  const auto still = ivp_solve(g0, InvariantFunction{std::vector<double>(65, 0.0), true}, 1.0, 0.25);
  CHECK(verify_geodesic(still).residual == 0.0);
  for (const auto& s : still.snapshots) CHECK(hausdorff_zeta(s, g0) == 0.0);
}

TEST_CASE("triangle identity") {
  for (int n : {2, 3}) {
    const int N = 128;
    const auto g0 = round_cycle(n, N);
    const auto g1 = parabolic_cycle(n, N, 0.2);
    const auto g2 = parabolic_cycle(n, N, 0.4);
    const double r = triangle_identity(g0, g1, g2);
    const double back = triangle_identity(g0, g1, g0);
    const double same = triangle_identity(g0, g0, g2);
    MESSAGE("n=" << n << " triangle " << r << " reversal " << back << " degenerate " << same);
    CHECK(r <= 1e-3);
    CHECK(back <= 1e-4);
    CHECK(same <= 1e-10);
  }
}

TEST_CASE("exp map is an isometry for small velocities") {
  const auto g0 = round_cycle(2, 64);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const auto random_h = [&] {
    const double a = d(rng), b = d(rng), c = d(rng);
    auto h = mean_zero(g0, [=](double u) { return a * std::cos(u) + b * std::cos(2 * u) + c * std::cos(3 * u); });
    const double s = 0.05 * (0.5 + 0.5 * std::abs(d(rng))) / upsilon_norm(g0, h);
    for (auto& v : h.values) v *= s;
    return h;
  };
  for (int i = 0; i < 5; ++i) {
    const auto h1 = random_h(), h2 = random_h();
    const double r = exp_isometry_check(g0, h1, h2, 1.0 / 50);
    MESSAGE("pair " << i << " residual " << r);
    CHECK(r <= 1e-2);
  }
  const auto h = random_h();
  CHECK(exp_isometry_check(g0, h, h, 1.0 / 50) == 0.0);
  const auto zero = InvariantFunction{std::vector<double>(65, 0.0), true};
  CHECK(exp_isometry_check(g0, h, zero, 1.0 / 50) <= 1e-6);
}

TEST_CASE("distance: symmetry, triangle inequality, mirror invariance") {
  std::mt19937_64 rng(11);
  int triples = 0;
  for (int attempt = 0; triples < 10 && attempt < 40; ++attempt) {
    std::vector<SymmetricCircle> c;
    for (int i = 0; i < 3; ++i) c.push_back(cycle_from_arc(unit_fiber(2), random_arc(rng, 0.4), 64));
    ++triples;
    const double d01 = distance(c[0], c[1]), d10 = distance(c[1], c[0]);
    const double d12 = distance(c[1], c[2]), d02 = distance(c[0], c[2]);
    CHECK(std::abs(d01 - d10) <= 1e-5 * std::max(d01, 1e-12));
    CHECK(d02 <= d01 + d12 + 1e-5);
    CHECK(distance(c[0].mirrored(), c[1]) == doctest::Approx(d01).epsilon(1e-8));
  }
  CHECK(triples == 10);
}

TEST_CASE("transport: identity, isometry, naturality") {
  const int N = 128;
  const auto g0 = round_cycle(2, N);
  const auto g1 = parabolic_cycle(2, N, 0.2);
  const auto g2 = parabolic_cycle(2, N, 0.4);
  const auto id = transport(g0, g0);
  for (int k = 0; k <= N; ++k) CHECK(id.v[k] == doctest::Approx(g0.u(k)).epsilon(1e-12));
  const auto h = InvariantFunction::from(g1, [](double u) { return std::cos(u); });
  const auto T01 = transport(g0, g1);
  const auto p = pullback(T01, h);
  const double lhs = inner(g0, p, p), rhs = inner(g1, h, h);
  CHECK(std::abs(lhs - rhs) <= 1e-4 * rhs);
  const auto T02 = transport(g0, g2), T12 = transport(g1, g2);
  const auto T = compose(T01, T12);
  for (int k = 0; k <= N; ++k) CHECK(std::abs(T.v[k] - T02.v[k]) <= 1e-6);
  for (int k = 0; k < N; ++k) CHECK(T01.v[k + 1] > T01.v[k]);
}

TEST_CASE("transport: n = 3 isometry") {
  const auto g0 = round_cycle(3, 128);
  const auto g1 = parabolic_cycle(3, 128, 0.3);
  const auto h = mean_zero(g1, [](double u) { return std::cos(u) + 0.3 * std::cos(2 * u); });
  const auto p = pullback(transport(g0, g1), h);
  const double lhs = inner(g0, p, p), rhs = inner(g1, h, h);
  CHECK(std::abs(lhs - rhs) <= 1e-4 * rhs);
}

TEST_CASE("horizontal families") {
  const int N = 64;
  // BVP snapshots are horizontal.
  for (int n : {2, 3}) {
    const auto path = bvp_solve(round_cycle(n, N), parabolic_cycle(n, N, 0.3), {0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(check_horizontal_family(path.snapshots) <= 1e-6);
  }
  const auto path = bvp_solve(round_cycle(2, N), parabolic_cycle(2, N, 0.3), {0.0, 1.0});
  CHECK(check_horizontal_family({path.snapshots[0], path.snapshots[0]}) == 0.0);
  // Linear interpolation in zeta at fixed u is not horizontal for n = 3.
  std::vector<SymmetricCircle> lin3, lin2;
  for (int j = 0; j <= 4; ++j) {
    lin3.push_back(parabolic_cycle(3, N, 0.3 * j / 4.0));
    lin2.push_back(parabolic_cycle(2, N, 0.3 * j / 4.0));
  }
  const double r3 = check_horizontal_family(lin3);
  MESSAGE("linear family residual n=3: " << r3);
  CHECK(r3 > 1e-2);
  const auto fixed = horizontal_reparametrize(lin3);
  CHECK(check_horizontal_family(fixed) <= 1e-6);
  MESSAGE("reparametrized n=3 residual " << check_horizontal_family(fixed));
  const auto fixed2 = horizontal_reparametrize(lin2);
  CHECK(check_horizontal_family(fixed2) <= 1e-6);
  for (const auto& s : fixed2) CHECK(max_re_dev(s) <= 1e-10);
  // Idempotence.
  const auto again = horizontal_reparametrize(fixed2);
  for (std::size_t j = 0; j < again.size(); ++j)
    for (int k = 0; k <= N; ++k) {
      CHECK(std::abs(again[j].zeta()[k] - fixed2[j].zeta()[k]) <= 1e-8);
      CHECK(std::abs(again[j].z()[k] - fixed2[j].z()[k]) <= 1e-8);
    }
  // A member that is not positive.
  const auto bent = cycle_from_arc(unit_fiber(2), Arc::bezier({1.0, cplx(0, 0.3), cplx(0, 0.3), cplx(0.8, 0.6), cplx(0.8, 0.6), -1.0}), 128);
  const auto r128 = round_cycle(2, 128);
  CHECK(error_kind_of([&] { horizontal_reparametrize({r128, bent}); }) == ErrorKind::NotPositive);
}

TEST_CASE("ivp: short path recovers its velocity, reverses, stays on leaves") {
  const int N = 64;
  for (int n : {2, 3}) {
    const auto g0 = round_cycle(n, N);
    const auto h0 = mean_zero(g0, [](double u) { return 0.2 * std::cos(u) + 0.05 * std::cos(2 * u); });
    const auto path = ivp_solve(g0, h0, 0.5, 1.0 / 100);
    REQUIRE_FALSE(path.diagnostics.horizon_reached);
    CHECK(path.times.back() == 0.5);
    CHECK(verify_geodesic(path).residual <= 1e-4);
    CHECK(check_horizontal_family(path.snapshots) <= 1e-6);
    for (double m : path.diagnostics.positivity_margin) CHECK(m > 1e-6);

    // Backward along the same markers: h_T o Psi_T = h_0, so -h_T has the values of -h_0.
    InvariantFunction back = h0;
    for (auto& v : back.values) v = -v;
    const auto rev = ivp_solve(path.snapshots.back(), back, 0.5, 1.0 / 100);
    CHECK(hausdorff_zeta(rev.snapshots.back(), g0) <= 1e-4);

    // Independent leaf traces from the initial markers, kept in the zeta-chart so
    // arclength is measured in zeta.
    ToleranceProfile zeta_only;
    zeta_only.chart_radius_factor = 1e-6;
    for (int k : {1, 9, 32, 50, 63}) {
      const double ell = path.ell[k];
      const auto tr = trace_leaf(g0.fiber(), ChartPoint::zeta_chart(g0.zeta()[k], g0.z()[k]), ell >= 0 ? 1 : -1,
                                 StopRule::max_arclength(std::abs(ell)), zeta_only);
      CHECK(std::abs(tr.points.back().zeta - path.snapshots.back().zeta()[k]) <= 1e-6);
    }
  }
}

TEST_CASE("ivp: endpoint markers follow the tangent direction at the roots") {
  const int N = 128;
  const auto g0 = round_cycle(3, N);
  const auto h0 = mean_zero(g0, [](double u) { return 0.3 * std::cos(u) + 0.1 * std::cos(2 * u); });
  const auto path = ivp_solve(g0, h0, 0.5, 1.0 / 100);
  const auto& grid = spectral_grid(N);
  for (std::size_t j = 0; j < path.snapshots.size(); j += 10) {
    const auto dz = grid.diff_odd(std::span<const cplx>(path.snapshots[j].z()));
    const double e0 = std::remainder(std::arg(dz[0]) - path.diagnostics.endpoint_theta0[j], kPi);
    const double eN = std::remainder(std::arg(dz[N]) - path.diagnostics.endpoint_thetapi[j], kPi);
    MESSAGE("t=" << path.times[j] << " theta0 err " << e0 << " thetapi err " << eN);
    CHECK(std::abs(e0) <= 1e-3);
    CHECK(std::abs(eN) <= 1e-3);
  }
}

TEST_CASE("ivp: fourth-order time stepping") {
  const int N = 64;
  const auto g0 = round_cycle(3, N);
  const auto h0 = project_mean_zero(g0, bvp_solve(g0, parabolic_cycle(3, N, 0.3), {0.0}).h);
  std::vector<std::vector<cplx>> ends;
  std::vector<double> drift;
  for (int m : {5, 10, 20, 40}) {
    const auto p = ivp_solve(g0, h0, 1.0, 1.0 / m);
    ends.push_back(p.snapshots.back().zeta());
    drift.push_back(*std::max_element(p.diagnostics.leaf_drift.begin(), p.diagnostics.leaf_drift.end()));
  }
  const auto diff = [&](int a, int b) {
    double m = 0.0;
    for (int k = 0; k <= N; ++k) m = std::max(m, std::abs(ends[a][k] - ends[b][k]));
    return m;
  };
  const double r1 = diff(0, 1) / diff(1, 2), r2 = diff(1, 2) / diff(2, 3);
  MESSAGE("endpoint ratios " << r1 << " " << r2 << "; drift " << drift[0] << " " << drift[1] << " " << drift[2]);
  CHECK(r2 >= 16 * 0.7);
  CHECK(r2 <= 16 * 1.3);
  CHECK(drift[0] / drift[1] >= 16 * 0.7);
}

TEST_CASE("bvp: grid refinement") {
  const auto a = bvp_solve(round_cycle(3, 64), parabolic_cycle(3, 64, 0.3), {0.5});
  const auto b = bvp_solve(round_cycle(3, 128), parabolic_cycle(3, 128, 0.3), {0.5});
  double m = 0.0;
  for (int k = 0; k <= 64; ++k) m = std::max(m, std::abs(a.snapshots[0].zeta()[k] - b.snapshots[0].zeta()[2 * k]));
  MESSAGE("N = 64 vs 128 snapshot difference " << m << ", distance " << a.distance << " vs " << b.distance);
  CHECK(m <= 1e-4);
  CHECK(a.distance == doctest::Approx(b.distance).epsilon(1e-6));
}

TEST_CASE("bvp: swept-area audit converges faster than the grid spacing") {
  std::vector<double> dev;
  for (int N : {16, 32, 64}) {
    const auto p = bvp_solve(round_cycle(3, N), parabolic_cycle(3, N, 0.3), {0.0, 1.0});
    dev.push_back(p.diagnostics.cross_check);
  }
  MESSAGE("audit deviation " << dev[0] << ", " << dev[1] << ", " << dev[2]);
  CHECK(dev[0] <= ToleranceProfile{}.cross_tol);
  CHECK(dev[0] / dev[1] >= 16.0);
  CHECK(dev[1] / dev[2] >= 16.0);
}

TEST_CASE("ivp: horizon and errors") {
  const auto g0 = round_cycle(3, 64);
  const auto big = mean_zero(g0, [](double u) { return 3.0 * std::cos(2 * u); });
  const auto far = ivp_solve(g0, big, 5.0, 1.0 / 200);
  MESSAGE("horizon: " << far.diagnostics.horizon_reached << " at t = " << far.times.back() << ": "
                      << far.diagnostics.horizon_reason);
  CHECK(far.diagnostics.horizon_reached);
  CHECK(far.times.back() < 5.0);
  for (double m : far.diagnostics.positivity_margin) CHECK(m > 1e-6);
  CHECK(error_kind_of([&] { exp_isometry_check(g0, big, big, 1.0 / 200); }) == ErrorKind::HorizonReached);
  // The same velocity with a coarse step: the speed blow-up is not resolved.
  CHECK(error_kind_of([&] { ivp_solve(g0, big, 5.0, 1.0 / 50); }) == ErrorKind::StepUnstable);


  const auto bent = cycle_from_arc(unit_fiber(2), Arc::bezier({1.0, cplx(0, 0.3), cplx(0, 0.3), cplx(0.8, 0.6), cplx(0.8, 0.6), -1.0}), 128);
  CHECK(error_kind_of([&] { ivp_solve(bent, InvariantFunction{std::vector<double>(129, 0.0), true}, 1.0, 0.1); }) ==
        ErrorKind::NotPositive);
  CHECK(error_kind_of([&] { ivp_solve(g0, big, 1.0, 0.0); }) == ErrorKind::InvalidInput);
  CHECK(error_kind_of([&] { bvp_solve(g0, g0, {0.5, 0.2}); }) == ErrorKind::InvalidInput);
  CHECK(error_kind_of([&] { bvp_solve(g0, g0.mirrored(), {1.5}); }) == ErrorKind::InvalidInput);
  const auto swapped = cycle_from_arc(unit_fiber(3), Arc::segment(-1.0, 1.0), 64);
  CHECK(error_kind_of([&] { bvp_solve(g0, swapped, {0.0, 1.0}); }) == ErrorKind::NotIsotopic);
}
