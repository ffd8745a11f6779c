// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "lag_geoflow/errors.hpp"
#include "lag_geoflow/foliation.hpp"
#include "lag_geoflow/geodesic.hpp"

using namespace lag_geoflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Pinned thresholds.
constexpr double kVerticalLeaf = 1e-8;
constexpr double kSingularNorm = 1e-10;
constexpr double kMeasureRel = 1e-8;
constexpr double kRoundtrip = 1e-3;
constexpr double kGeodesicIdentity = 1e-3;
constexpr double kTriangle = 1e-3;
constexpr double kExpIsometry = 1e-2;
constexpr double kSymmetryRel = 1e-5;
constexpr double kTriangleSlack = 1e-5;
constexpr double kRk4Ratio = 16.0, kRk4Band = 0.3;
constexpr double kSecondOrderRatio = 4.0 * (1.0 - kRk4Band);
constexpr double kCorrupted = 1e-1;

FiberPtr unit_fiber(int n) { return std::make_shared<const MilnorFiber>(std::vector<cplx>{1.0, 0.0, -1.0}, n); }
SymmetricCircle round_cycle(int n, int N) { return cycle_from_arc(unit_fiber(n), Arc::segment(1.0, -1.0), N); }
SymmetricCircle parabolic(int n, int N, double a) {
  return cycle_from_arc(unit_fiber(n), Arc::parabolic(1.0, -1.0, a), N);
}
Arc random_arc(std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> d(-amp, amp);
  return Arc::bezier({1.0, cplx(1.0 / 3.0, d(rng)), cplx(-1.0 / 3.0, d(rng)), -1.0});
}
InvariantFunction mean_zero(const SymmetricCircle& c, const std::function<double(double)>& f) {
  return project_mean_zero(c, InvariantFunction::from(c, f));
}

int failures = 0;

void report(int id, bool pass, const std::string& what, double seconds) {
  std::printf("%s criterion %d: %s [%.2f s]\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class Fn>
void criterion(int id, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string what;
  try {
    pass = fn(what);
  } catch (const std::exception& e) {
    what += std::string(" threw ") + e.what();
    pass = false;
  }
  report(id, pass, what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  // 1. Vertical leaves for n = 2.
  criterion(1, [](std::string& w) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> pick(1, 63);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const auto c = cycle_from_arc(unit_fiber(2), random_arc(rng, 0.4), 64);
      const int k = pick(rng);
      const auto tr = trace_leaf(c.fiber(), ChartPoint::zeta_chart(c.zeta()[k], c.z()[k]), i % 2 ? 1 : -1,
                                 StopRule::max_arclength(2.0));
      for (const auto& p : tr.points) worst = std::max(worst, std::abs(p.zeta.real() - c.zeta()[k].real()));
    }
    const double secs = elapsed(t0);
    w = fmt("50 vertical leaf traces, max |Re zeta - Re zeta0| = %.3e (<= %.0e), runtime %.3f s (< 1 s)", worst,
            kVerticalLeaf, secs);
    return worst <= kVerticalLeaf && secs < 1.0;
  });

  // 2. Singular angles.
  criterion(2, [](std::string& w) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst = 0.0;
    for (int n : {2, 3, 5}) {
      const auto F = unit_fiber(n);
      for (int j = 0; j < 2; ++j) {
        const auto a = singular_angles(*F, j);
        ok = ok && static_cast<int>(a.size()) == 2 * n;
        for (double th : a) {
          const auto v = blowup_field(*F, j, 0.0, th);
          worst = std::max(worst, std::hypot(v[0], v[1]));
        }
        double prev = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double next = i + 1 < a.size() ? a[i + 1] : a[0] + 2 * kPi;
          const double s = blowup_field(*F, j, 0.0, 0.5 * (a[i] + next))[1];
          ok = ok && (i == 0 || s * prev < 0.0);
          prev = s;
        }
      }
    }
    const double secs = elapsed(t0);
    w = fmt("2n angles for n = 2, 3, 5 with alternating d_theta sign; max field norm %.3e (<= %.0e), runtime %.3f s",
            worst, kSingularNorm, secs);
    return ok && worst <= kSingularNorm && secs < 1.0;
  });

  // 3. Measure totals.
  criterion(3, [](std::string& w) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto one = [](const SymmetricCircle& c) { return InvariantFunction{std::vector<double>(c.half_size() + 1, 1.0), false}; };
    const auto c2 = round_cycle(2, 256), c3 = round_cycle(3, 256);
    const double e2 = std::abs(integrate(c2, one(c2)) / (4 * kPi) - 1.0);
    const double e3 = std::abs(integrate(c3, one(c3)) / (2 * kPi * kPi) - 1.0);
    const double secs = elapsed(t0);
    w = fmt("round totals at N = 256: rel err %.3e (4 pi, n = 2), %.3e (2 pi^2, n = 3) (<= %.0e), runtime %.3f s", e2,
            e3, kMeasureRel, secs);
    return e2 <= kMeasureRel && e3 <= kMeasureRel && secs < 1.0;
  });

  // 4 and 5. BVP -> IVP roundtrip, then the geodesic identity on those paths.
  std::vector<GeodesicPath> ivp_paths;
  criterion(4, [&](std::string& w) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n : {2, 3}) {
      const auto g0 = round_cycle(n, 128), g1 = parabolic(n, 128, 0.3);
      const auto h = bvp_solve(g0, g1, {0.0, 1.0}).h;
      ivp_paths.push_back(ivp_solve(g0, h, 1.0, 1.0 / 200));
      if (ivp_paths.back().diagnostics.horizon_reached) return false;
      worst = std::max(worst, hausdorff_zeta(ivp_paths.back().snapshots.back(), g1));
    }
    const double secs = elapsed(t0);
    w = fmt("round -> parabolic(0.3), n = 2, 3, N = 128, dt = 1/200: Hausdorff %.3e (<= %.0e), runtime %.2f s (< 30 s)",
            worst, kRoundtrip, secs);
    return worst <= kRoundtrip && secs < 30.0;
  });
  criterion(5, [&](std::string& w) {
    if (ivp_paths.size() != 2) {
      w = "criterion-4 paths unavailable";
      return false;
    }
    double worst = 0.0;
    for (const auto& p : ivp_paths) worst = std::max(worst, verify_geodesic(p).residual);
    w = fmt("verify_geodesic residual on the criterion-4 paths %.3e (<= %.0e)", worst, kGeodesicIdentity);
    return worst <= kGeodesicIdentity;
  });

  // 6. Triangle identity.
  criterion(6, [](std::string& w) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n : {2, 3})
      worst = std::max(worst, triangle_identity(round_cycle(n, 128), parabolic(n, 128, 0.2), parabolic(n, 128, 0.4)));
    const double secs = elapsed(t0);
    w = fmt("round / parabolic(0.2) / parabolic(0.4), n = 2, 3, N = 128: residual %.3e (<= %.0e), runtime %.2f s (< 60 s)",
            worst, kTriangle, secs);
    return worst <= kTriangle && secs < 60.0;
  });

  // 7. Exp isometry.
  criterion(7, [](std::string& w) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double worst = 0.0;
    for (int n : {2, 3}) {
      const auto g0 = round_cycle(n, 64);
      const auto random_h = [&] {
        const double a = d(rng), b = d(rng), c = d(rng);
        auto h = mean_zero(g0, [=](double u) { return a * std::cos(u) + b * std::cos(2 * u) + c * std::cos(3 * u); });
        const double s = 0.05 * (0.5 + 0.5 * std::abs(d(rng))) / upsilon_norm(g0, h);
        for (auto& v : h.values) v *= s;
        return h;
      };
      for (int i = 0; i < 5; ++i) {
        const auto h1 = random_h(), h2 = random_h();
        worst = std::max(worst, exp_isometry_check(g0, h1, h2, 1.0 / 50));
      }
    }
    w = fmt("5 random pairs of velocities with norm <= 0.05 on the round cycle, n = 2 and 3: residual %.3e (<= %.0e)",
            worst, kExpIsometry);
    return worst <= kExpIsometry;
  });

  // 8. Metric axioms.
  criterion(8, [](std::string& w) {
    std::mt19937_64 rng(11);
    double sym = 0.0, tri = -1e300;
    for (int i = 0; i < 10; ++i) {
      std::vector<SymmetricCircle> c;
      for (int j = 0; j < 3; ++j) c.push_back(cycle_from_arc(unit_fiber(2), random_arc(rng, 0.4), 64));
      const double d01 = distance(c[0], c[1]), d10 = distance(c[1], c[0]);
      const double d12 = distance(c[1], c[2]), d02 = distance(c[0], c[2]);
      sym = std::max(sym, std::abs(d01 - d10) / std::max(d01, 1e-12));
      tri = std::max(tri, d02 - d01 - d12);
    }
    w = fmt("10 random positive triples: symmetry rel err %.3e (<= %.0e), max d02 - d01 - d12 = %.3e (<= %.0e)", sym,
            kSymmetryRel, tri, kTriangleSlack);
    return sym <= kSymmetryRel && tri <= kTriangleSlack;
  });

  // 9. Convergence orders.
  criterion(9, [](std::string& w) {
    const int N = 64;
    const auto g0 = round_cycle(3, N);
    const auto h0 = bvp_solve(g0, parabolic(3, N, 0.3), {0.0}).h;
    std::vector<std::vector<cplx>> ends;
    for (int m : {10, 20, 40}) ends.push_back(ivp_solve(g0, h0, 1.0, 1.0 / m).snapshots.back().zeta());
    const auto diff = [&](int a, int b) {
      double e = 0.0;
      for (int k = 0; k <= N; ++k) e = std::max(e, std::abs(ends[a][k] - ends[b][k]));
      return e;
    };
    const double rk = diff(0, 1) / diff(1, 2);
    // Matching + quadrature: transported inner product of cos u against the direct one.
    std::vector<double> err;
    for (int M : {16, 32, 64}) {
      const auto a = round_cycle(3, M), b = parabolic(3, M, 0.3);
      const auto h = InvariantFunction::from(b, [](double u) { return std::cos(u); });
      const auto p = pullback(transport(a, b), h);
      err.push_back(std::abs(inner(a, p, p) / inner(b, h, h) - 1.0));
    }
    const double q1 = err[0] / err[1], q2 = err[1] / err[2];
    w = fmt("IVP Richardson ratio %.2f (16 +- 30%%); matching/quadrature error ratios %.2f, %.2f under N doubling (>= %.1f)",
            rk, q1, q2, kSecondOrderRatio);
    return std::abs(rk / kRk4Ratio - 1.0) <= kRk4Band && q1 >= kSecondOrderRatio && q2 >= kSecondOrderRatio;
  });

  // 10. Negative controls.
  criterion(10, [](std::string& w) {
    const auto bent = cycle_from_arc(
        unit_fiber(2), Arc::bezier({1.0, cplx(0, 0.3), cplx(0, 0.3), cplx(0.8, 0.6), cplx(0.8, 0.6), -1.0}), 128);
    const auto rep = check_positive(bent);
    const auto g0 = round_cycle(3, 64), g1 = parabolic(3, 64, 0.3);
    std::vector<double> t, t2;
    for (int j = 0; j <= 32; ++j) {
      t.push_back(j / 32.0);
      t2.push_back(t.back() * t.back());
    }
    auto bad = bvp_solve(g0, g1, t2);
    bad.times = t;
    const double corrupted = verify_geodesic(bad).residual;
    bool rejected = false;
    try {
      MilnorFiber({1.0, -2.0, 1.0}, 2);
    } catch (const GeoflowError& e) {
      rejected = e.kind() == ErrorKind::DegenerateRoots;
    }
    w = fmt("non-positive cycle margin %.3e (rejected: %g); corrupted path residual %.3e (> %.0e)", rep.margin,
            rep.is_positive ? 0.0 : 1.0, corrupted, kCorrupted);
    w += rejected ? "; double root rejected as DegenerateRoots" : "; double root accepted";
    return !rep.is_positive && corrupted > kCorrupted && rejected;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
