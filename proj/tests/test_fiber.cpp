#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lag_geoflow/fiber.hpp"
#include "support.hpp"

using namespace lag_geoflow;
using lgtest::error_kind_of;

TEST_CASE("quadratic roots") {
  auto F = make_fiber({1.0, 0.0, -1.0}, 2);
  REQUIRE(F.roots().size() == 2);
  CHECK(std::abs(F.roots()[0] - cplx(-1.0)) < 1e-14);
  CHECK(std::abs(F.roots()[1] - cplx(1.0)) < 1e-14);
  CHECK(F.root_separation() == doctest::Approx(2.0));
}

TEST_CASE("linear fiber has one root at the origin") {
  auto F = make_fiber({0.0, 1.0}, 3);
  REQUIRE(F.roots().size() == 1);
  CHECK(std::abs(F.roots()[0]) < 1e-15);
  CHECK(F.dimension() == 3);
}

TEST_CASE("construction errors") {
  CHECK(error_kind_of([] { make_fiber({1.0, 0.0, -2.0, 0.0, 1.0}, 2); }) == ErrorKind::DegenerateRoots);
  CHECK(error_kind_of([] { make_fiber({0.0, 0.0}, 2); }) == ErrorKind::EmptyPolynomial);
  CHECK(error_kind_of([] { make_fiber({}, 2); }) == ErrorKind::EmptyPolynomial);
  CHECK(error_kind_of([] { make_fiber({3.0}, 2); }) == ErrorKind::InvalidInput);
}

TEST_CASE("evaluation") {
  auto F = make_fiber({1.0, 0.0, -1.0}, 2);
  CHECK(std::abs(F.f(0.0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(F.fprime(1.0) - cplx(-2.0)) < 1e-15);
  CHECK(std::abs(F.f(cplx(0.0, 2.0)) - cplx(5.0)) < 1e-14);
  CHECK(std::abs(F.fsecond(0.3) - cplx(-2.0)) < 1e-15);
}

TEST_CASE("root polishing for random well-separated polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int deg = 1 + trial % 8;
    std::vector<cplx> roots;
    while (static_cast<int>(roots.size()) < deg) {
      cplx r(d(rng), d(rng));
      bool ok = true;
      for (auto q : roots) ok = ok && std::abs(q - r) > 0.1;
      if (ok) roots.push_back(r);
    }
    std::vector<cplx> coeffs{1.0};
    for (auto r : roots) {
      std::vector<cplx> next(coeffs.size() + 1, 0.0);
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        next[i] -= r * coeffs[i];
        next[i + 1] += coeffs[i];
      }
      coeffs = next;
    }
    auto F = make_fiber(coeffs, 2);
    for (auto r : F.roots()) CHECK(std::abs(F.f(r)) < 1e-12);
    for (auto r : roots) {
      double dist = 0;
      F.nearest_root(r, &dist);
      CHECK(dist < 1e-10);
    }
  }
}

TEST_CASE("branch tracking along the imaginary axis") {
  auto F = make_fiber({1.0, 0.0, -1.0}, 2);
  std::vector<cplx> path;
  for (int k = 0; k <= 10; ++k) path.emplace_back(0.0, 0.05 * k);
  auto z = branch_track_sqrt(F, path, 1.0);
  CHECK(std::abs(z.back() - cplx(1.1180339887498949)) < 1e-12);
  for (std::size_t k = 0; k < z.size(); ++k) CHECK(std::abs(z[k] * z[k] - F.f(path[k])) <= 1e-12 * (1 + std::abs(F.f(path[k]))));
}

TEST_CASE("constant path keeps the seed") {
  auto F = make_fiber({1.0, 0.0, -1.0}, 2);
  std::vector<cplx> path(5, 0.0);
  for (auto z : branch_track_sqrt(F, path, -1.0)) CHECK(std::abs(z - cplx(-1.0)) < 1e-15);
}

TEST_CASE("bad seed") {
  auto F = make_fiber({1.0, 0.0, -1.0}, 2);
  std::vector<cplx> path{0.0, 0.1};
  CHECK(error_kind_of([&] { branch_track_sqrt(F, path, 2.0); }) == ErrorKind::BadSeed);
}

namespace {
std::vector<cplx> loop(cplx center, double radius, int steps, int turns = 1) {
  std::vector<cplx> path;
  for (int k = 0; k <= steps * turns; ++k)
    path.push_back(center + radius * std::polar(1.0, 2.0 * std::numbers::pi * k / steps));
  return path;
}
}  // namespace

TEST_CASE("monodromy around roots") {
  auto F = make_fiber({1.0, 0.0, -1.0}, 2);
  {
    auto path = loop(1.0, 0.1, 72);
    const cplx seed = std::sqrt(F.f(path.front()));
    auto z = branch_track_sqrt(F, path, seed);
    CHECK(std::abs(z.back() + seed) < 1e-10);
  }
  {
    // encloses both roots: sign preserved
    auto path = loop(0.0, 2.0, 400);
    const cplx seed = std::sqrt(F.f(path.front()));
    auto z = branch_track_sqrt(F, path, seed);
    CHECK(std::abs(z.back() - seed) < 1e-10);
  }
  {
    // encloses no root
    auto path = loop(cplx(0.0, 1.0), 0.5, 200);
    const cplx seed = std::sqrt(F.f(path.front()));
    auto z = branch_track_sqrt(F, path, seed);
    CHECK(std::abs(z.back() - seed) < 1e-10);
  }
}

TEST_CASE("tracking a path and its reverse returns the seed") {
  auto F = make_fiber({1.0, 0.0, 0.0, -1.0}, 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-0.02, 0.02);
  std::vector<cplx> path{cplx(0.0, 0.2)};
  for (int k = 0; k < 300; ++k) path.push_back(path.back() + cplx(d(rng), d(rng)));
  const cplx seed = std::sqrt(F.f(path.front()));
  auto forward = branch_track_sqrt(F, path, seed);
  std::vector<cplx> back(path.rbegin(), path.rend());
  auto ret = branch_track_sqrt(F, back, forward.back());
  CHECK(std::abs(ret.back() - seed) < 1e-10);
}

TEST_CASE("a step across a branch point is refused") {
  auto F = make_fiber({1.0, 0.0, -1.0}, 2);
  std::vector<cplx> path{cplx(0.9, 0.0), cplx(1.1, 0.0)};
  CHECK(error_kind_of([&] { branch_track_sqrt(F, path, std::sqrt(F.f(path[0]))); }) == ErrorKind::StepTooLarge);
}
