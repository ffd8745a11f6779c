#include "lag_geoflow/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lag_geoflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

HalfGridSpectral::HalfGridSpectral(int N) : N_(N) {
  if (N < 2) throw std::invalid_argument("HalfGridSpectral: N must be >= 2");
  const int S = N + 1;
  cos_.resize(S * S);
  sin_.resize(S * S);
  for (int m = 0; m <= N; ++m) {
    for (int k = 0; k <= N; ++k) {
      // Exact zeros keep the symmetry of the tables bit-clean.
      const long mk = static_cast<long>(m) * k;
      const double angle = kPi * static_cast<double>(mk % (2L * N)) / N;
      cos_[m * S + k] = std::cos(angle);
      sin_[m * S + k] = (mk % N == 0) ? 0.0 : std::sin(angle);
    }
  }
  odd_weights_.assign(S, 0.0);
  for (int k = 1; k < N; ++k) {
    double w = 0.0;
    for (int m = 1; m < N; m += 2) w += (2.0 / m) * sin_[m * S + k];
    odd_weights_[k] = (2.0 / N) * w;
  }
  const double du = kPi / N;
  even_weights_.assign(S, 2.0 * du);
  even_weights_[0] = du;
  even_weights_[N] = du;
}

double HalfGridSpectral::u(int k) const { return kPi * k / N_; }

std::vector<double> HalfGridSpectral::cos_coeffs(std::span<const double> f) const {
  const int N = N_, S = N + 1;
  std::vector<double> a(S, 0.0);
  for (int m = 0; m <= N; ++m) {
    double acc = 0.5 * (f[0] * cos_[m * S] + f[N] * cos_[m * S + N]);
    for (int k = 1; k < N; ++k) acc += f[k] * cos_[m * S + k];
    a[m] = (2.0 / N) * acc;
  }
  a[0] *= 0.5;
  a[N] *= 0.5;
  return a;
}

std::vector<double> HalfGridSpectral::sin_coeffs(std::span<const double> g) const {
  const int N = N_, S = N + 1;
  std::vector<double> b(S, 0.0);
  for (int m = 1; m < N; ++m) {
    double acc = 0.0;
    for (int k = 1; k < N; ++k) acc += g[k] * sin_[m * S + k];
    b[m] = (2.0 / N) * acc;
  }
  return b;
}

template <class T>
std::vector<T> HalfGridSpectral::diff_even_impl(std::span<const T> f) const {
  const int N = N_, S = N + 1;
  std::vector<T> a(S, T{});
  for (int m = 1; m < N; ++m) {
    T acc = 0.5 * (f[0] * cos_[m * S] + f[N] * cos_[m * S + N]);
    for (int k = 1; k < N; ++k) acc += f[k] * cos_[m * S + k];
    a[m] = (2.0 / N) * acc;
  }
  std::vector<T> out(S, T{});
  for (int k = 1; k < N; ++k) {
    T acc{};
    for (int m = 1; m < N; ++m) acc -= static_cast<double>(m) * a[m] * sin_[m * S + k];
    out[k] = acc;
  }
  return out;
}

template <class T>
std::vector<T> HalfGridSpectral::diff_odd_impl(std::span<const T> g) const {
  const int N = N_, S = N + 1;
  std::vector<T> b(S, T{});
  for (int m = 1; m < N; ++m) {
    T acc{};
    for (int k = 1; k < N; ++k) acc += g[k] * sin_[m * S + k];
    b[m] = (2.0 / N) * acc;
  }
  std::vector<T> out(S, T{});
  for (int k = 0; k <= N; ++k) {
    T acc{};
    for (int m = 1; m < N; ++m) acc += static_cast<double>(m) * b[m] * cos_[m * S + k];
    out[k] = acc;
  }
  return out;
}

std::vector<double> HalfGridSpectral::diff_even(std::span<const double> f) const {
  return diff_even_impl(f);
}
std::vector<cplx> HalfGridSpectral::diff_even(std::span<const cplx> f) const {
  return diff_even_impl(f);
}
std::vector<double> HalfGridSpectral::diff_odd(std::span<const double> g) const {
  return diff_odd_impl(g);
}
std::vector<cplx> HalfGridSpectral::diff_odd(std::span<const cplx> g) const {
  return diff_odd_impl(g);
}

std::vector<double> HalfGridSpectral::integrate_odd(std::span<const double> g) const {
  const int N = N_, S = N + 1;
  const auto b = sin_coeffs(g);
  std::vector<double> out(S, 0.0);
  for (int k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (int m = 1; m < N; ++m) acc += b[m] * (1.0 - cos_[m * S + k]) / m;
    out[k] = acc;
  }
  return out;
}

const HalfGridSpectral& spectral_grid(int N) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<HalfGridSpectral>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_unique<HalfGridSpectral>(N);
  return *slot;
}

// ---------------------------------------------------------------------------

Chebyshev01::Chebyshev01(int M) : M_(M) {
  if (M < 2) throw std::invalid_argument("Chebyshev01: degree must be >= 2");
  nodes_.resize(M + 1);
  for (int j = 0; j <= M; ++j) nodes_[j] = 0.5 * (1.0 - std::cos(kPi * j / M));
  nodes_[0] = 0.0;
  nodes_[M] = 1.0;

  weights_.assign(M + 1, 0.0);
  diff_.assign((M + 1) * (M + 1), 0.0);
  std::vector<double> unit(M + 1, 0.0);
  for (int j = 0; j <= M; ++j) {
    unit.assign(M + 1, 0.0);
    unit[j] = 1.0;
    const auto c = coeffs(unit);
    double w = 0.0;
    for (int p = 0; p <= M; p += 2) w += c[p] * 2.0 / (1.0 - static_cast<double>(p) * p);
    weights_[j] = 0.5 * w;

    // derivative coefficients in x, then chain rule dx/dtau = 2
    std::vector<double> d(M + 2, 0.0);
    for (int k = M; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0 * k * c[k];
    d[0] *= 0.5;
    for (int i = 0; i <= M; ++i) diff_[i * (M + 1) + j] = 2.0 * eval(std::span(d).first(M + 1), nodes_[i]);
  }
}

std::vector<double> Chebyshev01::coeffs(std::span<const double> values) const {
  const int M = M_;
  std::vector<double> c(M + 1, 0.0);
  // values are at ascending tau; standard Lobatto ordering y_i = cos(pi i / M) is descending.
  for (int p = 0; p <= M; ++p) {
    double acc = 0.0;
    for (int i = 0; i <= M; ++i) {
      const double v = values[M - i];
      const double w = (i == 0 || i == M) ? 0.5 : 1.0;
      acc += w * v * std::cos(kPi * p * i / M);
    }
    c[p] = (2.0 / M) * acc;
  }
  c[0] *= 0.5;
  c[M] *= 0.5;
  return c;
}

std::vector<double> Chebyshev01::primitive(std::span<const double> c) const {
  const int M = static_cast<int>(c.size()) - 1;
  std::vector<double> ext(M + 3, 0.0);
  for (int p = 0; p <= M; ++p) ext[p] = c[p];
  std::vector<double> C(M + 2, 0.0);
  C[1] = ext[0] - 0.5 * ext[2];
  for (int k = 2; k <= M + 1; ++k) C[k] = (ext[k - 1] - ext[k + 1]) / (2.0 * k);
  double at_minus_one = 0.0;
  for (int k = 1; k <= M + 1; ++k) at_minus_one += (k % 2 == 0 ? 1.0 : -1.0) * C[k];
  C[0] = -at_minus_one;
  for (auto& v : C) v *= 0.5;  // d tau = dx / 2
  return C;
}

double Chebyshev01::eval(std::span<const double> c, double tau) {
  const double x = 2.0 * tau - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const double b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

std::vector<cplx> Chebyshev01::derivative(std::span<const cplx> values) const {
  const int S = M_ + 1;
  std::vector<cplx> out(S, cplx{});
  for (int i = 0; i < S; ++i) {
    cplx acc{};
    for (int j = 0; j < S; ++j) acc += diff_[i * S + j] * values[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace lag_geoflow
