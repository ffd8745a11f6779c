#pragma once

// Spectral tools on the half grid u_k = pi k / N, k = 0..N, for functions on
// the circle that are even (cosine series) or odd (sine series) about u = 0.
// Also a small Chebyshev toolkit on [0, 1] used for leaf-segment quadrature.

#include <complex>
#include <span>
#include <vector>

namespace lag_geoflow {

using cplx = std::complex<double>;

class HalfGridSpectral {
 public:
  explicit HalfGridSpectral(int N);

  int size() const { return N_; }
  double u(int k) const;

  // d/du of an even function; result is odd (zero at k = 0, N).
  std::vector<double> diff_even(std::span<const double> f) const;
  std::vector<cplx> diff_even(std::span<const cplx> f) const;
  // d/du of an odd function; result is even.
  std::vector<double> diff_odd(std::span<const double> g) const;
  std::vector<cplx> diff_odd(std::span<const cplx> g) const;
  // Primitive of an odd function, normalized to vanish at u = 0.
  std::vector<double> integrate_odd(std::span<const double> g) const;

  // Cosine / sine series coefficients (length N + 1; b_0 = b_N = 0).
  std::vector<double> cos_coeffs(std::span<const double> f) const;
  std::vector<double> sin_coeffs(std::span<const double> g) const;

  // Weights W_k with sum_k W_k g_k ~ int_0^pi g du for odd periodic g.
  const std::vector<double>& odd_half_weights() const { return odd_weights_; }
  // Trapezoid weights on [0, 2pi] folded onto the half grid for even g.
  const std::vector<double>& even_full_weights() const { return even_weights_; }

 private:
  template <class T>
  std::vector<T> diff_even_impl(std::span<const T> f) const;
  template <class T>
  std::vector<T> diff_odd_impl(std::span<const T> g) const;

  int N_;
  std::vector<double> cos_;  // cos(m u_k), row-major (m, k)
  std::vector<double> sin_;
  std::vector<double> odd_weights_;
  std::vector<double> even_weights_;
};

// Shared, lazily built instance per grid size.
const HalfGridSpectral& spectral_grid(int N);

// Chebyshev-Lobatto nodes on [0, 1], ascending: tau_j = (1 - cos(pi j / M)) / 2.
class Chebyshev01 {
 public:
  explicit Chebyshev01(int M);

  int degree() const { return M_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }  // Clenshaw-Curtis on [0,1]

  std::vector<double> coeffs(std::span<const double> values) const;
  // Coefficients of the primitive vanishing at tau = 0.
  std::vector<double> primitive(std::span<const double> c) const;
  static double eval(std::span<const double> c, double tau);
  std::vector<cplx> derivative(std::span<const cplx> values) const;

 private:
  int M_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> diff_;  // (M+1)^2 differentiation matrix on [0,1]
};

}  // namespace lag_geoflow
