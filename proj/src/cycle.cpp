#include "lag_geoflow/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lag_geoflow/errors.hpp"
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

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// 4-point Lagrange weights for fractional offset s in [0,1) with nodes -1, 0, 1, 2.
void cubic_weights(double s, double w[4]) {
  w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
  w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
  w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
}

template <class Sample>
auto periodic_cubic(int N, double u, Sample&& sample) {
  const double du = kPi / N;
  const double x = u / du;
  const double base = std::floor(x);
  const double s = x - base;
  double w[4];
  cubic_weights(s, w);
  const int k0 = static_cast<int>(base);
  auto acc = w[0] * sample(k0 - 1);
  for (int i = 1; i < 4; ++i) acc += w[i] * sample(k0 - 1 + i);
  return acc;
}

int wrap(int k, int N) {
  const int M = 2 * N;
  return ((k % M) + M) % M;
}

}  // namespace

// ---------------------------------------------------------------------------
// Arc

Arc::Arc(std::function<cplx(double)> value, std::function<cplx(double)> derivative)
    : value_(std::move(value)), derivative_(std::move(derivative)) {}

Arc Arc::bezier(std::vector<cplx> control) {
  if (control.size() < 2) throw GeoflowError(ErrorKind::InvalidInput, "bezier arc needs >= 2 points");
  auto eval = [](const std::vector<cplx>& pts, double x) {
    std::vector<cplx> work(pts);
    for (std::size_t level = work.size() - 1; level > 0; --level)
      for (std::size_t i = 0; i < level; ++i) work[i] = (1.0 - x) * work[i] + x * work[i + 1];
    return work[0];
  };
  std::vector<cplx> hodograph(control.size() - 1);
  const double deg = static_cast<double>(control.size() - 1);
  for (std::size_t i = 0; i + 1 < control.size(); ++i) hodograph[i] = deg * (control[i + 1] - control[i]);
  return Arc([control, eval](double x) { return eval(control, x); },
             [hodograph, eval](double x) { return eval(hodograph, x); });
}

Arc Arc::segment(cplx from, cplx to) { return bezier({from, to}); }

Arc Arc::parabolic(cplx from, cplx to, double a) {
  const cplx e = to - from;
  const cplx beta = cplx(0.0, -2.0 * a) * e;
  return bezier({from, from + 0.5 * (e + beta), to});
}

Arc Arc::from_function(std::function<cplx(double)> value) {
  auto deriv = [value](double x) {
    const double h = 1e-5;
    if (x < 2 * h) return (-3.0 * value(x) + 4.0 * value(x + h) - value(x + 2 * h)) / (2 * h);
    if (x > 1 - 2 * h) return (3.0 * value(x) - 4.0 * value(x - h) + value(x - 2 * h)) / (2 * h);
    return (value(x + h) - value(x - h)) / (2 * h);
  };
  return Arc(value, deriv);
}

Arc Arc::reversed() const {
  auto v = value_;
  auto d = derivative_;
  return Arc([v](double x) { return v(1.0 - x); }, [d](double x) { return -d(1.0 - x); });
}

// ---------------------------------------------------------------------------
// SymmetricCircle

SymmetricCircle::SymmetricCircle(FiberPtr fiber, std::vector<cplx> zeta, std::vector<cplx> z,
                                 const ToleranceProfile& tol)
    : fiber_(std::move(fiber)), N_(static_cast<int>(zeta.size()) - 1), zeta_(std::move(zeta)), z_(std::move(z)) {
  if (!fiber_) throw GeoflowError(ErrorKind::InvalidInput, "circle without fiber");
  if (N_ < 4 || z_.size() != zeta_.size())
    throw GeoflowError(ErrorKind::InvalidInput, "circle needs matching zeta/z arrays with N >= 4");
  const auto& F = *fiber_;
  for (int k = 0; k <= N_; ++k) {
    const cplx fk = F.f(zeta_[k]);
    if (std::abs(z_[k] * z_[k] - fk) > tol.on_fiber * (1.0 + std::abs(fk))) {
      std::ostringstream os;
      os << "point " << k << " is off the fiber (|z^2 - f| = " << std::abs(z_[k] * z_[k] - fk) << ")";
      throw GeoflowError(ErrorKind::InvalidInput, os.str());
    }
  }
  if (z_[0] != cplx{} || z_[N_] != cplx{})
    throw GeoflowError(ErrorKind::InvalidInput, "z must vanish at u = 0 and u = pi");
  for (int k = 1; k < N_; ++k)
    if (z_[k] == cplx{}) throw GeoflowError(ErrorKind::InvalidInput, "z vanishes at an interior point");
  double d0 = 0, d1 = 0;
  root0_ = F.nearest_root(zeta_[0], &d0);
  root_pi_ = F.nearest_root(zeta_[N_], &d1);
  const double scale = 1.0 + std::abs(F.roots()[root0_]);
  if (d0 > tol.arc_endpoint * scale || d1 > tol.arc_endpoint * scale)
    throw GeoflowError(ErrorKind::ArcEndpointNotRoot, "circle endpoints must lie on roots of f");
  if (root0_ == root_pi_)
    throw GeoflowError(ErrorKind::ArcEndpointNotRoot, "circle endpoints lie on the same root");
  for (int a = 0; a < N_; ++a)
    for (int b = a + 2; b < N_; ++b)
      if (segments_intersect(zeta_[a], zeta_[a + 1], zeta_[b], zeta_[b + 1]))
        throw GeoflowError(ErrorKind::InvalidInput, "zeta polyline self-intersects");
}

double SymmetricCircle::u(int k) const { return kPi * k / N_; }

cplx SymmetricCircle::zeta_at(int k) const {
  const int m = wrap(k, N_);
  return m <= N_ ? zeta_[m] : zeta_[2 * N_ - m];
}

cplx SymmetricCircle::z_at(int k) const {
  const int m = wrap(k, N_);
  return m <= N_ ? z_[m] : -z_[2 * N_ - m];
}

SymmetricCircle SymmetricCircle::mirrored() const {
  std::vector<cplx> z(z_.size());
  for (std::size_t k = 0; k < z_.size(); ++k) z[k] = -z_[k];
  z.front() = 0.0;
  z.back() = 0.0;
  return SymmetricCircle(fiber_, zeta_, std::move(z));
}

InvariantFunction InvariantFunction::from(const SymmetricCircle& circle, const std::function<double(double)>& h) {
  InvariantFunction out;
  out.values.resize(circle.half_size() + 1);
  for (int k = 0; k <= circle.half_size(); ++k) out.values[k] = h(circle.u(k));
  return out;
}

// ---------------------------------------------------------------------------

SymmetricCircle cycle_from_arc(FiberPtr fiber, const Arc& arc, int N, const ToleranceProfile& tol) {
  if (N < 4) throw GeoflowError(ErrorKind::InvalidInput, "N must be >= 4");
  const auto& F = *fiber;
  double d0 = 0, d1 = 0;
  const int r0 = F.nearest_root(arc(0.0), &d0);
  const int r1 = F.nearest_root(arc(1.0), &d1);
  if (d0 > tol.arc_endpoint * (1.0 + std::abs(F.roots()[r0])) ||
      d1 > tol.arc_endpoint * (1.0 + std::abs(F.roots()[r1])))
    throw GeoflowError(ErrorKind::ArcEndpointNotRoot, "arc endpoints must be roots of f");
  if (r0 == r1)
    throw GeoflowError(ErrorKind::ArcEndpointNotRoot, "arc must join two distinct roots");
  const cplx p0 = F.roots()[r0], p1 = F.roots()[r1];

  // Interior must stay away from every root.
  const int probes = 8 * N;
  for (int i = 1; i < probes; ++i) {
    const double x = static_cast<double>(i) / probes;
    double d = 0;
    F.nearest_root(arc(x), &d);
    if (d < tol.branch_delta) throw GeoflowError(ErrorKind::ArcThroughRoot, "arc passes through a zero of f");
  }

  std::vector<cplx> zeta(N + 1), q(N + 1);
  for (int k = 0; k <= N; ++k) {
    const double u = kPi * k / N;
    if (k == 0) {
      zeta[k] = p0;
      q[k] = F.fprime(p0) * arc.derivative(0.0) / 4.0;
    } else if (k == N) {
      zeta[k] = p1;
      q[k] = -F.fprime(p1) * arc.derivative(1.0) / 4.0;
    } else {
      const double w = 0.5 * (1.0 - std::cos(u));
      zeta[k] = arc(w);
      const double s = std::sin(u);
      q[k] = F.f(zeta[k]) / (s * s);
    }
  }
  if (std::abs(q[0]) == 0.0 || std::abs(q[N]) == 0.0)
    throw GeoflowError(ErrorKind::InvalidInput, "arc is not regular at an endpoint");

  std::vector<cplx> z(N + 1);
  cplx root_q = std::sqrt(q[0]);
  for (int k = 0; k <= N; ++k) {
    const cplx next = nearest_sqrt(q[k], root_q);
    if (k > 0 && std::abs(next - root_q) > 0.5 * std::abs(root_q) + tol.branch_delta) {
      std::ostringstream os;
      os << "sqrt(f / sin^2) jumped sheets near u = " << kPi * k / N << "; increase N";
      throw GeoflowError(ErrorKind::BranchFailure, os.str());
    }
    root_q = next;
    if (k == 0 || k == N) {
      z[k] = 0.0;
    } else {
      cplx zk = std::sin(kPi * k / N) * root_q;
      const cplx fk = F.f(zeta[k]);
      zk -= (zk * zk - fk) / (2.0 * zk);
      z[k] = zk;
    }
  }
  return SymmetricCircle(std::move(fiber), std::move(zeta), std::move(z), tol);
}

std::vector<cplx> omega_density(const SymmetricCircle& circle) {
  const int N = circle.half_size();
  const int n = circle.fiber().dimension();
  const auto& grid = spectral_grid(N);
  const auto dzeta = grid.diff_even(std::span<const cplx>(circle.zeta()));
  std::vector<cplx> rho(N + 1, cplx{});
  for (int k = 1; k < N; ++k) rho[k] = 0.5 * dzeta[k] * ipow(circle.z()[k], n - 2);
  if (n == 1) {
    // finite limit zeta'' / (2 z') at the ends
    const auto d2zeta = grid.diff_odd(std::span<const cplx>(dzeta));
    const auto dz = grid.diff_odd(std::span<const cplx>(circle.z()));
    rho[0] = 0.5 * d2zeta[0] / dz[0];
    rho[N] = 0.5 * d2zeta[N] / dz[N];
  }
  return rho;
}

PositivityReport check_positive(const SymmetricCircle& circle, const ToleranceProfile& tol) {
  const int N = circle.half_size();
  const int n = circle.fiber().dimension();
  const auto& F = circle.fiber();
  const auto rho = omega_density(circle);
  const auto dz = spectral_grid(N).diff_odd(std::span<const cplx>(circle.z()));

  PositivityReport report;
  double margin = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  int sign = 0;
  bool sign_flip = false;
  for (int k = 1; k < N; ++k) {
    const double mag = std::abs(rho[k]);
    const double ratio = mag > 0 ? std::abs(rho[k].real()) / mag : 0.0;
    if (ratio < margin) {
      margin = ratio;
      worst = circle.u(k);
    }
    const int s = rho[k].real() > 0 ? 1 : (rho[k].real() < 0 ? -1 : 0);
    if (s == 0) continue;
    if (sign == 0) {
      sign = s;
    } else if (s != sign && !sign_flip) {
      sign_flip = true;
      worst = circle.u(k);
    }
  }
  for (int k : {0, N}) {
    const cplx w = ipow(dz[k], n) / F.fprime(circle.zeta()[k]);
    const double mag = std::abs(w);
    const double ratio = mag > 0 ? std::abs(w.real()) / mag : 0.0;
    if (ratio < margin) {
      margin = ratio;
      worst = circle.u(k);
    }
  }
  // Re rho must keep one sign on (0, pi); a sign change between grid points is a zero.
  if (sign_flip) margin = 0.0;
  report.margin = margin;
  report.worst_u = worst;
  report.is_positive = margin > tol.positivity_floor;
  return report;
}

double sphere_volume(int m) {
  // |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
  const double a = 0.5 * (m + 1);
  return 2.0 * std::pow(kPi, a) / std::tgamma(a);
}

namespace {
void require_positive(const SymmetricCircle& circle, const ToleranceProfile& tol) {
  const auto report = check_positive(circle, tol);
  if (!report.is_positive) {
    std::ostringstream os;
    os << "cycle is not positive (margin " << report.margin << " at u = " << report.worst_u << ")";
    throw GeoflowError(ErrorKind::NotPositive, os.str());
  }
}

double even_extrapolate(double u1, double v1, double u2, double v2, double u3, double v3) {
  // a + b u^2 + c u^4 through three points, evaluated at 0.
  const double x1 = u1 * u1, x2 = u2 * u2, x3 = u3 * u3;
  return v1 * x2 * x3 / ((x1 - x2) * (x1 - x3)) + v2 * x1 * x3 / ((x2 - x1) * (x2 - x3)) +
         v3 * x1 * x2 / ((x3 - x1) * (x3 - x2));
}
}  // namespace

std::vector<double> measure_density(const SymmetricCircle& circle, const ToleranceProfile& tol) {
  require_positive(circle, tol);
  const int N = circle.half_size();
  const int n = circle.fiber().dimension();
  const double V = sphere_volume(n - 1);
  const auto rho = omega_density(circle);
  std::vector<double> mu(N + 1, 0.0);
  for (int k = 1; k < N; ++k) mu[k] = V * std::abs(rho[k].real());
  if (n == 1) {
    const double du = kPi / N;
    mu[0] = even_extrapolate(du, mu[1], 2 * du, mu[2], 3 * du, mu[3]);
    mu[N] = even_extrapolate(du, mu[N - 1], 2 * du, mu[N - 2], 3 * du, mu[N - 3]);
  }
  return mu;
}

std::vector<double> quadrature_weights(int N, int n) {
  const auto& grid = spectral_grid(N);
  if (n % 2 == 1) return grid.even_full_weights();
  // Re rho is odd in u for even n: fold |Re rho| h into an odd function on [0, pi].
  std::vector<double> w = grid.odd_half_weights();
  for (auto& x : w) x *= 2.0;
  return w;
}

double integrate(const SymmetricCircle& circle, const InvariantFunction& h, const ToleranceProfile& tol) {
  const auto mu = measure_density(circle, tol);
  const auto w = quadrature_weights(circle.half_size(), circle.fiber().dimension());
  double acc = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) acc += w[k] * h.values[k] * mu[k];
  return acc;
}

double inner(const SymmetricCircle& circle, const InvariantFunction& h, const InvariantFunction& g,
             const ToleranceProfile& tol) {
  const auto mu = measure_density(circle, tol);
  const auto w = quadrature_weights(circle.half_size(), circle.fiber().dimension());
  double acc = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) acc += w[k] * h.values[k] * g.values[k] * mu[k];
  return acc;
}

double upsilon_norm(const SymmetricCircle& circle, const InvariantFunction& h, const ToleranceProfile& tol) {
  return std::sqrt(std::max(0.0, inner(circle, h, h, tol)));
}

InvariantFunction project_mean_zero(const SymmetricCircle& circle, const InvariantFunction& h,
                                    const ToleranceProfile& tol) {
  const auto mu = measure_density(circle, tol);
  const auto w = quadrature_weights(circle.half_size(), circle.fiber().dimension());
  double mass = 0.0, moment = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    mass += w[k] * mu[k];
    moment += w[k] * h.values[k] * mu[k];
  }
  InvariantFunction out{h.values, true};
  const double mean = moment / mass;
  for (auto& v : out.values) v -= mean;
  return out;
}

bool is_special(const SymmetricCircle& circle, double tol_radians, const ToleranceProfile& tol) {
  require_positive(circle, tol);
  const auto rho = omega_density(circle);
  const int N = circle.half_size();
  // Work with exp(2 i arg rho) so that arg is taken modulo pi.
  cplx mean{};
  for (int k = 1; k < N; ++k) mean += std::polar(1.0, 2.0 * std::arg(rho[k]));
  if (std::abs(mean) == 0.0) return false;
  const double center = std::arg(mean);
  double worst = 0.0;
  for (int k = 1; k < N; ++k) {
    const double d = std::remainder(2.0 * std::arg(rho[k]) - center, 2.0 * kPi);
    worst = std::max(worst, 0.5 * std::abs(d));
  }
  return worst <= tol_radians;
}

double hausdorff_zeta(const SymmetricCircle& a, const SymmetricCircle& b) {
  auto directed = [](const SymmetricCircle& p, const SymmetricCircle& q) {
    double worst = 0.0;
    const auto& P = p.zeta();
    const auto& Q = q.zeta();
    for (auto pt : P) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j + 1 < Q.size(); ++j) best = std::min(best, point_segment_distance(pt, Q[j], Q[j + 1]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

cplx interp_zeta(const SymmetricCircle& circle, double u) {
  return periodic_cubic(circle.half_size(), u, [&](int k) { return circle.zeta_at(k); });
}

cplx interp_z(const SymmetricCircle& circle, double u) {
  return periodic_cubic(circle.half_size(), u, [&](int k) { return circle.z_at(k); });
}

double interp_even(std::span<const double> values, double u) {
  const int N = static_cast<int>(values.size()) - 1;
  return periodic_cubic(N, u, [&](int k) {
    const int m = wrap(k, N);
    return m <= N ? values[m] : values[2 * N - m];
  });
}

}  // namespace lag_geoflow
