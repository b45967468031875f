#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace eqft {

using Complex = std::complex<double>;
using Eigen::ArrayXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

/// Uniform 1D grid x_j = origin + j*step, j = 0..n-1.
struct UniformGrid {
  double origin = 0.0;
  double step = 1.0;
  Eigen::Index n = 0;

  double point(Eigen::Index j) const { return origin + step * static_cast<double>(j); }
  double extent() const { return step * static_cast<double>(n - 1); }
  double last() const { return point(n - 1); }

  /// Symmetric grid covering [-half, half) with n points (n even keeps 0 on the grid).
  static UniformGrid symmetric(double half, Eigen::Index n) {
    return UniformGrid{-half, 2.0 * half / static_cast<double>(n), n};
  }
  /// Radial grid covering [0, rmax] inclusive.
  static UniformGrid radial(double rmax, Eigen::Index n) {
    return UniformGrid{0.0, rmax / static_cast<double>(n - 1), n};
  }

  bool operator==(const UniformGrid&) const = default;
};

/// Trapezoid quadrature of samples on a uniform grid.
template <typename Derived>
auto trapezoid(const Eigen::MatrixBase<Derived>& f, double step) {
  typename Derived::Scalar s = f.sum() - 0.5 * (f(0) + f(f.size() - 1));
  return s * step;
}

/// Composite Simpson on a uniform grid; odd sample counts use pure Simpson,
/// even counts close the last interval with a 3-point rule.
template <typename Derived>
auto simpson(const Eigen::MatrixBase<Derived>& f, double step) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = f.size();
  if (n < 2) return Scalar(0);
  if (n == 2) return Scalar((f(0) + f(1)) * (step / 2.0));
  Eigen::Index m = (n % 2 == 1) ? n : n - 1;
  Scalar s = f(0) + f(m - 1);
  for (Eigen::Index j = 1; j < m - 1; j += 2) s += Scalar(4) * f(j);
  for (Eigen::Index j = 2; j < m - 1; j += 2) s += Scalar(2) * f(j);
  Scalar out = s * (step / 3.0);
  if (n % 2 == 0) {
    // last interval via quadratic through the final three samples
    out += (step / 12.0) * (-f(n - 3) + Scalar(8) * f(n - 2) + Scalar(5) * f(n - 1));
  }
  return out;
}

/// Gauss-Legendre nodes and weights on [a, b].
struct GaussRule {
  VectorXd nodes;
  VectorXd weights;

  template <typename F>
  auto integrate(F&& f) const {
    auto acc = f(nodes(0)) * weights(0);
    for (Eigen::Index i = 1; i < nodes.size(); ++i) acc += f(nodes(i)) * weights(i);
    return acc;
  }
};

GaussRule gauss_legendre(int n, double a, double b);

/// Gauss rule for a nonnegative weight function w on [a, b] (Stieltjes +
/// Golub-Welsch). `w` is resolved with `resolution` Legendre points.
GaussRule gauss_weighted(int n, double a, double b, const std::function<double(double)>& w,
                         int resolution = 2000);

/// Cubic (Catmull-Rom) interpolation of uniformly sampled data. Outside the
/// covered range the result is zero.
template <typename Scalar>
Scalar interp_cubic(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f, const UniformGrid& g,
                    double x, bool* out_of_range = nullptr) {
  const double u = (x - g.origin) / g.step;
  const auto n = g.n;
  if (u < 0.0 || u > static_cast<double>(n - 1)) {
    if (out_of_range) *out_of_range = true;
    return Scalar(0);
  }
  if (out_of_range) *out_of_range = false;
  Eigen::Index j = static_cast<Eigen::Index>(std::floor(u));
  if (j < 1) j = 1;
  if (j > n - 3) j = n - 3;
  const double t = u - static_cast<double>(j);
  const Scalar fm1 = f(j - 1), f0 = f(j), f1 = f(j + 1), f2 = f(j + 2);
  const Scalar a0 = f0;
  const Scalar a1 = 0.5 * (f1 - fm1);
  const Scalar a2 = fm1 - 2.5 * f0 + 2.0 * f1 - 0.5 * f2;
  const Scalar a3 = 0.5 * (f2 - fm1) + 1.5 * (f0 - f1);
  return a0 + t * (a1 + t * (a2 + t * a3));
}

/// Least-squares power-law fit |value| ~ C * eps^slope on log-log axes.
struct PowerLawFit {
  double slope = 0.0;
  double prefactor = 0.0;  // C
  double r2 = 0.0;
  bool below_floor = false;  // all |values| under the noise floor
};

PowerLawFit fit_power_law(const VectorXd& eps, const VectorXd& absval, double floor = 1e-13);

}  // namespace eqft
