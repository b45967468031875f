#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>

#include "eqft/damper.hpp"
#include "eqft/errors.hpp"
#include "eqft/grid.hpp"

namespace eqft {

/// Multi-index for moments; d = 1 uses the first slot only.
using MultiIndex = std::array<int, 3>;

inline int order(const MultiIndex& n) { return n[0] + n[1] + n[2]; }

/// Cached table of moments M[m][n] = integral of z^n rho^m(z).
struct MomentTable {
  int max_power = 0;
  int max_order = 0;
  std::map<std::pair<int, MultiIndex>, Complex> values;

  Complex at(int m, const MultiIndex& n) const { return values.at({m, n}); }
  bool has(int m, const MultiIndex& n) const { return values.count({m, n}) > 0; }
};

/// Mollifier rho sampled on a uniform grid: full symmetric axis for d = 1,
/// radial profile for d = 3. Mollifiers from dampers are inverse Fourier
/// transforms; complex moment-constrained mollifiers carry no damper.
class SampledMollifier {
 public:
  int dim() const { return dim_; }
  const UniformGrid& grid() const { return grid_; }
  double grid_step() const { return grid_.step; }
  const VectorXcd& samples() const { return samples_; }
  const Damper* source_damper() const { return source_ ? source_.get() : nullptr; }
  const MomentTable& moments() const { return table_; }

  /// Value at a point by cubic interpolation of the samples (d = 1 uses the
  /// signed coordinate, d = 3 the radius). Zero outside the sampled window.
  Complex value(double x, bool* out_of_range = nullptr) const;

  /// Samples reflected through the origin (rho-vee). Dampers are even, so a
  /// damper source is retained.
  SampledMollifier reversed() const;

  /// Exact rescaling: rho_eps(x) = eps^-d rho(x/eps) as a sampled mollifier on
  /// the compressed grid.
  SampledMollifier scaled(double eps) const;

  bool real_within(double tol) const { return samples_.imag().cwiseAbs().maxCoeff() < tol; }

  static SampledMollifier from_parts(int dim, const UniformGrid& grid, VectorXcd samples,
                                     std::shared_ptr<const Damper> source);

  /// Populates the cached table for powers m <= max_power, |n| <= max_order.
  void tabulate_moments(int max_power = 3, int max_order = 6);

 private:
  int dim_ = 1;
  UniformGrid grid_;
  VectorXcd samples_;
  std::shared_ptr<const Damper> source_;
  MomentTable table_;

  friend SampledMollifier damper_to_mollifier(const Damper&, double, Eigen::Index);
};

/// Inverse Fourier transform of a damper: an exact discrete transform on a
/// symmetric grid (the d = 3 radial profile goes through the same transform
/// of p*rhohat(p)). `half_extent` is the half-width of the real-space window;
/// it must be generous because the x^6-weighted moment quadratures integrate
/// deep into the Gevrey tail. Throws GridExtentError when the tail mass of
/// |rho| in the outer 10% of the window exceeds 1e-8 of the total.
SampledMollifier damper_to_mollifier(const Damper& damper, double half_extent = 2048.0,
                                     Eigen::Index points = 131072);

/// Quadrature moment of z^n rho^m(z) over the sampled grid.
Complex moment(const SampledMollifier& rho, int m, const MultiIndex& n);
Complex moment(const SampledMollifier& rho, int m, int n1d);

/// Convolution of two sampled mollifiers: product of dampers when both carry
/// one, otherwise a grid FFT (d = 1, matching grids).
SampledMollifier convolve_mollifiers(const SampledMollifier& a, const SampledMollifier& b);

/// rho-vee convolved with rho, the regularized delta kernel of the equal-time
/// commutator.
inline SampledMollifier self_correlation(const SampledMollifier& rho) {
  return convolve_mollifiers(rho.reversed(), rho);
}

/// Scaled evaluations: mollifiers compress and renormalize, dampers dilate.
struct ScaledValue {
  Complex value;
  bool out_of_range = false;
};
ScaledValue scaled_eval(const SampledMollifier& rho, double eps, double x);
inline double scaled_eval(const Damper& d, double eps, double p) { return d.scaled(eps, p); }

// Damper-side closed quadratures for mollifier values; these avoid grid
// interpolation wherever an integral of the mollifier against a simple kernel
// reduces to a compact quadrature over the damper support.

/// chi(x) = (1/pi) int_0^b cos(s x) chihat(s) ds   (d = 1, even damper)
double mollifier_value_1d(const Damper& damper, double x, const GaussRule& rule);
/// chi(r) = (1/(2 pi^2 r)) int_0^b s sin(s r) chihat(s) ds   (d = 3 radial)
double mollifier_value_3d(const Damper& damper, double r, const GaussRule& rule);
/// Parseval mass of |chi|^2: int |chi|^2 d^dz = (2 pi)^-d int |chihat|^2 d^dp.
double squared_mass(const Damper& damper, const GaussRule& rule);

/// Options for the complex mollifier with vanishing power moments: M[1,0] = 1,
/// M[1,n] = 0 and M[power,n] = 0 for 1 <= n <= max_order, Im M[power,0] = 0.
struct MomentMollifierOptions {
  int max_order = 2;        // N
  int power = 2;            // m (1 or 2)
  bool require_real = false;
  bool zero_m20 = false;    // optional extra constraint M[2,0] = 0
  double tolerance = 1e-8;
};

/// Hermite-function least squares (Gauss-Newton). Throws ConstructionError
/// with the achieved residual when the tolerance cannot be met, in particular
/// for require_real with even-order constraints.
SampledMollifier build_complex_moment_mollifier(const MomentMollifierOptions& opt);

}  // namespace eqft
