#pragma once

#include <functional>
#include <memory>

#include "eqft/grid.hpp"

namespace eqft {

/// Grid request for damper/mollifier sampling.
struct GridSpec {
  double extent_factor = 1.5;    // momentum grid covers [-b*extent_factor, b*extent_factor]
  Eigen::Index points = 4096;    // samples per axis (radial profile for d = 3)
  double glue_stiffness = 2.0;   // k in the exp(-k/t) transition glue
};

/// Smooth compactly supported cutoff in momentum space: identically 1 for
/// |p| <= a, identically 0 for |p| >= b, C-infinity in between. Radially
/// symmetric for d = 3, even for d = 1. Products of dampers stay dampers.
class Damper {
 public:
  Damper() = default;
  Damper(double a, double b, int dim, const GridSpec& grid = {});

  double plateau_radius() const { return a_; }
  double support_radius() const { return b_; }
  int dim() const { return dim_; }
  bool symmetric() const { return true; }

  /// Profile value at radius/abscissa p (exact closed form, not interpolated).
  double operator()(double p) const { return profile_(std::abs(p)); }

  /// Scaled damper value per the rule damper_eps(p) = damper(eps*p).
  double scaled(double eps, double p) const { return (*this)(eps * p); }

  /// Pointwise product with another damper (plateau/support shrink to the
  /// smaller of the two).
  Damper product(const Damper& other) const;

  const VectorXd& samples() const { return samples_; }
  const UniformGrid& grid() const { return grid_; }
  double grid_step() const { return grid_.step; }

 private:
  double a_ = 1.0;
  double b_ = 2.0;
  int dim_ = 1;
  std::function<double(double)> profile_;  // of |p|
  UniformGrid grid_;
  VectorXd samples_;

  void resample();
};

/// Builds the standard smooth-step damper. Throws std::invalid_argument for
/// a >= b and when the grid resolves the transition band with < 16 points.
Damper build_damper(double a, double b, int dim, const GridSpec& grid = {});

}  // namespace eqft
