#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eqft/mollifier.hpp"

namespace eqft {

/// One representative of an eps-parameterized generalized function: a
/// deterministic evaluator (eps, x) -> value plus metadata naming the object.
struct Representative {
  std::function<Complex(double eps, double x)> eval;
  double domain_half_width = 20.0;
  std::string label;
};

/// Ordered (eps, value) pairs with the fitted power law |value| ~ C eps^s.
struct EpsilonSweep {
  VectorXd eps;
  VectorXcd values;
  PowerLawFit fit;

  enum class Kind { Slope, BelowFloor } kind = Kind::Slope;
};

/// Log-spaced eps grid: start, start*ratio, ..., count points.
VectorXd eps_grid(double start = 0.2, int count = 8, double ratio = 0.5);

/// Built-in distributions accepted by embed_distribution.
enum class BuiltinDistribution { Delta, DeltaPrime, Heaviside, PlaneWave };

/// Embedding iota(gamma)_eps = gamma * rho_eps-vee for the built-ins (closed
/// forms in terms of rho) .
Representative embed_distribution(BuiltinDistribution kind, const SampledMollifier& rho,
                                  double wavenumber = 1.0);

/// Embedding of a continuous function sampler by quadrature over the
/// mollifier grid: x -> int f(x + eps z) rho(z) dz.
Representative embed_function(const std::function<Complex(double)>& f,
                              const SampledMollifier& rho, const std::string& label = "iota(f)");

/// Sifting integral int chihat(eps x) f(x) eps^{-dm} rho^m((x-a)/eps) dx
/// evaluated after the substitution x = a + eps z. A Richardson half-grid
/// check guards the quadrature; relative disagreement > 1e-8 throws
/// AccuracyError.
Complex sift_integral(const std::function<Complex(double)>& f, const SampledMollifier& rho,
                      int power, const Damper& chihat, double eps, double a);

/// Damper-tail pair: value = int chihat(eps x) f(x) dx and the companion
/// int f(x) dx for differencing.
struct TailIntegral {
  Complex damped;
  Complex plain;
};
TailIntegral damper_tail_integral(const std::function<Complex(double)>& f, const Damper& chihat,
                                  double eps, double half_width = 60.0, int points = 40001);

/// Fits |value(eps)| ~ C eps^s over the sweep; values wholly below the noise
/// floor are classified instead of fitted.
EpsilonSweep asymptotic_order(const std::function<Complex(double)>& value_of_eps,
                              const VectorXd& eps_list, double floor = 1e-13);

/// Association test: smears rep against a fixed witness set of compactly
/// supported bumps and reports the largest smeared magnitude at each eps.
struct AssociationReport {
  EpsilonSweep sweep;
  bool associated_to_zero = false;
};
AssociationReport associated_to_zero(const Representative& rep, const VectorXd& eps_list);

}  // namespace eqft
