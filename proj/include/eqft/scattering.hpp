#pragma once

#include "eqft/fock.hpp"

namespace eqft {

/// Free and interacting Hamiltonians on a common basis plus the time grid for
/// the iterated Dyson integrals.
struct ScatteringSetup {
  ModeSet modes;
  std::shared_ptr<const FockBasis> basis;
  FockOperator H0;     // canonical free Hamiltonian
  FockOperator Hfull;  // H0 + interaction at time tau
  SpatialGrid grid;
  Damper chihat;
  Damper rhohat;
  double eps = 1.0;
  double g = 0.1;
  int power_N = 3;
  double tau = 0.0;
  double t_max = 1.0;
  int steps = 257;  // time-grid points including both ends

  VectorXd times() const;
};

ScatteringSetup make_scattering_setup(const ModeSet& modes, int n_max, const Damper& chihat,
                                      const Damper& rhohat, double eps, double g, int power_N,
                                      double tau, double t_max, int steps = 257);

/// S_tau(t) = exp(i(t-tau)H0) exp(-i(t-tau)H), unitary to 1e-11.
Eigen::MatrixXcd s_exact(const ScatteringSetup& setup, double t);

/// Interaction Hamiltonian in the evolved frame,
///   H_I(t) = e^{i(t-tau)H0} (H - H0) e^{-i(t-tau)H0},
/// cross-checked against the phi_I-power construction (g/(N+1)) sum v chihat
/// phi_I^{N+1}; a mismatch beyond 1e-8 throws AccuracyError.
Eigen::MatrixXcd interaction_hamiltonian(const ScatteringSetup& setup, double t,
                                         bool cross_check = false);

/// Dyson iterates on the time grid: S_[0] = 1 and
///   S_[n](t) = -i int_tau^t du H_It(u) S_[n-1](u),   H_It = H_I / g.
/// table[n][i] holds S_[n](times[i]). A half-grid Richardson check guards the
/// accumulation (relative disagreement > 1e-6 throws AccuracyError).
using DysonTable = std::vector<std::vector<Eigen::MatrixXcd>>;
DysonTable dyson_terms(const ScatteringSetup& setup, int max_order);

/// Partial sum sum_{k<=n} g^k S_[k](t_i).
Eigen::MatrixXcd dyson_partial_sum(const ScatteringSetup& setup, const DysonTable& table,
                                   int order, int time_index);

/// <Psi || S Phi> with S exact (order < 0) or the order-n partial sum, plus
/// the transition probability |amplitude|^2.
struct TransitionResult {
  Complex amplitude;
  double probability;
};
TransitionResult transition_amplitude(const ScatteringSetup& setup, const FockVector& psi,
                                      const FockVector& phi, double t, int order = -1,
                                      const DysonTable* table = nullptr);

/// Recomputes S with H0 -> H0 + c and H -> H + c; returns the max-norm
/// difference from the unshifted operator (zero up to roundoff: the constant
/// cancels between the exponentials).
double zero_point_shift_check(const ScatteringSetup& setup, double c, double t);

/// max_u ||H_I(u)/g||_2 over the time grid (the normalization entering the
/// remainder bounds).
double interaction_norm_bound(const ScatteringSetup& setup);

}  // namespace eqft
