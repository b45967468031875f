#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <vector>

#include "eqft/mollifier.hpp"

namespace eqft {

/// One discrete momentum mode: momentum, on-shell energy, quadrature weight.
struct Mode {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double E = 1.0;
  double w = 1.0;
};

/// Finite symmetric set of momentum modes discretizing the d^dp integrals.
struct ModeSet {
  std::vector<Mode> modes;
  double mass = 1.0;
  int dim = 1;

  int size() const { return static_cast<int>(modes.size()); }
  /// closed under p -> -p with matching weights
  bool symmetric(double tol = 1e-12) const;
};

/// Uniform midpoint modes on [-pmax, pmax] (K odd keeps the zero mode).
ModeSet uniform_modes(int K, double pmax, double mass);

/// Gauss-Legendre modes on [-pmax, pmax], symmetrized exactly.
ModeSet gauss_modes(int K, double pmax, double mass);

/// Gauss modes for the weight |rhohat(eps p)|^2 on the damper support; these
/// make mode sums of |rhohat|^2-weighted smooth integrands near-exact.
ModeSet weighted_modes(int K, const Damper& rhohat, double eps, double mass);

/// Coarse cartesian product grid in d = 3 (per_axis^3 modes).
ModeSet cartesian_modes_3d(int per_axis, double pmax, double mass);

/// Occupation-number basis with total particle number <= n_max, enumerated in
/// graded lexicographic order (grade = total occupation; within a grade the
/// occupation tuples ascend lexicographically, first mode most significant).
class FockBasis {
 public:
  static std::shared_ptr<const FockBasis> make(int num_modes, int n_max);

  int num_modes() const { return K_; }
  int n_max() const { return n_max_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }
  const std::vector<int>& occupation(Eigen::Index i) const { return states_[i]; }
  int grade(Eigen::Index i) const { return grades_[i]; }
  Eigen::Index index_of(const std::vector<int>& occ) const;

 private:
  int K_ = 0;
  int n_max_ = 0;
  std::vector<std::vector<int>> states_;
  std::vector<int> grades_;
  std::map<std::vector<int>, Eigen::Index> lookup_;
};

using SparseCd = Eigen::SparseMatrix<Complex>;

/// Sparse operator on the occupation basis with its particle-number band and
/// a Hermiticity flag (asserted within 1e-12 when set).
struct FockOperator {
  std::shared_ptr<const FockBasis> basis;
  SparseCd mat;
  int band = 0;
  bool hermitian = false;

  FockOperator() = default;
  FockOperator(std::shared_ptr<const FockBasis> b, SparseCd m, int band_, bool herm);

  Eigen::Index dim() const { return mat.rows(); }
  double hermiticity_defect() const;
  FockOperator adjoint() const;
  /// Entries restricted to rows/columns of grade <= max_grade.
  Eigen::MatrixXcd dense_block(int max_grade) const;
};

FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a, const FockOperator& b);
FockOperator operator*(const FockOperator& a, const FockOperator& b);
FockOperator operator*(Complex scale, const FockOperator& a);

/// Complex amplitudes over the occupation basis.
struct FockVector {
  std::shared_ptr<const FockBasis> basis;
  VectorXcd amps;

  static FockVector vacuum(std::shared_ptr<const FockBasis> basis);
  static FockVector basis_state(std::shared_ptr<const FockBasis> basis,
                                const std::vector<int>& occ);
  double norm() const { return amps.norm(); }
  FockVector normalized() const;
};

inline Complex inner(const FockVector& a, const FockVector& b) {
  return a.amps.dot(b.amps);  // Eigen dot conjugates the left argument
}
FockVector apply(const FockOperator& op, const FockVector& v);

enum class LadderSign { Create, Annihilate };

/// Bosonic ladder operator on orthonormal discrete modes: matrix elements
/// sqrt(n_k + 1) / sqrt(n_k), band 1, a- the adjoint of a+.
FockOperator ladder(std::shared_ptr<const FockBasis> basis, int k, LadderSign sign);

/// identity and scalar multiples of it
FockOperator identity_op(std::shared_ptr<const FockBasis> basis);

enum class FieldKind { Phi, Pi, GradPhi };

/// Damped free-field operator at the point (t, x):
///   phi0 = sum_k sqrt(w_k) [rhohat(eps p_k) psi_k*(t,x) a+_k + c.c. a-_k],
/// psi_k(t,x) = exp(i(p_k.x - E_k t)) / sqrt((2pi)^d 2 E_k); Pi inserts
/// (+/- i E_k), GradPhi inserts (-/+ i p_k[axis]).
FockOperator field_operator(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                            const Damper& rhohat, double eps, const Eigen::Vector3d& x, double t,
                            FieldKind kind, int axis = 0);

/// Mode-wise analytic Laplacian of phi0 (multiplication by -|p_k|^2).
FockOperator laplacian_phi(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                           const Damper& rhohat, double eps, const Eigen::Vector3d& x, double t);

/// AB - BA. The result is flagged truncation-contaminated whenever the bands
/// can push states over the cap; identities then hold on the safe subspace
/// of grade <= n_max - band(A) - band(B).
struct CommutatorResult {
  FockOperator op;
  bool contaminated = false;
  int safe_grade = 0;
};
CommutatorResult commutator(const FockOperator& a, const FockOperator& b);

/// Canonical free Hamiltonian: diagonal sum_k E_k a+_k a-_k (zero-point
/// energy omitted).
FockOperator build_H0_canonical(const ModeSet& modes, std::shared_ptr<const FockBasis> basis);

/// The four damped Hamiltonian blocks with explicit chi momentum kernels and
/// the discrete zero-point scalar from normal-ordering H-+.
struct HamiltonianBlocks {
  FockOperator Hpp;  // a+ a+
  FockOperator Hmm;  // a- a-
  FockOperator Hpm;  // a+ a-
  FockOperator Hmp;  // a- a+
  double zero_point = 0.0;

  FockOperator sum() const { return Hpp + Hmm + Hpm + Hmp; }
};
HamiltonianBlocks build_H0_blocks(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                                  const Damper& rhohat, const SampledMollifier& chi, double eps,
                                  double t = 0.0, double t_xi = 0.0);

/// Spatial quadrature grid for the damped d^dx integrals.
struct SpatialGrid {
  VectorXd x;
  VectorXd v;  // weights
};
SpatialGrid spatial_grid(double half_width, int points);

/// Full interacting Hamiltonian
///   H = H0(canonical) + g/(N+1) sum_j v_j chihat(eps x_j) phi0(tau, x_j)^{N+1}.
/// Throws ConstructionError when the assembled matrix misses Hermiticity by
/// more than 1e-10 (signals an asymmetric grid).
FockOperator build_H_full(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                          const SpatialGrid& grid, const Damper& chihat, const Damper& rhohat,
                          double eps, double g, int power_N, double tau);

/// exp(i theta H) for Hermitian H via eigendecomposition; the unitarity
/// defect is checked against 1e-11.
Eigen::MatrixXcd unitary_exp(const FockOperator& H, double theta);

/// Heisenberg conjugation A -> e^{i dt H} A e^{-i dt H}.
FockOperator heisenberg_evolve(const FockOperator& A, const FockOperator& H, double dt);

/// Smeared interacting-field-equation residual
///   || sum_j v_j Xi(x_j) { i[H, pi(x_j)] - lap phi(x_j) + m^2 phi(x_j)
///                          + g phi(x_j)^N } ||
/// as a spectral norm on the safe subspace. Evaluated in the tau frame
/// (conjugation by the evolution is unitary and drops out of the norm).
struct FieldEquationResidual {
  double value = 0.0;
  bool contaminated = false;
  int safe_grade = 0;
};
FieldEquationResidual field_equation_residual(const ModeSet& modes,
                                              std::shared_ptr<const FockBasis> basis,
                                              const SpatialGrid& grid, const Damper& chihat,
                                              const Damper& rhohat, double eps, double g,
                                              int power_N,
                                              const std::function<double(double)>& smearing,
                                              double tau = 0.0);

}  // namespace eqft
