#pragma once

#include <optional>

#include "eqft/genfunc.hpp"
#include "eqft/mollifier.hpp"

namespace eqft {

/// Mass, dimension, mollifier/damper choices for the continuum free field.
struct FieldParams {
  double mass = 1.0;
  int dim = 3;
  SampledMollifier rho;              // embedding mollifier, damper-backed
  Damper chihat;                     // scalar-product damper
  std::optional<Damper> chihat_x;    // optional second damper (chi_xi / chi_x split)

  const Damper& rhohat() const {
    if (!rho.source_damper())
      throw std::invalid_argument("FieldParams: rho must carry its damper");
    return *rho.source_damper();
  }
};

FieldParams make_field_params(double mass, int dim, double rho_a = 1.0, double rho_b = 2.0,
                              double chi_a = 1.0, double chi_b = 2.0);

/// Embedded two-point function Delta_eps(rhohat, t, r) by oscillation-aware
/// composite Simpson with a Richardson halving check. `t` is the time
/// difference t_xi - t_x; `r` the spatial separation.
Complex delta_eps(const FieldParams& params, double eps, double t, double r,
                  double rel_tol = 1e-9);

/// Same integral for an explicit damper (used for the equivalence checks and
/// the reduced forms carrying |rhohat|^2).
Complex delta_eps_kernel(const Damper& rhohat, double mass, int dim, double eps, double t,
                         double r, double rel_tol = 1e-9);

/// N(rhohat, eps) = sqrt((2pi)^-d int d^dp |rhohat(eps p)|^2 / (2 E_p)).
double norm_N(const FieldParams& params, double eps);

/// Delta_eps / N(rhohat, eps).
Complex normalized_delta(const FieldParams& params, double eps, double t, double r);

/// Closed-form embedded plane-wave inner products:
///   <psi_p1 || psi_p2>_G   = (E1+E2)/(2 sqrt(E1 E2)) e^{i(E1-E2)t_xi} eps^-d chi((p1-p2)/eps)
///   <psi_p1 || psi_p2*>_G  = (E1-E2)/(2 sqrt(E1 E2)) e^{i(E1+E2)t_xi} eps^-d chi((p1+p2)/eps)
Complex g_inner_plane_waves(const FieldParams& params, double eps, const Eigen::Vector3d& p1,
                            const Eigen::Vector3d& p2, double t_xi, bool conjugate_pair = false);

enum class GInnerKind { PsiDelta, DeltaDelta, DeltaDeltaStar };

/// Full-quadrature and reduced closed forms of the damped inner products with
/// Delta_eps, plus their difference. DeltaDelta / DeltaDeltaStar evaluate the
/// coincident-point case (x1 = x2, t1 = t2) by bipolar reduction.
struct GInnerResult {
  Complex full;
  Complex reduced;
  Complex difference;
};

struct GInnerArgs {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();  // PsiDelta momentum
  Eigen::Vector3d x = Eigen::Vector3d::Zero();  // PsiDelta position (vec part)
  double t_x = 0.0;
  double t_xi = 0.0;
};

GInnerResult g_inner_delta(const FieldParams& params, double eps, GInnerKind kind,
                           const GInnerArgs& args = {});

/// delta^d_eps(sigma, x1-x2) = eps^-d sigma((x2-x1)/eps) for sigma = rho-vee * rho.
Complex delta3_kernel(const SampledMollifier& sigma, double eps, double displacement);

/// Leading zero-point energy: the separable product
///   (1/(2 (2pi)^d)) int d^dx |chihat|^2(eps x) int d^dp E_p |rhohat|^2(eps p).
double zero_point_leading(const FieldParams& params, double eps);

/// Dimensional form with mollifier/damper length scales lambda_r, lambda_c.
double zero_point_dimensional(const FieldParams& params, double eps, double lambda_c,
                              double lambda_r, double hbar_c = 197e-9);

/// Full d = 1 double integral of the zero-point energy with the
/// (1/eps^{2d}) |chi|^2 kernel; optional smooth time averaging over delta_t
/// replaces the cosine by omega((E1-E2) dt)/omega(0).
struct TimeAveraging {
  Damper omega_hat;
  double delta_t = 1.0;
};
double zero_point_model_full(const FieldParams& params, double eps, double t_minus_txi = 0.0,
                             const std::optional<TimeAveraging>& averaging = std::nullopt);

/// Moment functional M[2,n] = int dz z^n chi_xi(z) chi_x*(z) of the damper
/// pair (chihat, chihat_x); with no second damper it reduces to |chi|^2
/// moments.
Complex chi_pair_moment(const FieldParams& params, int n);

}  // namespace eqft
