#include "eqft/scattering.hpp"

namespace eqft {

VectorXd ScatteringSetup::times() const {
  VectorXd t(steps);
  const double h = (t_max - tau) / (steps - 1);
  for (int i = 0; i < steps; ++i) t(i) = tau + i * h;
  return t;
}

ScatteringSetup make_scattering_setup(const ModeSet& modes, int n_max, const Damper& chihat,
                                      const Damper& rhohat, double eps, double g, int power_N,
                                      double tau, double t_max, int steps) {
  if (steps < 65 || steps % 2 == 0)
    throw std::invalid_argument("make_scattering_setup: steps must be odd and >= 65");
  ScatteringSetup setup;
  setup.modes = modes;
  setup.basis = FockBasis::make(modes.size(), n_max);
  setup.grid = spatial_grid(chihat.support_radius() / eps * 1.05,
                            std::max<int>(96, static_cast<int>(64 / eps)));
  setup.chihat = chihat;
  setup.rhohat = rhohat;
  setup.eps = eps;
  setup.g = g;
  setup.power_N = power_N;
  setup.tau = tau;
  setup.t_max = t_max;
  setup.steps = steps;
  setup.H0 = build_H0_canonical(modes, setup.basis);
  setup.Hfull =
      build_H_full(modes, setup.basis, setup.grid, chihat, rhohat, eps, g, power_N, tau);
  return setup;
}

Eigen::MatrixXcd s_exact(const ScatteringSetup& setup, double t) {
  const double dt = t - setup.tau;
  return unitary_exp(setup.H0, dt) * unitary_exp(setup.Hfull, -dt);
}

Eigen::MatrixXcd interaction_hamiltonian(const ScatteringSetup& setup, double t,
                                         bool cross_check) {
  const double dt = t - setup.tau;
  // H0 is diagonal, so the conjugation is an exact phase scaling
  const Eigen::MatrixXcd diff = (setup.Hfull.mat - setup.H0.mat).toDense();
  const Eigen::Index n = diff.rows();
  VectorXd energies(n);
  for (Eigen::Index i = 0; i < n; ++i) energies(i) = setup.H0.mat.coeff(i, i).real();
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      out(a, b) = std::exp(Complex(0.0, dt * (energies(a) - energies(b)))) * diff(a, b);

  if (cross_check) {
    // phi_I(t) power construction: the free field at time t
    SparseCd inter(n, n);
    for (Eigen::Index j = 0; j < setup.grid.x.size(); ++j) {
      const double cut = setup.chihat(setup.eps * setup.grid.x(j));
      if (cut == 0.0) continue;
      const FockOperator phi =
          field_operator(setup.modes, setup.basis, setup.rhohat, setup.eps,
                         Eigen::Vector3d(setup.grid.x(j), 0.0, 0.0), t, FieldKind::Phi);
      SparseCd power = phi.mat;
      for (int k = 1; k < setup.power_N + 1; ++k) power = SparseCd(power * phi.mat);
      inter += setup.grid.v(j) * cut * power;
    }
    const Eigen::MatrixXcd alt = (setup.g / (setup.power_N + 1.0)) * inter.toDense();
    const double mismatch = (alt - out).cwiseAbs().maxCoeff();
    if (mismatch > 1e-8)
      throw AccuracyError("interaction_hamiltonian: conjugated and phi_I-power forms disagree",
                          mismatch);
  }
  return out;
}

namespace {

// cumulative integral of matrix samples on a uniform grid, 4th order:
// even indices close Simpson pairs, odd indices use the 3-point half rule
std::vector<Eigen::MatrixXcd> cumulative_integral(const std::vector<Eigen::MatrixXcd>& f,
                                                  double h) {
  std::vector<Eigen::MatrixXcd> out(f.size());
  out[0] = Eigen::MatrixXcd::Zero(f[0].rows(), f[0].cols());
  for (size_t j = 1; j < f.size(); ++j) {
    if (j % 2 == 0) {
      out[j] = out[j - 2] + (h / 3.0) * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    } else if (j >= 2) {
      out[j] = out[j - 1] + (h / 12.0) * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
    } else {
      // first interval: trapezoid refined by the midpoint of the next sample
      out[j] = out[j - 1] + (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    }
  }
  return out;
}

DysonTable dyson_on_grid(const ScatteringSetup& setup, int max_order, int stride) {
  const VectorXd t = setup.times();
  const int n_pts = (setup.steps - 1) / stride + 1;
  const double h = (setup.t_max - setup.tau) / (n_pts - 1);
  std::vector<Eigen::MatrixXcd> h_it(n_pts);
  for (int i = 0; i < n_pts; ++i)
    h_it[i] = interaction_hamiltonian(setup, t(i * stride)) / setup.g;

  const Eigen::Index dim = setup.basis->size();
  DysonTable table(max_order + 1);
  table[0].assign(n_pts, Eigen::MatrixXcd::Identity(dim, dim));
  for (int order = 1; order <= max_order; ++order) {
    std::vector<Eigen::MatrixXcd> integrand(n_pts);
    for (int i = 0; i < n_pts; ++i)
      integrand[i] = Complex(0.0, -1.0) * h_it[i] * table[order - 1][i];
    table[order] = cumulative_integral(integrand, h);
  }
  return table;
}

}  // namespace

DysonTable dyson_terms(const ScatteringSetup& setup, int max_order) {
  if (max_order < 0 || max_order > 6)
    throw std::invalid_argument("dyson_terms: order must be in [0, 6]");
  DysonTable full = dyson_on_grid(setup, max_order, 1);
  if (max_order >= 1) {
    DysonTable half = dyson_on_grid(setup, max_order, 2);
    const Eigen::MatrixXcd& a = full[max_order].back();
    const Eigen::MatrixXcd& b = half[max_order].back();
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-12);
    const double disagreement = (a - b).cwiseAbs().maxCoeff() / scale;
    if (disagreement > 1e-6)
      throw AccuracyError("dyson_terms: time grid too coarse", disagreement);
  }
  return full;
}

Eigen::MatrixXcd dyson_partial_sum(const ScatteringSetup& setup, const DysonTable& table,
                                   int order, int time_index) {
  Eigen::MatrixXcd acc = table[0][time_index];
  double gk = 1.0;
  for (int k = 1; k <= order; ++k) {
    gk *= setup.g;
    acc += gk * table[k][time_index];
  }
  return acc;
}

TransitionResult transition_amplitude(const ScatteringSetup& setup, const FockVector& psi,
                                      const FockVector& phi, double t, int order,
                                      const DysonTable* table) {
  Eigen::MatrixXcd S;
  if (order < 0) {
    S = s_exact(setup, t);
  } else {
    DysonTable local;
    if (!table) {
      local = dyson_terms(setup, order);
      table = &local;
    }
    const VectorXd times = setup.times();
    int idx = -1;
    for (int i = 0; i < times.size(); ++i)
      if (std::abs(times(i) - t) < 1e-12) idx = i;
    if (idx < 0)
      throw std::invalid_argument("transition_amplitude: t must lie on the time grid");
    S = dyson_partial_sum(setup, *table, order, idx);
  }
  TransitionResult out;
  out.amplitude = psi.amps.dot(S * phi.amps);
  out.probability = std::norm(out.amplitude);
  return out;
}

double zero_point_shift_check(const ScatteringSetup& setup, double c, double t) {
  const Eigen::MatrixXcd base = s_exact(setup, t);
  const double dt = t - setup.tau;
  FockOperator H0c = setup.H0 + Complex(c, 0.0) * identity_op(setup.basis);
  FockOperator Hc = setup.Hfull + Complex(c, 0.0) * identity_op(setup.basis);
  H0c.hermitian = true;
  Hc.hermitian = true;
  const Eigen::MatrixXcd shifted = unitary_exp(H0c, dt) * unitary_exp(Hc, -dt);
  return (shifted - base).cwiseAbs().maxCoeff();
}

double interaction_norm_bound(const ScatteringSetup& setup) {
  // ||H_I(u)||_2 is u-independent (unitary conjugation); use u = tau
  const Eigen::MatrixXcd h_it = interaction_hamiltonian(setup, setup.tau) / setup.g;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h_it);
  return svd.singularValues()(0);
}

}  // namespace eqft
