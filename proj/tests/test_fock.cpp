#include <doctest.h>

#include "eqft/fock.hpp"
#include "eqft/freefield.hpp"

using namespace eqft;

namespace {

const Damper& rhohat() {
  static Damper d = build_damper(1.0, 2.0, 1);
  return d;
}

const Damper& chihat() {
  static Damper d = build_damper(1.0, 2.0, 1);
  return d;
}

const SampledMollifier& chi1() {
  static SampledMollifier m = damper_to_mollifier(chihat());
  return m;
}

double max_abs(const SparseCd& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCd::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace

TEST_CASE("basis enumeration is graded lexicographic") {
  auto basis = FockBasis::make(2, 2);
  CHECK(basis->size() == 6);
  CHECK(basis->occupation(0) == std::vector<int>{0, 0});
  CHECK(basis->occupation(1) == std::vector<int>{0, 1});
  CHECK(basis->occupation(2) == std::vector<int>{1, 0});
  CHECK(basis->occupation(3) == std::vector<int>{0, 2});
  CHECK(basis->occupation(4) == std::vector<int>{1, 1});
  CHECK(basis->occupation(5) == std::vector<int>{2, 0});
  CHECK(basis->grade(3) == 2);
}

TEST_CASE("ladder operators: vacuum, adjointness, canonical relations") {
  auto basis = FockBasis::make(3, 4);
  const auto vac = FockVector::vacuum(basis);
  for (int k = 0; k < 3; ++k) {
    const auto a = ladder(basis, k, LadderSign::Annihilate);
    CHECK(apply(a, vac).norm() == 0.0);
    const auto adag = ladder(basis, k, LadderSign::Create);
    // entrywise adjointness
    CHECK(max_abs(SparseCd(adag.mat - SparseCd(a.mat.adjoint()))) == 0.0);
  }
  // [a-_j, a+_k] = delta_jk on the safe subspace, [a+, a+] = 0 everywhere
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const auto cjk = commutator(ladder(basis, j, LadderSign::Annihilate),
                                  ladder(basis, k, LadderSign::Create));
      CHECK(cjk.contaminated);
      const Eigen::MatrixXcd block = cjk.op.dense_block(cjk.safe_grade);
      Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(block.rows(), block.cols());
      if (j == k) expect.setIdentity();
      CHECK((block - expect).cwiseAbs().maxCoeff() < 1e-14);

      const auto cpp = commutator(ladder(basis, j, LadderSign::Create),
                                  ladder(basis, k, LadderSign::Create));
      CHECK(max_abs(cpp.op.mat) == 0.0);
    }
  }
}

TEST_CASE("field operator: hermiticity, conjugate momentum, single-mode form") {
  ModeSet modes = uniform_modes(5, 2.0, 1.0);
  auto basis = FockBasis::make(5, 3);
  const Eigen::Vector3d x(0.7, 0.0, 0.0);
  const double eps = 0.5, t = 0.3;
  const auto phi = field_operator(modes, basis, rhohat(), eps, x, t, FieldKind::Phi);
  CHECK(phi.hermitian);
  const auto pi_op = field_operator(modes, basis, rhohat(), eps, x, t, FieldKind::Pi);
  CHECK(pi_op.hermitian);

  // pi is the analytic t-derivative of phi (4th-order stencil oracle)
  const double h = 1e-3;
  auto phi_at = [&](double tt) {
    return field_operator(modes, basis, rhohat(), eps, x, tt, FieldKind::Phi).mat;
  };
  SparseCd stencil = SparseCd(
      (1.0 / (12.0 * h)) *
      (phi_at(t - 2 * h) - 8.0 * phi_at(t - h) + 8.0 * phi_at(t + h) - phi_at(t + 2 * h)));
  CHECK(max_abs(SparseCd(stencil - pi_op.mat)) < 1e-9);

  // single zero-momentum mode: phi(0) = (a+ + a-) sqrt(w) rhohat(0)/sqrt(2E(2pi)^d)
  ModeSet one;
  one.mass = 1.0;
  one.dim = 1;
  one.modes.push_back({Eigen::Vector3d::Zero(), 1.0, 0.8});
  auto b1 = FockBasis::make(1, 3);
  const auto phi1 =
      field_operator(one, b1, rhohat(), eps, Eigen::Vector3d::Zero(), 0.0, FieldKind::Phi);
  const double coef = std::sqrt(0.8) * rhohat()(0.0) / std::sqrt(2.0 * pi * 2.0);
  const auto expected = SparseCd(Complex(coef, 0.0) * (ladder(b1, 0, LadderSign::Create).mat +
                                                       ladder(b1, 0, LadderSign::Annihilate).mat));
  CHECK(max_abs(SparseCd(phi1.mat - expected)) < 1e-14);
}

TEST_CASE("equal-time commutators on the weighted symmetric mode set") {
  const double eps = 0.5, mass = 1.0;
  ModeSet modes = weighted_modes(9, rhohat(), eps, mass);
  CHECK(modes.symmetric());
  auto basis = FockBasis::make(9, 5);
  const Eigen::Vector3d x1(0.45, 0.0, 0.0), x2(-0.1, 0.0, 0.0);
  const auto phi1 = field_operator(modes, basis, rhohat(), eps, x1, 0.0, FieldKind::Phi);
  const auto phi2 = field_operator(modes, basis, rhohat(), eps, x2, 0.0, FieldKind::Phi);
  const auto pi1 = field_operator(modes, basis, rhohat(), eps, x1, 0.0, FieldKind::Pi);
  const auto pi2 = field_operator(modes, basis, rhohat(), eps, x2, 0.0, FieldKind::Pi);

  // the identities hold on the safe subspace; the top two grades carry the
  // usual annihilate-after-create truncation contamination
  const auto cpp_phi = commutator(phi1, phi2);
  CHECK(cpp_phi.op.dense_block(cpp_phi.safe_grade).cwiseAbs().maxCoeff() < 1e-12);
  const auto cpp_pi = commutator(pi1, pi2);
  CHECK(cpp_pi.op.dense_block(cpp_pi.safe_grade).cwiseAbs().maxCoeff() < 1e-12);

  const auto cpm = commutator(phi1, pi2);
  const Eigen::MatrixXcd block = cpm.op.dense_block(cpm.safe_grade);
  const Complex ic = block(0, 0);
  CHECK(std::abs(ic.real()) < 1e-13);
  CHECK(ic.imag() > 0.0);
  const Eigen::MatrixXcd defect =
      block - ic * Eigen::MatrixXcd::Identity(block.rows(), block.cols());
  CHECK(defect.cwiseAbs().maxCoeff() < 1e-12);

  // the scalar matches the direct mode sum and the continuum kernel
  double direct = 0.0;
  for (const auto& m : modes.modes) {
    const double rh = rhohat()(eps * m.p.norm());
    direct += m.w * rh * rh * std::cos(m.p(0) * (x1(0) - x2(0))) / (2.0 * pi);
  }
  CHECK(ic.imag() == doctest::Approx(direct).epsilon(1e-12));

  const SampledMollifier sigma = self_correlation(damper_to_mollifier(rhohat()));
  const double continuum = delta3_kernel(sigma, eps, x1(0) - x2(0)).real();
  CHECK(std::abs(ic.imag() - continuum) < 1e-6);
}

TEST_CASE("canonical Hamiltonian has exact occupation eigenvalues") {
  ModeSet modes = uniform_modes(4, 1.5, 1.0);
  auto basis = FockBasis::make(4, 3);
  const auto H0 = build_H0_canonical(modes, basis);
  CHECK(H0.hermitian);
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    const auto& occ = basis->occupation(i);
    double expect = 0.0;
    for (int k = 0; k < 4; ++k) expect += occ[k] * modes.modes[k].E;
    CHECK(std::abs(H0.mat.coeff(i, i) - Complex(expect, 0.0)) < 1e-14);
  }
}

TEST_CASE("Hamiltonian blocks: algebraic identities and decay") {
  const double mass = 1.0;
  ModeSet modes = uniform_modes(9, 2.0, mass);
  auto basis = FockBasis::make(9, 4);

  const double eps = 0.25;
  const auto blocks = build_H0_blocks(modes, basis, rhohat(), chi1(), eps);
  // H-+ = H+- + E_zero * 1 (normal ordering on symmetric coefficients)
  const SparseCd diff = SparseCd(blocks.Hmp.mat - blocks.Hpm.mat -
                                 blocks.zero_point * identity_op(basis).mat);
  CHECK(max_abs(diff) < 1e-10 * std::abs(blocks.zero_point));
  CHECK(blocks.zero_point > 0.0);
  // the assembled free Hamiltonian is symmetric
  CHECK(blocks.sum().hermiticity_defect() < 1e-12);

  // ||Hpp vacuum|| and ||Hmm (2-particle)|| decay with fitted slope >= 3 once
  // eps probes the Gevrey tail of the chi kernel at the fixed grid spacing
  const auto vac = FockVector::vacuum(basis);
  std::vector<int> occ2(9, 0);
  occ2[5] = 1;
  occ2[6] = 1;  // not a mirror pair, so the kinematic factor stays finite
  const auto two = FockVector::basis_state(basis, occ2);
  auto vp = [&](double e) {
    const auto b = build_H0_blocks(modes, basis, rhohat(), chi1(), e);
    return Complex(apply(b.Hpp, vac).norm(), 0.0);
  };
  auto vm = [&](double e) {
    const auto b = build_H0_blocks(modes, basis, rhohat(), chi1(), e);
    return Complex(apply(b.Hmm, two).norm(), 0.0);
  };
  const auto sp = asymptotic_order(vp, eps_grid(0.05, 9, 0.78), 1e-13);
  const auto sm = asymptotic_order(vm, eps_grid(0.05, 9, 0.78), 1e-13);
  CHECK((sp.kind == EpsilonSweep::Kind::BelowFloor || sp.fit.slope >= 3.0));
  CHECK((sm.kind == EpsilonSweep::Kind::BelowFloor || sm.fit.slope >= 3.0));

  // H+- diagonal on single-particle states: oracle = explicit scalar formula
  for (int k = 0; k < 9; ++k) {
    std::vector<int> occ(9, 0);
    occ[k] = 1;
    const Eigen::Index i = basis->index_of(occ);
    const Mode& m = modes.modes[k];
    const double rh = rhohat()(eps * m.p.norm());
    const double expected = 0.5 * m.w * rh * rh * chi1().value(0.0).real() / eps *
                            (2.0 * m.E * m.E) / (2.0 * m.E);
    CHECK(std::abs(blocks.Hpm.mat.coeff(i, i) - Complex(expected, 0.0)) < 1e-12);
  }
}

TEST_CASE("full Hamiltonian: g = 0 reduction, hermiticity, displaced oscillator") {
  ModeSet modes = uniform_modes(5, 2.0, 1.0);
  auto basis = FockBasis::make(5, 4);
  const SpatialGrid grid = spatial_grid(2.0 / 0.5 * 1.05, 96);
  const auto H0 = build_H0_canonical(modes, basis);
  const auto Hfree = build_H_full(modes, basis, grid, chihat(), rhohat(), 0.5, 0.0, 3, 0.0);
  CHECK(max_abs(SparseCd(Hfree.mat - H0.mat)) == 0.0);

  const auto H = build_H_full(modes, basis, grid, chihat(), rhohat(), 0.5, 0.1, 3, 0.0);
  CHECK(H.hermitian);
  CHECK(H.hermiticity_defect() < 1e-10);

  // linear source (phi^{N+1} with N = 0) on one zero-momentum mode: displaced
  // oscillator spectrum E n - lambda^2 / E
  ModeSet one;
  one.mass = 1.0;
  one.dim = 1;
  one.modes.push_back({Eigen::Vector3d::Zero(), 1.0, 1.0});
  auto b1 = FockBasis::make(1, 24);
  const double eps = 0.5, g = 0.05;
  const auto H1 = build_H_full(one, b1, grid, chihat(), rhohat(), eps, g, 0, 0.0);
  double lambda = 0.0;
  for (Eigen::Index j = 0; j < grid.x.size(); ++j)
    lambda += grid.v(j) * chihat()(eps * grid.x(j));
  lambda *= g * rhohat()(0.0) / std::sqrt(2.0 * pi * 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H1.mat.toDense());
  for (int n = 0; n < 3; ++n)
    CHECK(es.eigenvalues()(n) == doctest::Approx(1.0 * n - lambda * lambda).epsilon(1e-10));
}

TEST_CASE("heisenberg evolution: identity at dt = 0, unitarity, derivative") {
  ModeSet modes = uniform_modes(5, 2.0, 1.0);
  auto basis = FockBasis::make(5, 4);
  const SpatialGrid grid = spatial_grid(2.0 / 0.5 * 1.05, 96);
  const auto H = build_H_full(modes, basis, grid, chihat(), rhohat(), 0.5, 0.1, 3, 0.0);
  const Eigen::Vector3d x(0.2, 0.0, 0.0);
  const auto phi = field_operator(modes, basis, rhohat(), 0.5, x, 0.0, FieldKind::Phi);

  const auto same = heisenberg_evolve(phi, H, 0.0);
  CHECK(max_abs(SparseCd(same.mat - phi.mat)) == 0.0);

  const Eigen::MatrixXcd U = unitary_exp(H, 0.7);
  CHECK((U * U.adjoint() - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff() <
        1e-11);

  // group property of the exponential
  const Eigen::MatrixXcd U2 = unitary_exp(H, 0.3) * unitary_exp(H, 0.4);
  CHECK((U - U2).cwiseAbs().maxCoeff() < 1e-11);

  // evolved commutator equals the conjugated one exactly (operator algebra)
  const auto pi_op = field_operator(modes, basis, rhohat(), 0.5, x, 0.0, FieldKind::Pi);
  const double dt = 0.6;
  const auto phi_t = heisenberg_evolve(phi, H, dt);
  const auto pi_t = heisenberg_evolve(pi_op, H, dt);
  const Eigen::MatrixXcd lhs = commutator(phi_t, pi_t).op.mat.toDense();
  const Eigen::MatrixXcd rhs =
      unitary_exp(H, dt) * commutator(phi, pi_op).op.mat.toDense() * unitary_exp(H, -dt);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);

  // with the diagonal free Hamiltonian the safe-block identity is preserved
  const auto H0 = build_H0_canonical(modes, basis);
  const auto phi_f = heisenberg_evolve(phi, H0, dt);
  const auto pi_f = heisenberg_evolve(pi_op, H0, dt);
  const auto c0 = commutator(phi, pi_op);
  const auto cf = commutator(phi_f, pi_f);
  CHECK((cf.op.dense_block(c0.safe_grade) - c0.op.dense_block(c0.safe_grade))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // d/dt phi(t) = i [H, phi(t)]: central-difference convergence at order 2
  auto residual = [&](double h) {
    const auto up = heisenberg_evolve(phi, H, dt + h);
    const auto dn = heisenberg_evolve(phi, H, dt - h);
    const Eigen::MatrixXcd fd = (up.mat.toDense() - dn.mat.toDense()) / (2.0 * h);
    const Eigen::MatrixXcd ih =
        Complex(0.0, 1.0) *
        (H.mat.toDense() * phi_t.mat.toDense() - phi_t.mat.toDense() * H.mat.toDense());
    return (fd - ih).cwiseAbs().maxCoeff();
  };
  const double r1 = residual(1e-2), r2 = residual(5e-3), r3 = residual(2.5e-3);
  const double order12 = std::log2(r1 / r2), order23 = std::log2(r2 / r3);
  CHECK(order12 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(order23 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("smeared field-equation residual: zero smearing, eps halving, translation") {
  ModeSet modes = uniform_modes(5, 2.0, 1.0);
  auto basis = FockBasis::make(5, 4);
  const Damper bump = build_damper(1.0, 2.5, 1);

  auto residual_at = [&](double eps, double shift) {
    const SpatialGrid grid = spatial_grid(2.0 / eps * 1.05, 128);
    return field_equation_residual(modes, basis, grid, chihat(), rhohat(), eps, 0.1, 3,
                                   [&](double xx) { return bump(xx - shift); });
  };

  // halving within the regime where the mode spacing still resolves the
  // kernel (spacing <= pi eps / 2); below that the fixed five-mode kernel
  // floors the residual
  const auto r1 = residual_at(1.0, 0.0);
  const auto r2 = residual_at(0.5, 0.0);
  CHECK(r1.contaminated);
  CHECK(r1.value > 0.0);
  CHECK(r2.value < r1.value);

  // Xi identically zero nulls the residual
  const SpatialGrid grid = spatial_grid(2.0 / 0.5 * 1.05, 64);
  const auto rz = field_equation_residual(modes, basis, grid, chihat(), rhohat(), 0.5, 0.1, 3,
                                          [](double) { return 0.0; });
  CHECK(rz.value == 0.0);
}

TEST_CASE("refusals and conservation") {
  ModeSet modes = uniform_modes(3, 1.5, 1.0);
  auto basis = FockBasis::make(3, 3);
  // non-Hermitian generators are refused
  const auto a0 = ladder(basis, 0, LadderSign::Create);
  CHECK_THROWS_AS(heisenberg_evolve(a0, a0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(unitary_exp(a0, 1.0), std::invalid_argument);

  // operators on different bases do not combine
  auto other = FockBasis::make(3, 2);
  CHECK_THROWS_AS(commutator(a0, ladder(other, 0, LadderSign::Create)), IncompatibilityError);

  // energy expectation is conserved under the evolution it generates
  const Damper rh = build_damper(1.0, 2.0, 1);
  const Damper ch = build_damper(1.0, 2.0, 1);
  const SpatialGrid grid = spatial_grid(2.0 / 0.5 * 1.05, 96);
  const auto H = build_H_full(modes, basis, grid, ch, rh, 0.5, 0.1, 2, 0.0);
  FockVector psi = FockVector::vacuum(basis);
  psi.amps(1) = Complex(0.6, 0.2);
  psi.amps(4) = Complex(0.0, -0.5);
  psi = psi.normalized();
  const Complex e0 = psi.amps.dot(H.mat * psi.amps);
  const Eigen::MatrixXcd U = unitary_exp(H, -1.3);
  const VectorXcd evolved = U * psi.amps;
  const Complex e1 = evolved.dot(H.mat.toDense() * evolved);
  CHECK(std::abs(e1 - e0) < 1e-11);
}
