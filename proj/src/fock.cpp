#include "eqft/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <functional>

namespace eqft {

namespace {

double mode_energy(const Eigen::Vector3d& p, double m) {
  return std::sqrt(m * m + p.squaredNorm());
}

}  // namespace

bool ModeSet::symmetric(double tol) const {
  for (const auto& m : modes) {
    bool found = false;
    for (const auto& other : modes) {
      if ((other.p + m.p).norm() < tol && std::abs(other.w - m.w) < tol) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

ModeSet uniform_modes(int K, double pmax, double mass) {
  ModeSet set;
  set.mass = mass;
  set.dim = 1;
  const double dp = 2.0 * pmax / K;
  for (int k = 0; k < K; ++k) {
    Mode m;
    m.p = Eigen::Vector3d((k - (K - 1) * 0.5) * dp, 0.0, 0.0);
    m.E = mode_energy(m.p, mass);
    m.w = dp;
    set.modes.push_back(m);
  }
  return set;
}

namespace {

ModeSet from_rule_symmetrized(const GaussRule& rule, double mass) {
  ModeSet set;
  set.mass = mass;
  set.dim = 1;
  const int K = static_cast<int>(rule.nodes.size());
  // nodes ascend; pair them around the center and enforce exact +-p symmetry
  for (int k = 0; k < K; ++k) {
    const int mirror = K - 1 - k;
    Mode m;
    double p = 0.5 * (rule.nodes(k) - rule.nodes(mirror));
    if (k == mirror) p = 0.0;
    m.p = Eigen::Vector3d(p, 0.0, 0.0);
    m.E = mode_energy(m.p, mass);
    m.w = 0.5 * (rule.weights(k) + rule.weights(mirror));
    set.modes.push_back(m);
  }
  return set;
}

}  // namespace

ModeSet gauss_modes(int K, double pmax, double mass) {
  return from_rule_symmetrized(gauss_legendre(K, -pmax, pmax), mass);
}

ModeSet weighted_modes(int K, const Damper& rhohat, double eps, double mass) {
  const double pmax = rhohat.support_radius() / eps;
  auto weight = [&](double p) {
    const double v = rhohat(eps * p);
    return v * v;
  };
  ModeSet set = from_rule_symmetrized(gauss_weighted(K, -pmax, pmax, weight, 4000), mass);
  // fold the weight function back out: mode sums carry |rhohat(eps p_k)|^2
  // explicitly through the field coefficients
  for (auto& m : set.modes) {
    const double v = rhohat(eps * m.p(0));
    if (v * v < 1e-300) throw std::invalid_argument("weighted_modes: node escaped the support");
    m.w /= v * v;
  }
  return set;
}

ModeSet cartesian_modes_3d(int per_axis, double pmax, double mass) {
  ModeSet set;
  set.mass = mass;
  set.dim = 3;
  const double dp = 2.0 * pmax / per_axis;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j)
      for (int k = 0; k < per_axis; ++k) {
        Mode m;
        m.p = Eigen::Vector3d((i - (per_axis - 1) * 0.5) * dp, (j - (per_axis - 1) * 0.5) * dp,
                              (k - (per_axis - 1) * 0.5) * dp);
        m.E = mode_energy(m.p, mass);
        m.w = dp * dp * dp;
        set.modes.push_back(m);
      }
  return set;
}

std::shared_ptr<const FockBasis> FockBasis::make(int num_modes, int n_max) {
  auto basis = std::make_shared<FockBasis>();
  basis->K_ = num_modes;
  basis->n_max_ = n_max;
  // graded lexicographic: grade ascending, tuples ascending within a grade
  std::vector<int> occ(num_modes, 0);
  for (int grade = 0; grade <= n_max; ++grade) {
    std::function<void(int, int)> emit = [&](int slot, int remaining) {
      if (slot == num_modes - 1) {
        occ[slot] = remaining;
        basis->states_.push_back(occ);
        basis->grades_.push_back(grade);
        return;
      }
      for (int c = 0; c <= remaining; ++c) {
        occ[slot] = c;
        emit(slot + 1, remaining - c);
      }
    };
    emit(0, grade);
  }
  for (Eigen::Index i = 0; i < basis->size(); ++i) basis->lookup_[basis->states_[i]] = i;
  return basis;
}

Eigen::Index FockBasis::index_of(const std::vector<int>& occ) const {
  auto it = lookup_.find(occ);
  return (it == lookup_.end()) ? Eigen::Index(-1) : it->second;
}

FockOperator::FockOperator(std::shared_ptr<const FockBasis> b, SparseCd m, int band_, bool herm)
    : basis(std::move(b)), mat(std::move(m)), band(band_), hermitian(herm) {
  if (hermitian && hermiticity_defect() > 1e-12)
    throw std::invalid_argument("FockOperator: hermitian flag violated");
}

double FockOperator::hermiticity_defect() const {
  SparseCd diff = SparseCd(mat - SparseCd(mat.adjoint()));
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseCd::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

FockOperator FockOperator::adjoint() const {
  return FockOperator(basis, SparseCd(mat.adjoint()), band, hermitian);
}

Eigen::MatrixXcd FockOperator::dense_block(int max_grade) const {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < basis->size(); ++i)
    if (basis->grade(i) <= max_grade) keep.push_back(i);
  Eigen::MatrixXcd dense = mat.toDense();
  Eigen::MatrixXcd out(keep.size(), keep.size());
  for (size_t a = 0; a < keep.size(); ++a)
    for (size_t b = 0; b < keep.size(); ++b) out(a, b) = dense(keep[a], keep[b]);
  return out;
}

namespace {

void check_same_basis(const FockOperator& a, const FockOperator& b) {
  if (a.basis != b.basis) throw IncompatibilityError("FockOperator: basis mismatch");
}

}  // namespace

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  check_same_basis(a, b);
  return FockOperator(a.basis, SparseCd(a.mat + b.mat), std::max(a.band, b.band),
                      a.hermitian && b.hermitian);
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  check_same_basis(a, b);
  return FockOperator(a.basis, SparseCd(a.mat - b.mat), std::max(a.band, b.band), false);
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  check_same_basis(a, b);
  const int band = std::min(a.band + b.band, a.basis->n_max());
  return FockOperator(a.basis, SparseCd(a.mat * b.mat), band, false);
}

FockOperator operator*(Complex scale, const FockOperator& a) {
  return FockOperator(a.basis, SparseCd(scale * a.mat), a.band, false);
}

FockVector FockVector::vacuum(std::shared_ptr<const FockBasis> basis) {
  FockVector v;
  v.amps = VectorXcd::Zero(basis->size());
  v.amps(0) = 1.0;
  v.basis = std::move(basis);
  return v;
}

FockVector FockVector::basis_state(std::shared_ptr<const FockBasis> basis,
                                   const std::vector<int>& occ) {
  const Eigen::Index i = basis->index_of(occ);
  if (i < 0) throw std::invalid_argument("FockVector: occupation outside the basis");
  FockVector v;
  v.amps = VectorXcd::Zero(basis->size());
  v.amps(i) = 1.0;
  v.basis = std::move(basis);
  return v;
}

FockVector FockVector::normalized() const {
  FockVector v = *this;
  v.amps /= norm();
  return v;
}

FockVector apply(const FockOperator& op, const FockVector& v) {
  if (op.basis != v.basis) throw IncompatibilityError("apply: basis mismatch");
  FockVector out;
  out.basis = v.basis;
  out.amps = op.mat * v.amps;
  return out;
}

FockOperator ladder(std::shared_ptr<const FockBasis> basis, int k, LadderSign sign) {
  if (k < 0 || k >= basis->num_modes()) throw std::invalid_argument("ladder: mode out of range");
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    std::vector<int> occ = basis->occupation(i);
    if (sign == LadderSign::Create) {
      if (basis->grade(i) + 1 > basis->n_max()) continue;
      const double amp = std::sqrt(occ[k] + 1.0);
      occ[k] += 1;
      trips.emplace_back(basis->index_of(occ), i, Complex(amp, 0.0));
    } else {
      if (occ[k] == 0) continue;
      const double amp = std::sqrt(static_cast<double>(occ[k]));
      occ[k] -= 1;
      trips.emplace_back(basis->index_of(occ), i, Complex(amp, 0.0));
    }
  }
  SparseCd mat(basis->size(), basis->size());
  mat.setFromTriplets(trips.begin(), trips.end());
  return FockOperator(basis, std::move(mat), 1, false);
}

FockOperator identity_op(std::shared_ptr<const FockBasis> basis) {
  SparseCd mat(basis->size(), basis->size());
  mat.setIdentity();
  return FockOperator(basis, std::move(mat), 0, true);
}

namespace {

// psi_k(t,x) = exp(i(p_k.x - E_k t)) / sqrt((2pi)^d 2 E_k)
Complex mode_wave(const ModeSet& modes, int k, const Eigen::Vector3d& x, double t) {
  const Mode& m = modes.modes[k];
  const double phase = m.p.dot(x) - m.E * t;
  const double norm = std::sqrt(std::pow(2.0 * pi, modes.dim) * 2.0 * m.E);
  return std::exp(Complex(0.0, phase)) / norm;
}

FockOperator one_body(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                      const VectorXcd& create_coef, const VectorXcd& destroy_coef) {
  std::vector<Eigen::Triplet<Complex>> trips;
  const int K = modes.size();
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    const std::vector<int>& occ = basis->occupation(i);
    const bool can_raise = basis->grade(i) + 1 <= basis->n_max();
    for (int k = 0; k < K; ++k) {
      if (can_raise && create_coef(k) != Complex(0.0, 0.0)) {
        std::vector<int> up = occ;
        up[k] += 1;
        trips.emplace_back(basis->index_of(up), i,
                           create_coef(k) * std::sqrt(occ[k] + 1.0));
      }
      if (occ[k] > 0 && destroy_coef(k) != Complex(0.0, 0.0)) {
        std::vector<int> down = occ;
        down[k] -= 1;
        trips.emplace_back(basis->index_of(down), i,
                           destroy_coef(k) * std::sqrt(static_cast<double>(occ[k])));
      }
    }
  }
  SparseCd mat(basis->size(), basis->size());
  mat.setFromTriplets(trips.begin(), trips.end());
  const bool herm = ((create_coef - destroy_coef.conjugate()).cwiseAbs().maxCoeff() < 1e-14);
  return FockOperator(basis, std::move(mat), 1, herm);
}

}  // namespace

FockOperator field_operator(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                            const Damper& rhohat, double eps, const Eigen::Vector3d& x, double t,
                            FieldKind kind, int axis) {
  const int K = modes.size();
  VectorXcd cc(K), dc(K);
  for (int k = 0; k < K; ++k) {
    const Mode& m = modes.modes[k];
    const double rh = rhohat(eps * m.p.norm());
    const Complex psi = mode_wave(modes, k, x, t);
    const double sw = std::sqrt(m.w);
    Complex up = sw * rh * std::conj(psi);
    Complex down = sw * rh * psi;
    switch (kind) {
      case FieldKind::Phi:
        break;
      case FieldKind::Pi:
        up *= Complex(0.0, m.E);
        down *= Complex(0.0, -m.E);
        break;
      case FieldKind::GradPhi:
        up *= Complex(0.0, -m.p(axis));
        down *= Complex(0.0, m.p(axis));
        break;
    }
    cc(k) = up;
    dc(k) = down;
  }
  return one_body(modes, basis, cc, dc);
}

FockOperator laplacian_phi(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                           const Damper& rhohat, double eps, const Eigen::Vector3d& x, double t) {
  const int K = modes.size();
  VectorXcd cc(K), dc(K);
  for (int k = 0; k < K; ++k) {
    const Mode& m = modes.modes[k];
    const double rh = rhohat(eps * m.p.norm());
    const Complex psi = mode_wave(modes, k, x, t);
    const double sw = std::sqrt(m.w);
    const double factor = -m.p.squaredNorm();
    cc(k) = sw * rh * std::conj(psi) * factor;
    dc(k) = sw * rh * psi * factor;
  }
  return one_body(modes, basis, cc, dc);
}

CommutatorResult commutator(const FockOperator& a, const FockOperator& b) {
  check_same_basis(a, b);
  CommutatorResult out;
  out.op = FockOperator(a.basis, SparseCd(a.mat * b.mat - b.mat * a.mat),
                        std::min(a.band + b.band, a.basis->n_max()), false);
  out.contaminated = (a.band + b.band) > 0;
  out.safe_grade = std::max(0, a.basis->n_max() - a.band - b.band);
  return out;
}

FockOperator build_H0_canonical(const ModeSet& modes, std::shared_ptr<const FockBasis> basis) {
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    const std::vector<int>& occ = basis->occupation(i);
    double e = 0.0;
    for (int k = 0; k < modes.size(); ++k) e += occ[k] * modes.modes[k].E;
    trips.emplace_back(i, i, Complex(e, 0.0));
  }
  SparseCd mat(basis->size(), basis->size());
  mat.setFromTriplets(trips.begin(), trips.end());
  return FockOperator(basis, std::move(mat), 0, true);
}

namespace {

// two-body blocks assembled from closed matrix elements; the grade-preserving
// blocks are exact on the whole truncated space, the grade +-2 ones carry the
// usual band bookkeeping
enum class TwoBody { CreateCreate, DestroyDestroy, CreateDestroy, DestroyCreate };

FockOperator two_body(std::shared_ptr<const FockBasis> basis, const Eigen::MatrixXcd& coef,
                      TwoBody kind) {
  const int K = static_cast<int>(coef.rows());
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    const std::vector<int>& occ = basis->occupation(i);
    const int grade = basis->grade(i);
    for (int j = 0; j < K; ++j) {
      for (int k = 0; k < K; ++k) {
        const Complex c = coef(j, k);
        if (c == Complex(0.0, 0.0)) continue;
        std::vector<int> target = occ;
        double amp = 0.0;
        switch (kind) {
          case TwoBody::CreateCreate:  // a+_j a+_k
            if (grade + 2 > basis->n_max()) continue;
            amp = std::sqrt(target[k] + 1.0);
            target[k] += 1;
            amp *= std::sqrt(target[j] + 1.0);
            target[j] += 1;
            break;
          case TwoBody::DestroyDestroy:  // a-_j a-_k
            if (target[k] == 0) continue;
            amp = std::sqrt(static_cast<double>(target[k]));
            target[k] -= 1;
            if (target[j] == 0) continue;
            amp *= std::sqrt(static_cast<double>(target[j]));
            target[j] -= 1;
            break;
          case TwoBody::CreateDestroy:  // a+_j a-_k
            if (target[k] == 0) continue;
            amp = std::sqrt(static_cast<double>(target[k]));
            target[k] -= 1;
            amp *= std::sqrt(target[j] + 1.0);
            target[j] += 1;
            break;
          case TwoBody::DestroyCreate:  // a-_j a+_k, exact closed elements
            amp = std::sqrt(target[k] + 1.0);
            target[k] += 1;
            if (target[j] == 0) continue;
            amp *= std::sqrt(static_cast<double>(target[j]));
            target[j] -= 1;
            break;
        }
        trips.emplace_back(basis->index_of(target), i, c * amp);
      }
    }
  }
  SparseCd mat(basis->size(), basis->size());
  mat.setFromTriplets(trips.begin(), trips.end());
  const int band = (kind == TwoBody::CreateCreate || kind == TwoBody::DestroyDestroy) ? 2 : 0;
  return FockOperator(basis, std::move(mat), band, false);
}

}  // namespace

HamiltonianBlocks build_H0_blocks(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                                  const Damper& rhohat, const SampledMollifier& chi, double eps,
                                  double t, double t_xi) {
  const int K = modes.size();
  const double m = modes.mass;
  const double dt = t - t_xi;
  const double epsd = std::pow(eps, modes.dim);

  auto chi_kernel = [&](const Eigen::Vector3d& parg) {
    const double arg = (modes.dim == 3) ? parg.norm() : parg(0);
    return chi.value(arg / eps).real() / epsd;
  };

  Eigen::MatrixXcd cpp(K, K), cmm(K, K), cpm(K, K), cmp(K, K);
  double zero_point = 0.0;
  for (int j = 0; j < K; ++j) {
    const Mode& mj = modes.modes[j];
    for (int k = 0; k < K; ++k) {
      const Mode& mk = modes.modes[k];
      const double sw = std::sqrt(mj.w * mk.w);
      const double rj = rhohat(eps * mj.p.norm());
      const double rk = rhohat(eps * mk.p.norm());
      const double denom = 2.0 * std::sqrt(mj.E * mk.E);
      const double kin_plus = (-mj.E * mk.E - mj.p.dot(mk.p) + m * m) / denom;
      const double kin_mixed = (mj.E * mk.E + mj.p.dot(mk.p) + m * m) / denom;
      cpp(j, k) = 0.5 * sw * rj * rk * chi_kernel(mj.p + mk.p) * kin_plus *
                  std::exp(Complex(0.0, (mj.E + mk.E) * dt));
      cmm(j, k) = 0.5 * sw * rj * rk * chi_kernel(-mj.p - mk.p) * kin_plus *
                  std::exp(Complex(0.0, -(mj.E + mk.E) * dt));
      cpm(j, k) = 0.5 * sw * rj * rk * chi_kernel(mj.p - mk.p) * kin_mixed *
                  std::exp(Complex(0.0, (mj.E - mk.E) * dt));
      cmp(j, k) = 0.5 * sw * rj * rk * chi_kernel(mk.p - mj.p) * kin_mixed *
                  std::exp(Complex(0.0, -(mj.E - mk.E) * dt));
      if (j == k)
        zero_point += 0.5 * mj.w * rj * rk * chi.value(0.0).real() / epsd *
                      (mj.E * mk.E + mj.p.dot(mk.p) + m * m) / denom;
    }
  }

  HamiltonianBlocks blocks;
  blocks.Hpp = two_body(basis, cpp, TwoBody::CreateCreate);
  blocks.Hmm = two_body(basis, cmm, TwoBody::DestroyDestroy);
  blocks.Hpm = two_body(basis, cpm, TwoBody::CreateDestroy);
  blocks.Hmp = two_body(basis, cmp, TwoBody::DestroyCreate);
  blocks.zero_point = zero_point;
  return blocks;
}

SpatialGrid spatial_grid(double half_width, int points) {
  GaussRule rule = gauss_legendre(points, -half_width, half_width);
  SpatialGrid grid;
  grid.x = rule.nodes;
  grid.v = rule.weights;
  return grid;
}

FockOperator build_H_full(const ModeSet& modes, std::shared_ptr<const FockBasis> basis,
                          const SpatialGrid& grid, const Damper& chihat, const Damper& rhohat,
                          double eps, double g, int power_N, double tau) {
  FockOperator H = build_H0_canonical(modes, basis);
  if (g != 0.0) {
    SparseCd inter(basis->size(), basis->size());
    for (Eigen::Index j = 0; j < grid.x.size(); ++j) {
      const double cut = chihat(eps * grid.x(j));
      if (cut == 0.0) continue;
      const FockOperator phi =
          field_operator(modes, basis, rhohat, eps, Eigen::Vector3d(grid.x(j), 0.0, 0.0), tau,
                         FieldKind::Phi);
      SparseCd power = phi.mat;
      for (int n = 1; n < power_N + 1; ++n) power = SparseCd(power * phi.mat);
      inter += grid.v(j) * cut * power;
    }
    H.mat += (g / (power_N + 1.0)) * inter;
    H.band = std::min(power_N + 1, basis->n_max());
  }
  FockOperator out(basis, std::move(H.mat), H.band, false);
  const double defect = out.hermiticity_defect();
  if (defect > 1e-10)
    throw ConstructionError("build_H_full: Hermiticity defect (asymmetric grid?)", defect);
  out.hermitian = true;
  return out;
}

Eigen::MatrixXcd unitary_exp(const FockOperator& H, double theta) {
  if (H.hermiticity_defect() > 1e-10)
    throw std::invalid_argument("unitary_exp: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.mat.toDense());
  if (es.info() != Eigen::Success) throw std::runtime_error("unitary_exp: eigensolver failed");
  VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(Complex(0.0, theta * es.eigenvalues()(i)));
  Eigen::MatrixXcd U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  const double defect =
      (U * U.adjoint() - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-11) throw AccuracyError("unitary_exp: unitarity defect", defect);
  return U;
}

FockOperator heisenberg_evolve(const FockOperator& A, const FockOperator& H, double dt) {
  check_same_basis(A, H);
  if (dt == 0.0) return A;
  const Eigen::MatrixXcd U = unitary_exp(H, dt);
  Eigen::MatrixXcd evolved = U * A.mat.toDense() * U.adjoint();
  const int band = (H.band == 0) ? A.band : A.basis->n_max();
  return FockOperator(A.basis, evolved.sparseView(1.0, 1e-300), band, false);
}

FieldEquationResidual field_equation_residual(const ModeSet& modes,
                                              std::shared_ptr<const FockBasis> basis,
                                              const SpatialGrid& grid, const Damper& chihat,
                                              const Damper& rhohat, double eps, double g,
                                              int power_N,
                                              const std::function<double(double)>& smearing,
                                              double tau) {
  const FockOperator H = build_H_full(modes, basis, grid, chihat, rhohat, eps, g, power_N, tau);
  const double m = modes.mass;

  SparseCd acc(basis->size(), basis->size());
  for (Eigen::Index j = 0; j < grid.x.size(); ++j) {
    const double bump = smearing(grid.x(j));
    if (bump == 0.0) continue;
    const Eigen::Vector3d x(grid.x(j), 0.0, 0.0);
    const FockOperator phi = field_operator(modes, basis, rhohat, eps, x, tau, FieldKind::Phi);
    const FockOperator pi = field_operator(modes, basis, rhohat, eps, x, tau, FieldKind::Pi);
    const FockOperator lap = laplacian_phi(modes, basis, rhohat, eps, x, tau);
    const SparseCd dpi_dt = SparseCd(Complex(0.0, 1.0) * (H.mat * pi.mat - pi.mat * H.mat));
    SparseCd phiN = phi.mat;
    for (int n = 1; n < power_N; ++n) phiN = SparseCd(phiN * phi.mat);
    acc += grid.v(j) * bump * SparseCd(dpi_dt - lap.mat + (m * m) * phi.mat + g * phiN);
  }

  FieldEquationResidual out;
  out.contaminated = true;  // [H, pi] can push through the particle cap
  out.safe_grade = std::max(0, basis->n_max() - power_N - 1);
  // spectral norm of the residual restricted to columns that truncation
  // cannot contaminate
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < basis->size(); ++i)
    if (basis->grade(i) <= out.safe_grade) cols.push_back(i);
  Eigen::MatrixXcd dense = Eigen::MatrixXcd(acc);
  Eigen::MatrixXcd sub(dense.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = dense.col(cols[c]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub);
  out.value = svd.singularValues()(0);
  return out;
}

}  // namespace eqft
