#include "eqft/mollifier.hpp"

#include <limits>

#include <unsupported/Eigen/FFT>

namespace eqft {

namespace {

// Surface moment of x^n over the unit sphere; zero unless all n_i are even.
double angular_factor(const MultiIndex& n) {
  for (int c : n)
    if (c % 2 != 0) return 0.0;
  auto dfact = [](int k) {
    double v = 1.0;
    for (int j = k; j > 1; j -= 2) v *= j;
    return v;
  };
  const int total = order(n);
  return 4.0 * pi * dfact(n[0] - 1) * dfact(n[1] - 1) * dfact(n[2] - 1) / dfact(total + 1);
}

VectorXcd pow_samples(const VectorXcd& s, int m) {
  if (m == 1) return s;
  VectorXcd out = s;
  for (int k = 1; k < m; ++k) out = out.cwiseProduct(s);
  return out;
}

}  // namespace

Complex SampledMollifier::value(double x, bool* out_of_range) const {
  const double arg = (dim_ == 3) ? std::abs(x) : x;
  return interp_cubic<Complex>(samples_, grid_, arg, out_of_range);
}

SampledMollifier SampledMollifier::reversed() const {
  SampledMollifier out = *this;
  if (dim_ == 3) return out;  // radial profiles are already even
  const Eigen::Index n = grid_.n;
  // grid covers [-X, X); the missing +X endpoint wraps to -X, where the
  // Schwartz tail is below the noise floor
  for (Eigen::Index j = 0; j < n; ++j) out.samples_(j) = samples_((n - j) % n);
  out.table_ = MomentTable{};
  return out;
}

SampledMollifier SampledMollifier::scaled(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("SampledMollifier::scaled: eps must be positive");
  SampledMollifier out = *this;
  out.grid_.origin = grid_.origin * eps;
  out.grid_.step = grid_.step * eps;
  const double norm = std::pow(eps, -dim_);
  out.samples_ = samples_ * norm;
  out.table_ = MomentTable{};
  return out;
}

SampledMollifier SampledMollifier::from_parts(int dim, const UniformGrid& grid, VectorXcd samples,
                                              std::shared_ptr<const Damper> source) {
  SampledMollifier m;
  m.dim_ = dim;
  m.grid_ = grid;
  m.samples_ = std::move(samples);
  m.source_ = std::move(source);
  return m;
}

void SampledMollifier::tabulate_moments(int max_power, int max_order) {
  table_.max_power = max_power;
  table_.max_order = max_order;
  table_.values.clear();
  for (int m = 1; m <= max_power; ++m) {
    if (dim_ == 1) {
      for (int n = 0; n <= max_order; ++n)
        table_.values[{m, MultiIndex{n, 0, 0}}] = moment(*this, m, MultiIndex{n, 0, 0});
    } else {
      for (int n1 = 0; n1 <= max_order; ++n1)
        for (int n2 = 0; n2 + n1 <= max_order; ++n2)
          for (int n3 = 0; n3 + n2 + n1 <= max_order; ++n3)
            table_.values[{m, MultiIndex{n1, n2, n3}}] =
                moment(*this, m, MultiIndex{n1, n2, n3});
    }
  }
}

namespace {

// f(x_j) = (1/2pi) int F(p) exp(-i p x) dp on x_j = (j - n/2) dx, evaluated as
// an exact discrete transform: (dp/2pi) sum_k F(p_k) (-1)^k exp(-2pi i k j/n).
VectorXcd centered_inverse_transform(const std::function<Complex(double)>& spectrum,
                                     double half_extent, Eigen::Index n) {
  const double dp = 2.0 * pi / (2.0 * half_extent);
  VectorXcd spec(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double freq = (k <= n / 2) ? static_cast<double>(k) : static_cast<double>(k - n);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    spec(k) = sign * spectrum(freq * dp);
  }
  Eigen::FFT<double> fft;
  VectorXcd transformed(n);
  fft.fwd(transformed, spec);
  return transformed * (dp / (2.0 * pi));
}

}  // namespace

SampledMollifier damper_to_mollifier(const Damper& damper, double half_extent,
                                     Eigen::Index points) {
  SampledMollifier out;
  out.dim_ = damper.dim();
  out.source_ = std::make_shared<Damper>(damper);

  const Eigen::Index n = points;
  const double dx = 2.0 * half_extent / static_cast<double>(n);
  if (damper.dim() == 1) {
    out.grid_ = UniformGrid{-half_extent, dx, n};
    out.samples_ =
        centered_inverse_transform([&](double p) { return Complex(damper(p), 0.0); },
                                   half_extent, n);
  } else {
    // rho(r) = (1/(2 pi^2 r)) int_0^inf p sin(pr) rhohat(p) dp; with
    // u(x) = (1/2pi) int p rhohat(p) exp(-ipx) dp one has rho(r) = Re(i u)/(2 pi r).
    VectorXcd u = centered_inverse_transform(
        [&](double p) { return Complex(p * damper(p), 0.0); }, half_extent, n);
    out.grid_ = UniformGrid{0.0, dx, n / 2};
    out.samples_.resize(n / 2);
    for (Eigen::Index j = 1; j < n / 2; ++j) {
      const double r = out.grid_.point(j);
      out.samples_(j) = (Complex(0.0, 1.0) * u(n / 2 + j)).real() / (2.0 * pi * r);
    }
    const GaussRule rule = gauss_legendre(200, 0.0, damper.support_radius());
    double center = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      center += rule.weights(i) * rule.nodes(i) * rule.nodes(i) * damper(rule.nodes(i));
    out.samples_(0) = center / (2.0 * pi * pi);
  }

  // aliasing check: |rho| mass in the outer 10% of the window
  const Eigen::Index ns = out.samples_.size();
  const Eigen::Index edge = ns / 10;
  double outer = 0.0, total = 0.0;
  for (Eigen::Index j = 0; j < ns; ++j) {
    const double a = std::abs(out.samples_(j));
    total += a;
    const bool in_tail = (out.dim_ == 1) ? (j < edge / 2 || j >= ns - edge / 2) : (j >= ns - edge);
    if (in_tail) outer += a;
  }
  if (outer > 1e-8 * total)
    throw GridExtentError("damper_to_mollifier: window too small, tail mass " +
                          std::to_string(outer / total));

  out.tabulate_moments(3, 6);
  return out;
}

Complex moment(const SampledMollifier& rho, int m, const MultiIndex& n) {
  if (m < 1) throw std::invalid_argument("moment: power must be >= 1");
  const VectorXcd powed = pow_samples(rho.samples(), m);

  // The weighted quadrature must not integrate x^n against samples that sit
  // below the double-precision noise floor of the transform; truncate at the
  // outermost sample still above 1e-14 of the peak.
  const double peak = powed.cwiseAbs().maxCoeff();
  const double floor = 1e-15 * peak;
  Eigen::Index lo = 0, hi = powed.size() - 1;
  while (hi > lo && std::abs(powed(hi)) < floor) --hi;
  if (rho.dim() == 1)
    while (lo < hi && std::abs(powed(lo)) < floor) ++lo;

  if (rho.dim() == 1) {
    if (n[1] != 0 || n[2] != 0)
      throw std::invalid_argument("moment: d = 1 moments take a single index");
    VectorXcd integrand(hi - lo + 1);
    for (Eigen::Index j = lo; j <= hi; ++j)
      integrand(j - lo) = powed(j) * std::pow(rho.grid().point(j), n[0]);
    return trapezoid(integrand, rho.grid_step());
  }
  const double ang = angular_factor(n);
  if (ang == 0.0) return Complex(0.0, 0.0);
  VectorXcd integrand(hi + 1);
  const int k = order(n) + 2;
  for (Eigen::Index j = 0; j <= hi; ++j)
    integrand(j) = powed(j) * std::pow(rho.grid().point(j), k);
  return ang * simpson(integrand, rho.grid_step());
}

Complex moment(const SampledMollifier& rho, int m, int n1d) {
  return moment(rho, m, MultiIndex{n1d, 0, 0});
}

SampledMollifier convolve_mollifiers(const SampledMollifier& a, const SampledMollifier& b) {
  if (a.dim() != b.dim())
    throw IncompatibilityError("convolve_mollifiers: dimension mismatch");
  if (a.source_damper() && b.source_damper()) {
    Damper prod = a.source_damper()->product(*b.source_damper());
    const double half = (a.dim() == 1) ? (a.grid().origin * -1.0) : a.grid().last();
    return damper_to_mollifier(prod, half, a.grid().n);
  }
  if (a.dim() != 1)
    throw IncompatibilityError("convolve_mollifiers: d = 3 requires damper-backed operands");
  if (!(a.grid() == b.grid()))
    throw IncompatibilityError("convolve_mollifiers: grid mismatch");

  const Eigen::Index n = a.grid().n;
  Eigen::FFT<double> fft;
  VectorXcd fa(n), fb(n), prod(n), conv(n);
  VectorXcd sa = a.samples(), sb = b.samples();
  fft.fwd(fa, sa);
  fft.fwd(fb, sb);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // centers the kernel
    prod(k) = fa(k) * fb(k) * sign;
  }
  fft.inv(conv, prod);
  auto out = SampledMollifier::from_parts(1, a.grid(), conv * a.grid_step(), nullptr);
  out.tabulate_moments(3, 6);
  return out;
}

ScaledValue scaled_eval(const SampledMollifier& rho, double eps, double x) {
  if (!(eps > 0.0)) throw std::invalid_argument("scaled_eval: eps must be positive");
  ScaledValue sv;
  sv.value = rho.value(x / eps, &sv.out_of_range) * std::pow(eps, -rho.dim());
  return sv;
}

double mollifier_value_1d(const Damper& damper, double x, const GaussRule& rule) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights(i) * std::cos(rule.nodes(i) * x) * damper(rule.nodes(i));
  return acc / pi;
}

double mollifier_value_3d(const Damper& damper, double r, const GaussRule& rule) {
  double acc = 0.0;
  if (std::abs(r) < 1e-12) {
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights(i) * rule.nodes(i) * rule.nodes(i) * damper(rule.nodes(i));
    return acc / (2.0 * pi * pi);
  }
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights(i) * rule.nodes(i) * std::sin(rule.nodes(i) * r) * damper(rule.nodes(i));
  return acc / (2.0 * pi * pi * r);
}

double squared_mass(const Damper& damper, const GaussRule& rule) {
  double acc = 0.0;
  if (damper.dim() == 1) {
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
      const double v = damper(rule.nodes(i));
      acc += rule.weights(i) * v * v;
    }
    return 2.0 * acc / (2.0 * pi);  // even integrand, rule on [0, b]
  }
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double v = damper(rule.nodes(i));
    acc += rule.weights(i) * rule.nodes(i) * rule.nodes(i) * v * v;
  }
  return 4.0 * pi * acc / std::pow(2.0 * pi, 3);
}

namespace {

struct HermiteBasis {
  UniformGrid grid;
  Eigen::MatrixXd H;  // columns are orthonormal Hermite functions on the grid

  HermiteBasis(int count, double half, Eigen::Index n) {
    grid = UniformGrid::symmetric(half, n);
    H.resize(n, count);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = grid.point(j);
      double h0 = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
      H(j, 0) = h0;
      if (count > 1) H(j, 1) = std::sqrt(2.0) * x * h0;
      for (int k = 2; k < count; ++k)
        H(j, k) = std::sqrt(2.0 / k) * x * H(j, k - 1) -
                  std::sqrt(static_cast<double>(k - 1) / k) * H(j, k - 2);
    }
  }
};

}  // namespace

SampledMollifier build_complex_moment_mollifier(const MomentMollifierOptions& opt) {
  const int N = opt.max_order;
  if (N < 0 || N > 8)
    throw std::invalid_argument("build_complex_moment_mollifier: max_order must be in [0, 8]");
  if (opt.power != 1 && opt.power != 2)
    throw UnsupportedError("build_complex_moment_mollifier: power must be 1 or 2");

  if (N == 0 && !opt.zero_m20) {
    // degenerate case: a plain normalized gaussian already has unit mass
    HermiteBasis basis(1, 30.0, 8192);
    VectorXd h0 = basis.H.col(0);
    const double mass = h0.sum() * basis.grid.step;
    VectorXcd samples = (h0 / mass).cast<Complex>();
    auto out = SampledMollifier::from_parts(1, basis.grid, std::move(samples), nullptr);
    out.tabulate_moments(opt.power, 2);
    return out;
  }

  const int J = std::max(4 * N, 4);
  HermiteBasis basis(J, 30.0, 8192);
  const double dx = basis.grid.step;
  const Eigen::Index ng = basis.grid.n;

  // B(n, j) = int x^n h_j dx ; Q[n](j, k) = int x^n h_j h_k dx
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N + 1, J);
  std::vector<Eigen::MatrixXd> Q(N + 1, Eigen::MatrixXd::Zero(J, J));
  {
    Eigen::MatrixXd xn = Eigen::MatrixXd::Ones(ng, N + 1);
    for (int n = 1; n <= N; ++n)
      for (Eigen::Index r = 0; r < ng; ++r) xn(r, n) = xn(r, n - 1) * basis.grid.point(r);
    for (int n = 0; n <= N; ++n) {
      for (int j = 0; j < J; ++j) {
        B(n, j) = (xn.col(n).array() * basis.H.col(j).array()).sum() * dx;
        for (int k = j; k < J; ++k) {
          const double q =
              (xn.col(n).array() * basis.H.col(j).array() * basis.H.col(k).array()).sum() * dx;
          Q[n](j, k) = q;
          Q[n](k, j) = q;
        }
      }
    }
  }

  const bool quad = (opt.power == 2);
  auto residual = [&](const VectorXcd& c, VectorXd* out) {
    std::vector<double> r;
    VectorXcd lin = B * c;  // M[1, n]
    r.push_back(lin(0).real() - 1.0);
    r.push_back(lin(0).imag());
    for (int n = 1; n <= N; ++n) {
      r.push_back(lin(n).real());
      r.push_back(lin(n).imag());
    }
    if (quad) {
      for (int n = 0; n <= N; ++n) {
        const Complex m2 = c.transpose() * (Q[n] * c);  // bilinear, not sesquilinear
        if (n >= 1) {
          r.push_back(m2.real());
          r.push_back(m2.imag());
        } else {
          r.push_back(m2.imag());
          if (opt.zero_m20) r.push_back(m2.real());
        }
      }
    }
    *out = Eigen::Map<VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
  };

  auto solve_from = [&](VectorXcd c) -> std::pair<VectorXcd, double> {
    VectorXd r;
    residual(c, &r);
    const Eigen::Index nr = r.size();
    const Eigen::Index nz = opt.require_real ? J : 2 * J;
    double lambda = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
      if (r.norm() < 0.25 * opt.tolerance) return {c, r.norm()};
      Eigen::MatrixXd Jac = Eigen::MatrixXd::Zero(nr, nz);
      // linear rows
      Eigen::Index row = 0;
      for (int n = 0; n <= N; ++n) {
        for (int j = 0; j < J; ++j) {
          Jac(row, j) = B(n, j);          // d Re / d Re c_j
          Jac(row + 1, j) = 0.0;          // d Im / d Re c_j
          if (!opt.require_real) {
            Jac(row, J + j) = 0.0;        // d Re / d Im c_j
            Jac(row + 1, J + j) = B(n, j);
          }
        }
        row += 2;
      }
      if (quad) {
        for (int n = 0; n <= N; ++n) {
          const VectorXcd g = 2.0 * (Q[n] * c);
          auto fill = [&](Eigen::Index rr, bool imag_part) {
            for (int j = 0; j < J; ++j) {
              const Complex dj = g(j);
              Jac(rr, j) = imag_part ? dj.imag() : dj.real();
              if (!opt.require_real) {
                const Complex djv = dj * Complex(0.0, 1.0);
                Jac(rr, J + j) = imag_part ? djv.imag() : djv.real();
              }
            }
          };
          if (n >= 1) {
            fill(row, false);
            fill(row + 1, true);
            row += 2;
          } else {
            fill(row, true);
            row += 1;
            if (opt.zero_m20) {
              fill(row, false);
              row += 1;
            }
          }
        }
      }
      // Levenberg step
      Eigen::MatrixXd A = Jac.transpose() * Jac;
      A.diagonal().array() += lambda;
      VectorXd step = A.ldlt().solve(-Jac.transpose() * r);
      VectorXcd c_try = c;
      for (int j = 0; j < J; ++j) {
        c_try(j) += Complex(step(j), opt.require_real ? 0.0 : step(J + j));
      }
      VectorXd r_try;
      residual(c_try, &r_try);
      if (r_try.norm() < r.norm()) {
        c = c_try;
        r = r_try;
        lambda = std::max(lambda * 0.3, 1e-12);
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) break;
      }
    }
    residual(c, &r);
    return {c, r.norm()};
  };

  // Deterministic seed list: gaussian with assorted complex admixtures.
  std::vector<VectorXcd> seeds;
  const double g_norm = B(0, 0);  // int h_0
  for (double im : {0.4, -0.4, 0.8, 0.2}) {
    VectorXcd c = VectorXcd::Zero(J);
    c(0) = 1.0 / g_norm;
    if (J > 2 && !opt.require_real) {
      c(2) = Complex(0.0, im);
      if (J > 4) c(4) = Complex(0.1, -0.5 * im);
      if (J > 1) c(1) = Complex(0.0, 0.3 * im);
    }
    seeds.push_back(c);
  }

  VectorXcd best;
  double best_res = std::numeric_limits<double>::infinity();
  for (const auto& seed : seeds) {
    auto [c, res] = solve_from(seed);
    if (res < best_res) {
      best = c;
      best_res = res;
    }
    if (best_res < 0.25 * opt.tolerance) break;
  }
  if (best_res >= 0.25 * opt.tolerance)
    throw ConstructionError("build_complex_moment_mollifier: residual above tolerance", best_res);

  VectorXcd samples = basis.H.cast<Complex>() * best;
  auto out = SampledMollifier::from_parts(1, basis.grid, std::move(samples), nullptr);
  out.tabulate_moments(opt.power, std::max(N, 2));

  // Recheck the achieved moments from the samples themselves.
  double achieved = std::abs(moment(out, 1, 0) - Complex(1.0, 0.0));
  for (int n = 1; n <= N; ++n) {
    achieved = std::max(achieved, std::abs(moment(out, 1, n)));
    if (quad) achieved = std::max(achieved, std::abs(moment(out, 2, n)));
  }
  if (quad) achieved = std::max(achieved, std::abs(moment(out, 2, 0).imag()));
  if (achieved > opt.tolerance)
    throw ConstructionError("build_complex_moment_mollifier: quadrature residual above tolerance",
                            achieved);
  return out;
}

}  // namespace eqft
