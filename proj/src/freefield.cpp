#include "eqft/freefield.hpp"

#include <map>

namespace eqft {

namespace {

double energy(double p, double m) { return std::sqrt(m * m + p * p); }

const GaussRule& damper_rule(const Damper& d) {
  // one shared rule per support radius is enough; rules are tiny
  static thread_local std::map<double, GaussRule> cache;
  auto it = cache.find(d.support_radius());
  if (it == cache.end())
    it = cache.emplace(d.support_radius(), gauss_legendre(240, 0.0, d.support_radius())).first;
  return it->second;
}

// composite Simpson of f over [0, upper] with n panels
template <typename F>
Complex simpson_panels(F&& f, double upper, Eigen::Index panels) {
  const Eigen::Index n = 2 * panels + 1;
  const double h = upper / static_cast<double>(n - 1);
  Complex acc = f(0.0) + f(upper);
  for (Eigen::Index j = 1; j < n - 1; ++j) acc += f(h * j) * ((j % 2 == 1) ? 4.0 : 2.0);
  return acc * (h / 3.0);
}

}  // namespace

FieldParams make_field_params(double mass, int dim, double rho_a, double rho_b, double chi_a,
                              double chi_b) {
  FieldParams params;
  params.mass = mass;
  params.dim = dim;
  params.rho = damper_to_mollifier(build_damper(rho_a, rho_b, dim));
  params.chihat = build_damper(chi_a, chi_b, dim);
  return params;
}

Complex delta_eps_kernel(const Damper& rhohat, double mass, int dim, double eps, double t,
                         double r, double rel_tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("delta_eps: eps must be positive");
  const double pmax = rhohat.support_radius() / eps;
  const double phase = pmax * std::abs(r) + (energy(pmax, mass) - mass) * std::abs(t);
  Eigen::Index panels = std::max<Eigen::Index>(
      96, static_cast<Eigen::Index>(std::ceil(20.0 * phase / (2.0 * pi))));
  const Eigen::Index panel_cap = 1 << 22;
  if (panels > panel_cap)
    throw AccuracyError("delta_eps: oscillation panel count over cap", double(panels));

  double l1 = 0.0;  // integrand magnitude scale for the convergence test
  auto integrand = [&](double p) -> Complex {
    const double E = energy(p, mass);
    const Complex osc = std::exp(Complex(0.0, -E * t));
    Complex v;
    if (dim == 3) {
      const double pr = p * r;
      const double sinc = (std::abs(pr) < 1e-8) ? 1.0 - pr * pr / 6.0 : std::sin(pr) / pr;
      v = (p * p / E) * rhohat(eps * p) * sinc * osc;
    } else {
      v = rhohat(eps * p) * std::cos(p * r) / (2.0 * E) * osc;
    }
    l1 = std::max(l1, std::abs(v));
    return v;
  };
  const double front = (dim == 3) ? 1.0 / (4.0 * pi * pi) : 1.0 / pi;

  // adaptive panel doubling; convergence is judged against the integrand
  // scale so that deeply cancelling values are not held to impossible
  // relative targets
  Complex coarse = simpson_panels(integrand, pmax, panels);
  double disagreement = 0.0;
  while (panels <= panel_cap) {
    panels *= 2;
    const Complex fine = simpson_panels(integrand, pmax, panels);
    const double scale = std::max(std::abs(fine), 1e-8 * l1 * pmax);
    disagreement = std::abs(fine - coarse) / scale;
    if (disagreement <= rel_tol) return front * fine;
    coarse = fine;
  }
  throw AccuracyError("delta_eps: Richardson disagreement at panel cap", disagreement);
}

Complex delta_eps(const FieldParams& params, double eps, double t, double r, double rel_tol) {
  return delta_eps_kernel(params.rhohat(), params.mass, params.dim, eps, t, r, rel_tol);
}

double norm_N(const FieldParams& params, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("norm_N: eps must be positive");
  const Damper& rhohat = params.rhohat();
  const GaussRule& rule = damper_rule(rhohat);
  // substitute s = eps p: the integral over the damper support
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes(i);
    const double v = rhohat(s);
    const double E = energy(s / eps, params.mass);
    const double meas = (params.dim == 3) ? 4.0 * pi * s * s / (eps * eps * eps) : 2.0 / eps;
    acc += rule.weights(i) * meas * v * v / (2.0 * E);
  }
  return std::sqrt(acc / std::pow(2.0 * pi, params.dim));
}

Complex normalized_delta(const FieldParams& params, double eps, double t, double r) {
  return delta_eps(params, eps, t, r) / norm_N(params, eps);
}

namespace {

// chi = F^-1 chihat: direct Gauss quadrature while the oscillation is
// resolved, exact FFT samples beyond that
double chi_value(const FieldParams& params, double arg) {
  const double r = std::abs(arg);
  if (r <= 30.0) {
    const GaussRule& rule = damper_rule(params.chihat);
    return (params.dim == 3) ? mollifier_value_3d(params.chihat, r, rule)
                             : mollifier_value_1d(params.chihat, arg, rule);
  }
  static thread_local std::map<std::pair<double, double>, SampledMollifier> cache;
  const auto key = std::make_pair(params.chihat.plateau_radius(), params.chihat.support_radius());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, damper_to_mollifier(params.chihat)).first;
  return it->second.value(arg).real();
}

}  // namespace

Complex g_inner_plane_waves(const FieldParams& params, double eps, const Eigen::Vector3d& p1,
                            const Eigen::Vector3d& p2, double t_xi, bool conjugate_pair) {
  const double m = params.mass;
  const double E1 = energy(p1.norm(), m), E2 = energy(p2.norm(), m);
  const Eigen::Vector3d pk = conjugate_pair ? Eigen::Vector3d(p1 + p2) : Eigen::Vector3d(p1 - p2);
  const double chi_arg = pk.norm() / eps;
  const double kernel = chi_value(params, chi_arg) / std::pow(eps, params.dim);
  if (conjugate_pair) {
    return (E1 - E2) / (2.0 * std::sqrt(E1 * E2)) * std::exp(Complex(0.0, (E1 + E2) * t_xi)) *
           kernel;
  }
  return (E1 + E2) / (2.0 * std::sqrt(E1 * E2)) * std::exp(Complex(0.0, (E1 - E2) * t_xi)) *
         kernel;
}

namespace {

// Coincident-point inner products <Delta || Delta> and <Delta || Delta*> by
// the substitution p2 = +-(p1 - eps q): the chi kernel turns into chi3(q)
// and the eps-localized diagonal is resolved analytically.
Complex substitution_inner(const FieldParams& params, double eps, bool conjugate, double t_xi) {
  const Damper& rhohat = params.rhohat();
  const double m = params.mass;
  const SampledMollifier chi3 = damper_to_mollifier(params.chihat);
  const int np = 300, nq = 4000, nc = 32;
  const GaussRule rp = gauss_legendre(np, 0.0, rhohat.support_radius() / eps);
  const GaussRule rc = gauss_legendre(nc, -1.0, 1.0);
  const double Q = 400.0, dq = Q / nq;
  Complex acc(0.0, 0.0);
  for (int i = 0; i < np; ++i) {
    const double p1 = rp.nodes(i), E1 = energy(p1, m);
    const double f1 = rhohat(eps * p1);
    if (f1 == 0.0) continue;
    Complex inner(0.0, 0.0);
    for (int jq = 1; jq <= nq; ++jq) {
      const double q = jq * dq;
      const double w = (jq == nq) ? 1.0 : ((jq % 2) ? 4.0 : 2.0);
      const double cq = chi3.value(q).real();
      if (std::abs(cq) < 1e-17) continue;
      Complex ang(0.0, 0.0);
      for (int t = 0; t < nc; ++t) {
        const double c = rc.nodes(t);
        const double p2 =
            std::sqrt(std::max(0.0, p1 * p1 - 2 * eps * p1 * q * c + eps * eps * q * q));
        const double E2 = energy(p2, m);
        const double f2 = rhohat(eps * p2);
        if (f2 == 0.0) continue;
        const double pref =
            conjugate ? (E1 - E2) / (4.0 * E1 * E2) : (E1 + E2) / (4.0 * E1 * E2);
        const Complex phase = conjugate ? std::exp(Complex(0.0, (E1 + E2) * t_xi))
                                        : std::exp(Complex(0.0, (E1 - E2) * t_xi));
        ang += rc.weights(t) * f2 * pref * phase;
      }
      inner += w * 2.0 * pi * q * q * cq * ang;
    }
    acc += rp.weights(i) * 4.0 * pi * p1 * p1 * f1 * inner * (dq / 3.0);
  }
  return acc / std::pow(2.0 * pi, 3);
}

// <psi_p || Delta_eps(xi - x)>_G by the substitution p2 = p - eps q; the
// azimuthal integral is a Bessel J0.
Complex psi_delta_full(const FieldParams& params, double eps, const GInnerArgs& args) {
  const Damper& rhohat = params.rhohat();
  const double m = params.mass;
  const double P = args.p.norm();
  const double Ep = energy(P, m);
  // x in the frame with z along p
  Eigen::Vector3d zhat = (P > 0) ? (args.p / P).eval() : Eigen::Vector3d::UnitZ();
  const double x_par = args.x.dot(zhat);
  const double x_perp = (args.x - x_par * zhat).norm();

  const SampledMollifier chi3 = damper_to_mollifier(params.chihat);
  const double Q = 400.0;
  const int nq = 6000;
  const int nth = 48;
  const GaussRule cos_rule = gauss_legendre(nth, -1.0, 1.0);
  const double dq = Q / nq;
  Complex acc(0.0, 0.0);
  for (int iq = 1; iq <= nq; ++iq) {
    const double q = iq * dq;
    const double w_simpson = (iq == nq) ? 1.0 : ((iq % 2 == 1) ? 4.0 : 2.0);
    const double chi_q = chi3.value(q).real();
    if (chi_q == 0.0) continue;
    Complex inner(0.0, 0.0);
    for (int it = 0; it < nth; ++it) {
      const double c = cos_rule.nodes(it);
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double p2_par = P - eps * q * c;
      const double p2_perp = eps * q * s;
      const double p2 = std::hypot(p2_par, p2_perp);
      const double E2 = energy(p2, m);
      const double rh = rhohat(eps * p2);
      if (rh == 0.0) continue;
      // psi_{p2}(-x) = exp(i(-p2.x + E2 t_x)) / sqrt((2pi)^3 2 E2)
      const double p2_dot_x = p2_par * x_par;  // J0 handles the perp part
      const double bessel = std::cyl_bessel_j(0, p2_perp * x_perp);
      const Complex psi = std::exp(Complex(0.0, -p2_dot_x + E2 * args.t_x)) * bessel /
                          std::sqrt(std::pow(2.0 * pi, 3) * 2.0 * E2);
      const Complex h = psi * (Ep + E2) / (2.0 * std::sqrt(Ep * E2)) *
                        std::exp(Complex(0.0, (Ep - E2) * args.t_xi));
      inner += cos_rule.weights(it) * rh * h;
    }
    acc += w_simpson * (2.0 * pi * q * q * chi_q) * inner;
  }
  return acc * (dq / 3.0);
}

}  // namespace

GInnerResult g_inner_delta(const FieldParams& params, double eps, GInnerKind kind,
                           const GInnerArgs& args) {
  if (params.dim != 3)
    throw UnsupportedError("g_inner_delta: implemented for the d = 3 continuum");
  GInnerResult out;
  switch (kind) {
    case GInnerKind::PsiDelta: {
      out.full = psi_delta_full(params, eps, args);
      const double P = args.p.norm();
      const double Ep = energy(P, params.mass);
      const Complex psi = std::exp(Complex(0.0, -args.p.dot(args.x) + Ep * args.t_x)) /
                          std::sqrt(std::pow(2.0 * pi, 3) * 2.0 * Ep);
      out.reduced = params.rhohat()(eps * P) * psi;
      break;
    }
    case GInnerKind::DeltaDelta: {
      out.full = substitution_inner(params, eps, false, args.t_xi);
      const Damper squared = params.rhohat().product(params.rhohat());
      out.reduced = delta_eps_kernel(squared, params.mass, 3, eps, 0.0, 0.0);
      break;
    }
    case GInnerKind::DeltaDeltaStar: {
      out.full = substitution_inner(params, eps, true, args.t_xi);
      out.reduced = Complex(0.0, 0.0);
      break;
    }
  }
  out.difference = out.full - out.reduced;
  return out;
}

Complex delta3_kernel(const SampledMollifier& sigma, double eps, double displacement) {
  return scaled_eval(sigma, eps, -displacement).value;
}

double zero_point_leading(const FieldParams& params, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("zero_point_leading: eps must be positive");
  const Damper& rhohat = params.rhohat();
  const GaussRule& rr = damper_rule(rhohat);
  const GaussRule& rc = damper_rule(params.chihat);
  const double m = params.mass;
  double Ix = 0.0, Ip = 0.0;
  if (params.dim == 3) {
    for (Eigen::Index i = 0; i < rc.nodes.size(); ++i) {
      const double y = rc.nodes(i);
      const double v = params.chihat(y);
      Ix += rc.weights(i) * 4.0 * pi * y * y * v * v;
    }
    Ix /= eps * eps * eps;
    for (Eigen::Index i = 0; i < rr.nodes.size(); ++i) {
      const double s = rr.nodes(i);
      const double v = rhohat(s);
      Ip += rr.weights(i) * 4.0 * pi * s * s * energy(s / eps, m) * v * v;
    }
    Ip /= eps * eps * eps;
    return Ix * Ip / (2.0 * std::pow(2.0 * pi, 3));
  }
  for (Eigen::Index i = 0; i < rc.nodes.size(); ++i) {
    const double v = params.chihat(rc.nodes(i));
    Ix += rc.weights(i) * 2.0 * v * v;
  }
  Ix /= eps;
  for (Eigen::Index i = 0; i < rr.nodes.size(); ++i) {
    const double s = rr.nodes(i);
    const double v = rhohat(s);
    Ip += rr.weights(i) * 2.0 * energy(s / eps, m) * v * v;
  }
  Ip /= eps;
  return Ix * Ip / (2.0 * (2.0 * pi));
}

double zero_point_dimensional(const FieldParams& params, double eps, double lambda_c,
                              double lambda_r, double hbar_c) {
  // massless estimate: (1/(2(2pi)^3)) eps^-7 (lc/lr)^3 (hbar c / lr) Iy Is
  const Damper& rhohat = params.rhohat();
  const GaussRule& rr = damper_rule(rhohat);
  const GaussRule& rc = damper_rule(params.chihat);
  double Iy = 0.0, Is = 0.0;
  for (Eigen::Index i = 0; i < rc.nodes.size(); ++i) {
    const double y = rc.nodes(i);
    const double v = params.chihat(y);
    Iy += rc.weights(i) * 4.0 * pi * y * y * v * v;
  }
  for (Eigen::Index i = 0; i < rr.nodes.size(); ++i) {
    const double s = rr.nodes(i);
    const double v = rhohat(s);
    Is += rr.weights(i) * 4.0 * pi * s * s * s * v * v;
  }
  return Iy * Is * std::pow(lambda_c / lambda_r, 3) * (hbar_c / lambda_r) /
         (2.0 * std::pow(2.0 * pi, 3) * std::pow(eps, 7));
}

double zero_point_model_full(const FieldParams& params, double eps, double t_minus_txi,
                             const std::optional<TimeAveraging>& averaging) {
  if (params.dim != 1)
    throw UnsupportedError("zero_point_model_full: the full double integral is the d = 1 model");
  const Damper& rhohat = params.rhohat();
  const double m = params.mass;
  const double pmax = rhohat.support_radius() / eps;

  // |chi|^2 kernel on a fine q grid (damper-side values, exact quadrature)
  const double Q = 400.0;
  const int nq = 8001;
  const double dq = 2.0 * Q / (nq - 1);
  const GaussRule& rc = damper_rule(params.chihat);
  VectorXd chi2(nq);
  for (int j = 0; j < nq; ++j) {
    const double q = -Q + j * dq;
    const double c = mollifier_value_1d(params.chihat, q, rc);
    chi2(j) = c * c;
  }

  double omega0 = 1.0;
  std::optional<SampledMollifier> omega;
  if (averaging) {
    omega = damper_to_mollifier(averaging->omega_hat);
    omega0 = mollifier_value_1d(averaging->omega_hat, 0.0, damper_rule(averaging->omega_hat));
  }

  const int np = 801;
  const GaussRule rp = gauss_legendre(np, -pmax, pmax);
  double acc = 0.0;
  for (int i = 0; i < np; ++i) {
    const double p1 = rp.nodes(i);
    const double r1 = rhohat(eps * p1);
    if (r1 == 0.0) continue;
    const double E1 = energy(p1, m);
    double inner = 0.0;
    for (int j = 0; j < nq; ++j) {
      const double q = -Q + j * dq;
      const double p2 = p1 - eps * q;
      const double r2 = rhohat(eps * p2);
      if (r2 == 0.0) continue;
      const double E2 = energy(p2, m);
      const double kin = (E1 * E2 + p1 * p2 + m * m) * (E1 + E2) / (4.0 * E1 * E2);
      double w;
      if (averaging) {
        w = omega->value((E1 - E2) * averaging->delta_t).real() / omega0;
      } else {
        w = std::cos((E1 - E2) * t_minus_txi);
      }
      const double simp = (j == 0 || j == nq - 1) ? 1.0 : ((j % 2 == 1) ? 4.0 : 2.0);
      inner += simp * r2 * kin * w * chi2(j);
    }
    acc += rp.weights(i) * r1 * inner * (dq / 3.0);
  }
  return 0.5 * acc / eps;
}

Complex chi_pair_moment(const FieldParams& params, int n) {
  if (params.dim != 1)
    throw UnsupportedError("chi_pair_moment: exposed for the d = 1 model");
  const SampledMollifier chi_xi = damper_to_mollifier(params.chihat);
  const SampledMollifier chi_x =
      params.chihat_x ? damper_to_mollifier(*params.chihat_x) : chi_xi;
  const auto& g = chi_xi.grid();
  VectorXcd integrand(g.n);
  for (Eigen::Index j = 0; j < g.n; ++j)
    integrand(j) = std::pow(g.point(j), n) * chi_xi.samples()(j) * std::conj(chi_x.samples()(j));
  return trapezoid(integrand, g.step);
}

}  // namespace eqft
