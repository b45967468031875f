#include "eqft/genfunc.hpp"

namespace eqft {

VectorXd eps_grid(double start, int count, double ratio) {
  VectorXd eps(count);
  double e = start;
  for (int i = 0; i < count; ++i, e *= ratio) eps(i) = e;
  return eps;
}

namespace {

// derivative of the sampled mollifier by a centered 4th-order stencil
Complex sample_derivative(const SampledMollifier& rho, double u) {
  const double h = rho.grid_step();
  return (-rho.value(u + 2 * h) + 8.0 * rho.value(u + h) - 8.0 * rho.value(u - h) +
          rho.value(u - 2 * h)) /
         (12.0 * h);
}

}  // namespace

Representative embed_distribution(BuiltinDistribution kind, const SampledMollifier& rho,
                                  double wavenumber) {
  if (rho.dim() != 1)
    throw UnsupportedError("embed_distribution: built-ins are implemented for d = 1");
  Representative rep;
  switch (kind) {
    case BuiltinDistribution::Delta:
      rep.label = "iota(delta)";
      rep.eval = [rho](double eps, double x) { return rho.value(-x / eps) / eps; };
      break;
    case BuiltinDistribution::DeltaPrime:
      rep.label = "iota(delta')";
      rep.eval = [rho](double eps, double x) {
        return -sample_derivative(rho, -x / eps) / (eps * eps);
      };
      break;
    case BuiltinDistribution::Heaviside: {
      rep.label = "iota(theta)";
      // cumulative mass of rho from the left edge of its grid
      const Eigen::Index n = rho.grid().n;
      auto cum = std::make_shared<VectorXcd>(n);
      Complex acc(0.0, 0.0);
      (*cum)(0) = acc;
      for (Eigen::Index j = 1; j < n; ++j) {
        acc += 0.5 * (rho.samples()(j - 1) + rho.samples()(j)) * rho.grid_step();
        (*cum)(j) = acc;
      }
      const Complex total = acc;
      const UniformGrid grid = rho.grid();
      rep.eval = [cum, total, grid](double eps, double x) {
        // (H * rho_eps-vee)(x) = int_{-x/eps}^{inf} rho
        const double u = -x / eps;
        if (u <= grid.origin) return total;
        if (u >= grid.last()) return Complex(0.0, 0.0);
        return total - interp_cubic<Complex>(*cum, grid, u);
      };
      break;
    }
    case BuiltinDistribution::PlaneWave: {
      rep.label = "iota(plane wave)";
      const Damper* damper = rho.source_damper();
      if (damper) {
        const Damper d = *damper;
        const double k = wavenumber;
        rep.eval = [d, k](double eps, double x) {
          return std::exp(Complex(0.0, k * x)) * d(eps * k);
        };
      } else {
        const double k = wavenumber;
        SampledMollifier r = rho;
        rep.eval = [r, k](double eps, double x) {
          // rhohat(eps k) by quadrature of the samples
          Complex acc(0.0, 0.0);
          for (Eigen::Index j = 0; j < r.grid().n; ++j)
            acc += r.samples()(j) * std::exp(Complex(0.0, eps * k * r.grid().point(j)));
          acc *= r.grid_step();
          return std::exp(Complex(0.0, k * x)) * acc;
        };
      }
      break;
    }
  }
  return rep;
}

Representative embed_function(const std::function<Complex(double)>& f,
                              const SampledMollifier& rho, const std::string& label) {
  if (rho.dim() != 1) throw UnsupportedError("embed_function: d = 1 only");
  Representative rep;
  rep.label = label;
  SampledMollifier r = rho;
  rep.eval = [r, f](double eps, double x) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index j = 0; j < r.grid().n; ++j)
      acc += f(x + eps * r.grid().point(j)) * r.samples()(j);
    return acc * r.grid_step();
  };
  return rep;
}

namespace {

Complex sift_on_stride(const std::function<Complex(double)>& f, const SampledMollifier& rho,
                       int power, const Damper& chihat, double eps, double a,
                       Eigen::Index stride) {
  const auto& g = rho.grid();
  Complex acc(0.0, 0.0);
  if (rho.dim() == 1) {
    for (Eigen::Index j = 0; j < g.n; j += stride) {
      const double z = g.point(j);
      Complex rz = rho.samples()(j);
      Complex rm = rz;
      for (int k = 1; k < power; ++k) rm *= rz;
      acc += chihat(eps * (a + eps * z)) * f(a + eps * z) * rm;
    }
    acc *= g.step * static_cast<double>(stride);
    return acc / std::pow(eps, rho.dim() * (power - 1));
  }
  // d = 3, radial sampler about a = 0
  if (std::abs(a) > 1e-12)
    throw UnsupportedError("sift_integral: d = 3 supports radial samplers about a = 0 only");
  for (Eigen::Index j = 0; j < g.n; j += stride) {
    const double z = g.point(j);
    Complex rz = rho.samples()(j);
    Complex rm = rz;
    for (int k = 1; k < power; ++k) rm *= rz;
    acc += 4.0 * pi * z * z * chihat(eps * eps * z) * f(eps * z) * rm;
  }
  acc *= g.step * static_cast<double>(stride);
  return acc / std::pow(eps, rho.dim() * (power - 1));
}

}  // namespace

Complex sift_integral(const std::function<Complex(double)>& f, const SampledMollifier& rho,
                      int power, const Damper& chihat, double eps, double a) {
  if (power < 1) throw std::invalid_argument("sift_integral: power must be >= 1");
  const Complex full = sift_on_stride(f, rho, power, chihat, eps, a, 1);
  const Complex half = sift_on_stride(f, rho, power, chihat, eps, a, 2);
  const double scale = std::max({std::abs(full), std::abs(half), 1e-12});
  if (std::abs(full - half) > 1e-8 * scale && std::abs(full - half) > 1e-13)
    throw AccuracyError("sift_integral: Richardson disagreement " +
                            std::to_string(std::abs(full - half) / scale),
                        std::abs(full - half) / scale);
  return full;
}

TailIntegral damper_tail_integral(const std::function<Complex(double)>& f, const Damper& chihat,
                                  double eps, double half_width, int points) {
  if (points % 2 == 0) ++points;
  VectorXcd damped(points), plain(points);
  const double step = 2.0 * half_width / (points - 1);
  for (int j = 0; j < points; ++j) {
    const double x = -half_width + j * step;
    const Complex fx = f(x);
    plain(j) = fx;
    damped(j) = fx * chihat(eps * x);
  }
  return {simpson(damped, step), simpson(plain, step)};
}

EpsilonSweep asymptotic_order(const std::function<Complex(double)>& value_of_eps,
                              const VectorXd& eps_list, double floor) {
  if (eps_list.size() < 5)
    throw std::invalid_argument("asymptotic_order: need >= 5 eps points");
  for (Eigen::Index i = 1; i < eps_list.size(); ++i)
    if (!(eps_list(i) < eps_list(i - 1)))
      throw std::invalid_argument("asymptotic_order: eps must be strictly decreasing");
  EpsilonSweep sweep;
  sweep.eps = eps_list;
  sweep.values.resize(eps_list.size());
  for (Eigen::Index i = 0; i < eps_list.size(); ++i) {
    sweep.values(i) = value_of_eps(eps_list(i));
    if (!std::isfinite(std::abs(sweep.values(i))))
      throw AccuracyError("asymptotic_order: non-finite value in sweep", 0.0);
  }
  VectorXd mags = sweep.values.cwiseAbs();
  sweep.fit = fit_power_law(sweep.eps, mags, floor);
  sweep.kind = sweep.fit.below_floor ? EpsilonSweep::Kind::BelowFloor : EpsilonSweep::Kind::Slope;
  return sweep;
}

AssociationReport associated_to_zero(const Representative& rep, const VectorXd& eps_list) {
  // fixed witness set: three compactly supported plateau bumps
  struct Witness {
    double center, plateau, support;
  };
  const std::vector<Witness> witnesses = {{0.0, 1.0, 2.0}, {1.5, 0.5, 1.0}, {-2.5, 1.5, 3.0}};
  std::vector<Damper> bumps;
  for (const auto& w : witnesses) bumps.push_back(build_damper(w.plateau, w.support, 1));

  auto value = [&](double eps) {
    double worst = 0.0;
    Complex worst_val(0.0, 0.0);
    for (size_t i = 0; i < witnesses.size(); ++i) {
      const auto& w = witnesses[i];
      const int n = 4001;
      VectorXcd integrand(n);
      const double step = 2.0 * w.support / (n - 1);
      for (int j = 0; j < n; ++j) {
        const double x = w.center - w.support + j * step;
        integrand(j) = rep.eval(eps, x) * bumps[i](x - w.center);
      }
      const Complex v = simpson(integrand, step);
      if (std::abs(v) > worst) {
        worst = std::abs(v);
        worst_val = v;
      }
    }
    return worst_val;
  };

  AssociationReport report;
  report.sweep = asymptotic_order(value, eps_list, 1e-13);
  const double first = std::abs(report.sweep.values(0));
  const double last = std::abs(report.sweep.values(report.sweep.values.size() - 1));
  report.associated_to_zero = report.sweep.kind == EpsilonSweep::Kind::BelowFloor ||
                              last < std::max(1e-10, 0.2 * first);
  return report;
}

}  // namespace eqft
