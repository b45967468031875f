#include <doctest.h>

#include "eqft/mollifier.hpp"

using namespace eqft;

namespace {

const Damper& unit_damper() {
  static Damper d = build_damper(1.0, 2.0, 1);
  return d;
}

const SampledMollifier& unit_mollifier() {
  static SampledMollifier m = damper_to_mollifier(unit_damper());
  return m;
}

// Momentum scale chosen so the x^6-weighted quadratures are well conditioned
// in double precision (moments scale as s^-n under damper dilation).
const Damper& reference_damper() {
  static Damper d = build_damper(32.0, 64.0, 1);
  return d;
}

const SampledMollifier& reference_mollifier() {
  static SampledMollifier m = damper_to_mollifier(reference_damper(), 64.0, 32768);
  return m;
}

}  // namespace

TEST_CASE("damper plateau, support, and monotone transition") {
  const Damper d = build_damper(1.0, 2.0, 1);
  CHECK(d(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d(0.0) == 1.0);
  CHECK(d(3.0) == 0.0);
  CHECK(d(2.0) == 0.0);
  const double mid = d(1.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // monotone decreasing on the transition band
  double prev = d(1.0);
  for (double p = 1.05; p < 2.0; p += 0.05) {
    const double v = d(p);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("damper construction errors") {
  CHECK_THROWS_AS(build_damper(2.0, 1.0, 1), std::invalid_argument);
  GridSpec coarse;
  coarse.points = 512;
  // transition band [a, b] with fewer than 16 samples
  CHECK_THROWS_AS(build_damper(1.0, 1.005, 1, coarse), std::invalid_argument);
}

TEST_CASE("damper smoothness proxy: finite differences continuous across a and b") {
  const Damper d = build_damper(1.0, 2.0, 1);
  // sixth-order finite differences on a fine grid around the joints stay bounded
  const double h = 1e-2;
  for (double center : {1.0, 2.0}) {
    for (int k = 1; k <= 6; ++k) {
      // central k-th difference scaled by h^-k
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double binom = std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(k - j + 1.0));
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * d(center + (0.5 * k - j) * h);
      }
      CHECK(std::abs(acc / std::pow(h, k)) < 2e4);  // bounded derivative proxy
    }
  }
}

TEST_CASE("product of dampers is a damper") {
  const Damper d1 = build_damper(1.0, 2.0, 1);
  const Damper d2 = build_damper(0.8, 1.6, 1);
  const Damper p = d1.product(d2);
  CHECK(p.plateau_radius() == doctest::Approx(0.8));
  CHECK(p.support_radius() == doctest::Approx(1.6));
  CHECK(p(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p(1.7) == 0.0);
  CHECK(p(1.2) == doctest::Approx(d1(1.2) * d2(1.2)));
}

TEST_CASE("mollifier moments: unit mass and vanishing higher moments") {
  const SampledMollifier& rho = reference_mollifier();
  CHECK(std::abs(moment(rho, 1, 0) - Complex(1.0, 0.0)) < 1e-10);
  for (int n = 1; n <= 6; ++n) CHECK(std::abs(moment(rho, 1, n)) < 1e-8);
  // rho real for a Hermitian (real even) damper
  CHECK(rho.real_within(1e-12));
  // positivity of int rho^2
  CHECK(moment(rho, 2, 0).real() > 0.0);
}

TEST_CASE("mollifier rapid decay proxy") {
  // Schwartz-class proxy: the (1+|x|)^8-weighted envelope attains its sup in
  // the interior of the signal region and has decayed by orders of magnitude
  // at the edge of that region.
  const SampledMollifier& rho = reference_mollifier();
  const double peak = rho.samples().cwiseAbs().maxCoeff();
  double worst = 0.0, at_edge = 0.0;
  for (Eigen::Index j = 0; j < rho.grid().n; ++j) {
    const double a = std::abs(rho.samples()(j));
    if (a < 1e-15 * peak) continue;
    const double w = a * std::pow(1.0 + std::abs(rho.grid().point(j)), 8);
    worst = std::max(worst, w);
    at_edge = w;
  }
  CHECK(std::isfinite(worst));
  CHECK(at_edge < 1e-4 * worst);
}

TEST_CASE("narrow transition band approaches the sinc kernel") {
  // box-like damper: a = 1, b = 1.2; oracle = transform of the ideal indicator
  GridSpec gs;
  gs.points = 8192;
  const Damper box = build_damper(1.0, 1.2, 1, gs);
  const SampledMollifier rho = damper_to_mollifier(box);
  for (double x : {0.5, 1.0, 2.0, 3.5, 5.0}) {
    const double ideal = std::sin(1.1 * x) / (pi * x);  // cutoff at the band midpoint
    CHECK(std::abs(rho.value(x).real() - ideal) < 0.02 * std::max(std::abs(ideal), 0.05));
  }
}

TEST_CASE("FFT transform agrees with direct quadrature") {
  const SampledMollifier& rho = unit_mollifier();
  GaussRule rule = gauss_legendre(800, 0.0, 2.0);
  for (Eigen::Index j : {65536L, 65558L, 65736L, 66040L}) {
    const double x = rho.grid().point(j);
    const double direct = mollifier_value_1d(unit_damper(), x, rule);
    CHECK(rho.samples()(j).real() == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("3D radial mollifier from a radial damper") {
  const Damper d3 = build_damper(64.0, 128.0, 3);
  const SampledMollifier rho = damper_to_mollifier(d3, 64.0, 32768);
  CHECK(std::abs(moment(rho, 1, MultiIndex{0, 0, 0}) - Complex(1.0, 0.0)) < 1e-10);
  for (int n1 = 0; n1 <= 4; ++n1)
    for (int n2 = 0; n2 + n1 <= 4; ++n2)
      for (int n3 = 0; n3 + n2 + n1 <= 4; ++n3)
        if (n1 + n2 + n3 > 0)
          CHECK(std::abs(moment(rho, 1, MultiIndex{n1, n2, n3})) < 1e-8);
}

TEST_CASE("convolution of suitable mollifiers is suitable") {
  const SampledMollifier& rho = reference_mollifier();
  const SampledMollifier conv = self_correlation(rho);
  CHECK(std::abs(moment(conv, 1, 0) - Complex(1.0, 0.0)) < 1e-10);
  for (int n = 1; n <= 6; ++n) CHECK(std::abs(moment(conv, 1, n)) < 1e-8);
  // even and real
  CHECK(conv.real_within(1e-10));
  CHECK(std::abs(conv.value(0.13).real() - conv.value(-0.13).real()) < 1e-10);
}

TEST_CASE("grid convolution path matches the damper-product path") {
  const SampledMollifier& rho = unit_mollifier();
  SampledMollifier no_damper =
      SampledMollifier::from_parts(1, rho.grid(), rho.samples(), nullptr);
  const SampledMollifier via_fft = convolve_mollifiers(no_damper, no_damper);
  const SampledMollifier via_damper = convolve_mollifiers(rho, rho);
  for (double x : {0.0, 0.9, 2.7}) {
    CHECK(via_fft.value(x).real() == doctest::Approx(via_damper.value(x).real()).epsilon(1e-8));
  }
}

TEST_CASE("convolution against a narrow kernel approaches identity") {
  const SampledMollifier& rho = unit_mollifier();
  // a much wider plateau in momentum = much narrower kernel in x
  const Damper wide = build_damper(8.0, 10.0, 1);
  const SampledMollifier narrow = damper_to_mollifier(wide);
  const SampledMollifier conv = convolve_mollifiers(rho, narrow);
  double sup = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.25)
    sup = std::max(sup, std::abs(conv.value(x) - rho.value(x)));
  CHECK(sup < 1e-6);
}

TEST_CASE("scaled evaluation and scaling identities") {
  const SampledMollifier& rho = reference_mollifier();
  CHECK(scaled_eval(rho, 1.0, 0.037).value == rho.value(0.037));
  // unit mass at every scale
  for (double eps : {0.5, 0.1, 0.02}) {
    const SampledMollifier r = rho.scaled(eps);
    CHECK(std::abs(moment(r, 1, 0) - Complex(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(moment(r, 1, 4)) < 1e-8);
  }
  // damper scaling dilates the argument only
  const Damper& d = unit_damper();
  for (double eps : {0.5, 0.1, 0.02}) CHECK(scaled_eval(d, eps, 0.0) == 1.0);
  CHECK(scaled_eval(d, 0.5, 3.0) == doctest::Approx(d(1.5)));
  // out-of-range evaluation flags and returns zero
  ScaledValue sv = scaled_eval(rho, 1e-3, 100.0);
  CHECK(sv.out_of_range);
  CHECK(sv.value == Complex(0.0, 0.0));
}

TEST_CASE("complex moment mollifier: constrained moments vanish") {
  MomentMollifierOptions opt;
  opt.max_order = 2;
  const SampledMollifier rho = build_complex_moment_mollifier(opt);
  CHECK(std::abs(moment(rho, 1, 0) - Complex(1.0, 0.0)) < 1e-8);
  for (int n = 1; n <= 2; ++n) {
    CHECK(std::abs(moment(rho, 1, n)) < 1e-8);
    CHECK(std::abs(moment(rho, 2, n)) < 1e-8);
  }
  CHECK(std::abs(moment(rho, 2, 0).imag()) < 1e-8);
  // genuinely complex
  CHECK_FALSE(rho.real_within(1e-3));
}

TEST_CASE("complex moment mollifier: degenerate and obstructed cases") {
  MomentMollifierOptions trivial;
  trivial.max_order = 0;
  const SampledMollifier rho0 = build_complex_moment_mollifier(trivial);
  CHECK(std::abs(moment(rho0, 1, 0) - Complex(1.0, 0.0)) < 1e-8);
  CHECK(rho0.real_within(1e-12));

  MomentMollifierOptions real_req;
  real_req.max_order = 2;
  real_req.require_real = true;
  CHECK_THROWS_AS(build_complex_moment_mollifier(real_req), ConstructionError);
}

TEST_CASE("error paths: window, grid mismatch, bad scale") {
  // window far too small for the Schwartz tails
  CHECK_THROWS_AS(damper_to_mollifier(unit_damper(), 4.0, 512), GridExtentError);

  // grid mismatch in the sample-space convolution
  const SampledMollifier a = damper_to_mollifier(reference_damper(), 64.0, 32768);
  SampledMollifier b = SampledMollifier::from_parts(
      1, UniformGrid::symmetric(32.0, 16384),
      VectorXcd::Zero(16384), nullptr);
  CHECK_THROWS_AS(convolve_mollifiers(
                      SampledMollifier::from_parts(1, a.grid(), a.samples(), nullptr), b),
                  IncompatibilityError);

  CHECK_THROWS_AS(scaled_eval(a, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(a.scaled(-1.0), std::invalid_argument);
}
