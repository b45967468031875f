#include "eqft/grid.hpp"

#include <Eigen/Eigenvalues>

namespace eqft {

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  // Golub-Welsch on the Legendre Jacobi matrix.
  VectorXd diag = VectorXd::Zero(n);
  VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    sub(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J.diagonal() = diag;
  if (n > 1) {
    J.diagonal(1) = sub;
    J.diagonal(-1) = sub;
  }
  es.compute(J);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes(i) = mid + half * es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights(i) = 2.0 * v0 * v0 * half;
  }
  return rule;
}

GaussRule gauss_weighted(int n, double a, double b, const std::function<double(double)>& w,
                         int resolution) {
  if (n < 1) throw std::invalid_argument("gauss_weighted: n must be positive");
  // Discretized Stieltjes on a fine trapezoid grid (spectrally accurate for
  // the smooth compactly supported weights used here), then Golub-Welsch on
  // the resulting Jacobi matrix.
  GaussRule fine;
  fine.nodes.resize(resolution);
  fine.weights.resize(resolution);
  const double step = (b - a) / (resolution - 1);
  for (int i = 0; i < resolution; ++i) {
    fine.nodes(i) = a + i * step;
    fine.weights(i) = (i == 0 || i == resolution - 1) ? 0.5 * step : step;
  }
  VectorXd wt(resolution);
  for (int i = 0; i < resolution; ++i) wt(i) = fine.weights(i) * w(fine.nodes(i));
  const double total = wt.sum();
  if (!(total > 0.0)) throw std::invalid_argument("gauss_weighted: weight has no mass");

  VectorXd alpha(n), beta(n);  // beta(0) = total mass
  Eigen::MatrixXd P(resolution, 2);
  P.col(0).setZero();
  P.col(1).setOnes();
  int prev = 0, cur = 1;
  beta(0) = total;
  for (int k = 0; k < n; ++k) {
    double nrm = 0.0, xnrm = 0.0;
    for (int i = 0; i < resolution; ++i) {
      const double pk = P(i, cur);
      nrm += wt(i) * pk * pk;
      xnrm += wt(i) * fine.nodes(i) * pk * pk;
    }
    alpha(k) = xnrm / nrm;
    if (k + 1 < n) {
      double nrm_next = 0.0;
      for (int i = 0; i < resolution; ++i) {
        const double pnext =
            (fine.nodes(i) - alpha(k)) * P(i, cur) - (k > 0 ? beta(k) * P(i, prev) : 0.0);
        P(i, prev) = pnext;
        nrm_next += wt(i) * pnext * pnext;
      }
      std::swap(prev, cur);
      beta(k + 1) = nrm_next / nrm;
    }
  }

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J.diagonal() = alpha;
  for (int k = 1; k < n; ++k) {
    const double s = std::sqrt(beta(k));
    J(k, k - 1) = s;
    J(k - 1, k) = s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes(i) = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights(i) = beta(0) * v0 * v0;
  }
  return rule;
}

PowerLawFit fit_power_law(const VectorXd& eps, const VectorXd& absval, double floor) {
  if (eps.size() != absval.size() || eps.size() < 2)
    throw std::invalid_argument("fit_power_law: need matching vectors with >= 2 points");
  PowerLawFit fit;
  if ((absval.array() < floor).all()) {
    fit.below_floor = true;
    return fit;
  }
  const Eigen::Index n = eps.size();
  VectorXd lx(n), ly(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lx(i) = std::log(eps(i));
    ly(i) = std::log(std::max(absval(i), 1e-300));
  }
  const double mx = lx.mean(), my = ly.mean();
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    sxx += (lx(i) - mx) * (lx(i) - mx);
    sxy += (lx(i) - mx) * (ly(i) - my);
    syy += (ly(i) - my) * (ly(i) - my);
  }
  fit.slope = sxy / sxx;
  fit.prefactor = std::exp(my - fit.slope * mx);
  fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace eqft
