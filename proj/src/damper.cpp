#include "eqft/damper.hpp"

namespace eqft {

namespace {

// exp(-k/t) glue; S(t) rises smoothly from 0 at t<=0 to 1 at t>=1.
double smooth_step(double t, double k) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double g0 = std::exp(-k / t);
  const double g1 = std::exp(-k / (1.0 - t));
  return g0 / (g0 + g1);
}

}  // namespace

Damper::Damper(double a, double b, int dim, const GridSpec& grid) : a_(a), b_(b), dim_(dim) {
  const double k = grid.glue_stiffness;
  const double width = b - a;
  profile_ = [a, b, width, k](double p) {
    if (p <= a) return 1.0;
    if (p >= b) return 0.0;
    return smooth_step((b - p) / width, k);
  };
  grid_ = UniformGrid::radial(b * grid.extent_factor, grid.points);
  resample();
}

void Damper::resample() {
  samples_.resize(grid_.n);
  for (Eigen::Index j = 0; j < grid_.n; ++j) samples_(j) = profile_(grid_.point(j));
}

Damper Damper::product(const Damper& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("Damper::product: dimension mismatch");
  Damper out;
  out.a_ = std::min(a_, other.a_);
  out.b_ = std::min(b_, other.b_);
  out.dim_ = dim_;
  auto f = profile_, g = other.profile_;
  out.profile_ = [f, g](double p) { return f(p) * g(p); };
  out.grid_ = (grid_.step < other.grid_.step) ? grid_ : other.grid_;
  out.resample();
  return out;
}

Damper build_damper(double a, double b, int dim, const GridSpec& grid) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("build_damper: need 0 < a < b");
  if (dim != 1 && dim != 3) throw std::invalid_argument("build_damper: dim must be 1 or 3");
  if (grid.points < 512) throw std::invalid_argument("build_damper: need >= 512 grid points");
  const double step = b * grid.extent_factor / static_cast<double>(grid.points - 1);
  if ((b - a) / step < 16.0)
    throw std::invalid_argument("build_damper: grid too coarse for the [a,b] transition");
  return Damper(a, b, dim, grid);
}

}  // namespace eqft
