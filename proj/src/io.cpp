#include "eqft/io.hpp"

#include <fstream>

#include <json.hpp>

namespace eqft {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_complex_csv(Complex v) {
  return format_double(v.real()) + "," + format_double(v.imag());
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write " + path.string());
  return out;
}

std::filesystem::path json_side(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

}  // namespace

void write_mollifier_csv(const std::filesystem::path& csv_path, const SampledMollifier& rho) {
  auto out = open_out(csv_path);
  out << "x,re,im\n";
  for (Eigen::Index j = 0; j < rho.grid().n; ++j)
    out << format_double(rho.grid().point(j)) << "," << format_complex_csv(rho.samples()(j))
        << "\n";

  nlohmann::json header;
  header["d"] = rho.dim();
  header["grid_step"] = rho.grid_step();
  if (const Damper* damper = rho.source_damper()) {
    header["a"] = damper->plateau_radius();
    header["b"] = damper->support_radius();
  }
  open_out(json_side(csv_path)) << header.dump(2) << "\n";
}

void write_sweep_csv(const std::filesystem::path& csv_path, const EpsilonSweep& sweep) {
  auto out = open_out(csv_path);
  out << "epsilon,value_re,value_im,abs\n";
  for (Eigen::Index i = 0; i < sweep.eps.size(); ++i)
    out << format_double(sweep.eps(i)) << "," << format_complex_csv(sweep.values(i)) << ","
        << format_double(std::abs(sweep.values(i))) << "\n";

  nlohmann::json fit;
  fit["slope"] = sweep.fit.slope;
  fit["prefactor"] = sweep.fit.prefactor;
  fit["r2"] = sweep.fit.r2;
  fit["below_floor"] = sweep.fit.below_floor;
  open_out(json_side(csv_path)) << fit.dump(2) << "\n";
}

void write_operator_coo(const std::filesystem::path& csv_path, const FockOperator& op,
                        const ModeSet& modes, double eps, double g, int power_N) {
  auto out = open_out(csv_path);
  out << "row,col,re,im\n";
  for (int k = 0; k < op.mat.outerSize(); ++k)
    for (SparseCd::InnerIterator it(op.mat, k); it; ++it)
      out << it.row() << "," << it.col() << "," << format_complex_csv(it.value()) << "\n";

  nlohmann::json header;
  header["basis"] = "occupation vectors, graded lexicographic order";
  header["n_max"] = op.basis->n_max();
  header["band"] = op.band;
  header["hermitian"] = op.hermitian;
  header["eps"] = eps;
  header["g"] = g;
  header["N"] = power_N;
  nlohmann::json mode_list = nlohmann::json::array();
  for (const auto& m : modes.modes)
    mode_list.push_back({{"p", m.p(0)}, {"E", m.E}, {"w", m.w}});
  header["modes"] = mode_list;
  open_out(json_side(csv_path)) << header.dump(2) << "\n";
}

void write_delta_profile(const std::filesystem::path& csv_path,
                         const std::vector<DeltaSample>& samples) {
  auto out = open_out(csv_path);
  out << "t,r,re,im\n";
  for (const auto& s : samples)
    out << format_double(s.t) << "," << format_double(s.r) << "," << format_complex_csv(s.value)
        << "\n";
}

void write_dyson_csv(const std::filesystem::path& csv_path, const std::vector<DysonRow>& rows) {
  auto out = open_out(csv_path);
  out << "order,g,t,series_error,stated_bound,proof_bound,bound_satisfied\n";
  for (const auto& r : rows)
    out << r.order << "," << format_double(r.g) << "," << format_double(r.t) << ","
        << format_double(r.series_error) << "," << format_double(r.stated_bound) << ","
        << format_double(r.proof_bound) << "," << (r.bound_satisfied ? 1 : 0) << "\n";
}

}  // namespace eqft
