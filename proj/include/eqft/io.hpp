#pragma once

#include <filesystem>
#include <string>

#include "eqft/fock.hpp"
#include "eqft/genfunc.hpp"

namespace eqft {

/// Shortest round-trippable decimal form of a double; CSV bodies built from
/// these are byte-identical across runs with the same config.
std::string format_double(double v);
std::string format_complex_csv(Complex v);  // "re,im"

/// CSV (x, Re, Im) plus a JSON side file with the damper geometry
/// (a, b, d, grid_step).
void write_mollifier_csv(const std::filesystem::path& csv_path, const SampledMollifier& rho);

/// CSV (epsilon, value_re, value_im, abs) plus JSON fit {slope, prefactor, r2}.
void write_sweep_csv(const std::filesystem::path& csv_path, const EpsilonSweep& sweep);

/// Coordinate-list sparse export (row, col, Re, Im) with a JSON header naming
/// the basis contract (graded lexicographic occupation order).
void write_operator_coo(const std::filesystem::path& csv_path, const FockOperator& op,
                        const ModeSet& modes, double eps, double g, int power_N);

/// Delta profile rows (t, r, Re, Im).
struct DeltaSample {
  double t, r;
  Complex value;
};
void write_delta_profile(const std::filesystem::path& csv_path,
                         const std::vector<DeltaSample>& samples);

/// Dyson series rows (order, g, t, series_error, stated_bound, proof_bound,
/// bound_satisfied).
struct DysonRow {
  int order;
  double g, t, series_error, stated_bound, proof_bound;
  bool bound_satisfied;
};
void write_dyson_csv(const std::filesystem::path& csv_path, const std::vector<DysonRow>& rows);

}  // namespace eqft
