#include <doctest.h>

#include "eqft/config.hpp"
#include "eqft/io.hpp"

using namespace eqft;

TEST_CASE("config defaults cover every field and round-trip bit-exactly") {
  const ExperimentConfig base = ExperimentConfig::defaults();
  const std::string text = base.serialize();
  const ExperimentConfig reparsed = ExperimentConfig::parse(text);
  CHECK(reparsed == base);
  CHECK(reparsed.serialize() == text);
}

TEST_CASE("config edits survive the round trip") {
  ExperimentConfig c = ExperimentConfig::defaults();
  c.set("zpe.eps_start", 0.12345678901234567);
  c.set("scattering.steps", 129);
  const ExperimentConfig back = ExperimentConfig::parse(c.serialize());
  CHECK(back == c);
  CHECK(back.number("zpe.eps_start") == 0.12345678901234567);
  CHECK(back.integer("scattering.steps") == 129);
}

TEST_CASE("config rejects malformed input with a field path") {
  CHECK_THROWS_AS(ExperimentConfig::parse("[zpe\nx = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[zpe]\nbogus_field = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[zpe]\nmass\n"), std::invalid_argument);
  ExperimentConfig c = ExperimentConfig::parse("[zpe]\nmass = oops\n");
  CHECK_THROWS_AS(c.number("zpe.mass"), std::invalid_argument);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig c = ExperimentConfig::parse(
      "# a comment\n\n[scattering]\n# another\ng = 0.25\n");
  CHECK(c.number("scattering.g") == 0.25);
}

TEST_CASE("deterministic double formatting round-trips") {
  for (double v : {1.0, 0.1, 1e-300, 3.141592653589793, -2.2250738585072014e-308}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

#include <fstream>
#include <sstream>

#include "eqft/experiments.hpp"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("identical configs produce byte-identical CSV bodies") {
  const ExperimentConfig cfg = ExperimentConfig::defaults();
  const auto base = std::filesystem::temp_directory_path() / "eqft_determinism";
  std::filesystem::remove_all(base);
  run_experiment("sifting", cfg, base / "a");
  run_experiment("sifting", cfg, base / "b");
  for (const char* f : {"sift_m1_error.csv", "sift_m2_scaled.csv"}) {
    const std::string one = slurp(base / "a" / "sifting" / f);
    const std::string two = slurp(base / "b" / "sifting" / f);
    CHECK(one.size() > 0);
    CHECK(one == two);
  }
}

TEST_CASE("invalid configuration is rejected before computation") {
  ExperimentConfig cfg = ExperimentConfig::defaults();
  cfg.set("sifting.eps_count", 0);  // empty sweep
  const auto dir = std::filesystem::temp_directory_path() / "eqft_invalid";
  CHECK_THROWS_AS(run_experiment("sifting", cfg, dir), std::invalid_argument);
  ExperimentConfig cfg2 = ExperimentConfig::defaults();
  cfg2.set("field.rho_a", 3.0);  // a >= b
  CHECK_THROWS_AS(run_experiment("norms", cfg2, dir), std::invalid_argument);
}
