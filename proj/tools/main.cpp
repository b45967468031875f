#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "eqft/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"eqft: epsilon-regularized scalar field theory laboratory"};

  std::string config_path;
  std::string experiment;
  std::string out_dir;
  bool list = false;
  app.add_option("--config", config_path, "configuration file (key = value with [sections])");
  app.add_option("--experiment", experiment,
                 "experiment name or 'all' (overrides the configured one)");
  app.add_option("--out", out_dir, "output directory (defaults to the configured one)");
  app.add_flag("--list", list, "list available experiments");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : eqft::experiment_names()) std::cout << name << "\n";
    return 0;
  }

  try {
    eqft::ExperimentConfig config = config_path.empty()
                                        ? eqft::ExperimentConfig::defaults()
                                        : eqft::ExperimentConfig::load_file(config_path);
    const std::string target =
        experiment.empty() ? config.str("experiment.name") : experiment;
    config.set("experiment.name", target);
    const std::filesystem::path out =
        out_dir.empty() ? std::filesystem::path(config.str("experiment.out"))
                        : std::filesystem::path(out_dir);

    const auto outcomes = eqft::run_experiments({target}, config, out);

    nlohmann::json summary;
    summary["config"] = config.serialize();
    // timestamps stay in the JSON metadata; CSV bodies are bit-reproducible
    summary["generated_unix_time"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    bool all_pass = true;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& outcome : outcomes) {
      nlohmann::json run;
      run["experiment"] = outcome.name;
      run["seconds"] = outcome.seconds;
      nlohmann::json criteria = nlohmann::json::array();
      for (const auto& c : outcome.criteria) {
        criteria.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << outcome.name << ": " << c.name << " ("
                  << c.detail << ")\n";
        all_pass = all_pass && c.pass;
      }
      run["criteria"] = criteria;
      runs.push_back(run);
    }
    summary["runs"] = runs;
    summary["pass"] = all_pass;

    std::filesystem::create_directories(out);
    std::ofstream(out / "summary.json") << summary.dump(2) << "\n";
    std::cout << (all_pass ? "all criteria passed" : "criterion failure") << "\n";
    return all_pass ? 0 : 1;
  } catch (const std::invalid_argument& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
}
