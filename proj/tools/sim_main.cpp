#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codedchain/runner.hpp"
#include "codedchain/scenario.hpp"

namespace {

codedchain::Scenario load_scenario(const std::string& scenario_path,
                                   const std::string& preset_name,
                                   std::string& sweep_axis,
                                   std::vector<std::string>& sweep_values,
                                   std::string& label) {
  if (!scenario_path.empty() && !preset_name.empty()) {
    throw CLI::ValidationError("give either --scenario or --preset, not both");
  }
  if (!scenario_path.empty()) {
    std::ifstream in(scenario_path, std::ios::binary);
    if (!in) {
      throw CLI::ValidationError("cannot read scenario file: " + scenario_path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    label = std::filesystem::path(scenario_path).stem().string();
    return codedchain::parse_scenario(text.str());
  }
  if (!preset_name.empty()) {
    auto preset = codedchain::preset_by_name(preset_name);
    sweep_axis = preset.sweep_axis;
    sweep_values = preset.sweep_values;
    label = preset.name;
    return preset.scenario;
  }
  throw CLI::ValidationError("one of --scenario or --preset is required");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"codedchain-sim: deterministic epoch simulator for a raptor-coded ledger"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string preset_name;
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "scenario file (key = value lines)");
    cmd->add_option("--preset", preset_name, "built-in preset name (see `presets`)");
    cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", seeds, "master seed(s); default: the scenario's seed");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario, emit CSV files");
  add_common(run_cmd);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a one-axis parameter sweep, emit CSV files");
  add_common(sweep_cmd);
  std::string axis;
  std::vector<std::string> values;
  sweep_cmd->add_option("--axis", axis, "scenario key to sweep (preset default if set)");
  sweep_cmd->add_option("--values", values, "values for the swept key");

  CLI::App* presets_cmd = app.add_subcommand("presets", "list built-in presets");
  CLI::App* schema_cmd = app.add_subcommand("schema", "print the CSV column schema");
  CLI::App* show_cmd =
      app.add_subcommand("print-scenario", "print the resolved scenario text");
  add_common(show_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets_cmd->parsed()) {
      for (const auto& name : codedchain::preset_names()) {
        auto preset = codedchain::preset_by_name(name);
        std::cout << name;
        if (!preset.sweep_axis.empty()) {
          std::cout << "  (sweeps " << preset.sweep_axis << ")";
        }
        std::cout << '\n';
      }
      return 0;
    }
    if (schema_cmd->parsed()) {
      std::cout << codedchain::schema_text();
      return 0;
    }

    std::string preset_axis;
    std::vector<std::string> preset_values;
    std::string label;
    codedchain::Scenario scenario =
        load_scenario(scenario_path, preset_name, preset_axis, preset_values, label);
    if (seeds.empty()) {
      seeds.push_back(scenario.seed);
    }

    if (show_cmd->parsed()) {
      std::cout << codedchain::serialize_scenario(scenario);
      return 0;
    }
    if (run_cmd->parsed()) {
      auto summaries =
          codedchain::run_scenario_files(scenario, seeds, out_dir, label);
      std::cout << codedchain::summaries_to_csv(summaries);
      return 0;
    }
    // sweep
    if (axis.empty()) {
      axis = preset_axis;
      if (values.empty()) {
        values = preset_values;
      }
    }
    if (axis.empty()) {
      throw CLI::ValidationError("--axis is required (this preset has no default sweep)");
    }
    if (values.empty()) {
      throw CLI::ValidationError("--values is required");
    }
    auto rows = codedchain::run_sweep_files(scenario, axis, values, seeds, out_dir,
                                            label);
    std::cout << codedchain::sweep_to_csv(rows);
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
