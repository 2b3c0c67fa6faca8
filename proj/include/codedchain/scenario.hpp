#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codedchain/selection.hpp"

namespace codedchain {

// Full configuration of one simulation run. Parsed from a flat key = value
// text format ('#' starts a comment); unknown or duplicate keys are errors.
struct Scenario {
  // Run shape.
  std::uint32_t epochs = 200;
  std::uint64_t seed = 1;

  // Population.
  std::uint32_t n0_miners = 500;
  double lambda_join = 0.0;
  double lambda_leave = 0.0;
  double dishonest_fraction = 0.3;
  double straggler_cap = 0.4;
  std::uint32_t theta = 1;  // dishonesty flavor knob; inert for binary votes

  // Transaction generation.
  std::uint32_t batch_size = 500;
  double p_valid = 0.9;
  double fee_scale = 20.0;
  double age_scale = 6.0;
  double compute_shape = 1.5;
  double compute_scale = 42000.0;
  double size_mean = 3000.0;
  double size_std = 1000.0;
  std::uint32_t payload_bytes = 16;

  // Selection.
  SelectionMode selection_mode = SelectionMode::kStochastic;
  double compute_budget = 6.7e6;
  double size_budget = 1.2e6;
  double q1 = 0.9;
  double q2 = 0.9;
  double q3 = 0.9;
  std::uint32_t rounding_trials = 100;

  // Consensus.
  double beta = 0.1;
  double epsilon = 0.01;
  double margin = 0.01;

  // Coding.
  unsigned gf_bits = 16;
  std::uint32_t block_bytes = 16384;
  double precode_rate = 0.8;
  double eps_dec = 0.01;
  std::uint32_t mc_trials = 200;
  std::uint32_t max_group_wbar = 75;
  double soliton_c = 0.15;
  double soliton_delta = 0.5;
  std::uint32_t cache_budget = 0;

  // Symbols per block image, derived from block_bytes and gf_bits.
  std::size_t symbols_per_block() const { return block_bytes / (gf_bits / 8); }
};

// Throws std::invalid_argument naming the offending field.
void validate_scenario(const Scenario& scenario);

// Parse / emit the key = value format. parse_scenario reports the line
// number of the first error; serialize_scenario round-trips exactly.
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);

// Assigns one named field from its textual form (sweep axes reuse this).
void set_scenario_field(Scenario& scenario, const std::string& key,
                        const std::string& value);

// Listed in serialization order.
std::vector<std::string> scenario_field_names();

struct Preset {
  std::string name;
  Scenario scenario;
  std::string sweep_axis;            // empty when the preset is a single run
  std::vector<std::string> sweep_values;
};

// Named reference configurations: population drift (fig4), long growth
// (fig5), roster-size sweep (fig6), dishonesty sweep (fig7), dishonesty
// flavor sweep (fig8), straggler sweep (fig9).
Preset preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace codedchain
