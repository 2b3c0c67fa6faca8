#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "codedchain/engine.hpp"
#include "codedchain/scenario.hpp"

namespace codedchain {

// Per-run aggregates derived from the epoch records. Throughput counts only
// correctly confirmed transactions (confirmed and truly valid).
struct RunSummary {
  std::uint64_t seed = 0;
  std::uint32_t epochs = 0;
  double mean_miners = 0.0;
  double throughput = 0.0;             // mean correct confirmations per epoch
  double normalized_throughput = 0.0;  // throughput / batch size
  double mean_gini = 0.0;
  double mean_entropy = 0.0;
  double final_storage = 0.0;
  std::uint64_t wrong_total = 0;
};

// Per-epoch CSV: header + one row per record, LF endings, reals with six
// significant digits. Byte-identical across runs of the same (scenario, seed).
std::string records_to_csv(const std::vector<EpochRecord>& records);

RunSummary summarize(std::uint64_t seed, std::uint32_t batch_size,
                     const std::vector<EpochRecord>& records);

std::string summaries_to_csv(const std::vector<RunSummary>& summaries);

struct SweepRow {
  std::string axis;
  std::string value;
  RunSummary summary;
};

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Column documentation for every CSV kind; written next to the outputs.
std::string schema_text();

// Runs the scenario once per seed (overriding scenario.seed), writing
// <label>_seed<seed>.csv per run, <label>_summary.csv, and schema.txt into
// out_dir (created when missing). Returns the summaries in seed order.
std::vector<RunSummary> run_scenario_files(const Scenario& scenario,
                                           const std::vector<std::uint64_t>& seeds,
                                           const std::filesystem::path& out_dir,
                                           const std::string& label);

// One run per (axis value, seed); per-epoch files are
// <label>_<axis>_<value>_seed<seed>.csv plus a combined long-format CSV
// <label>_sweep.csv. Values are applied through the scenario parser, so an
// unknown axis or a malformed value fails up front.
std::vector<SweepRow> run_sweep_files(const Scenario& base, const std::string& axis,
                                      const std::vector<std::string>& values,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::filesystem::path& out_dir,
                                      const std::string& label);

}  // namespace codedchain
