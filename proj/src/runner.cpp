#include "codedchain/runner.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace codedchain {

namespace {

std::string real6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw std::runtime_error("short write to " + path.string());
  }
}

void append_summary_row(std::string& out, const RunSummary& s) {
  out += std::to_string(s.seed);
  out += ',';
  out += std::to_string(s.epochs);
  out += ',';
  out += real6(s.mean_miners);
  out += ',';
  out += real6(s.throughput);
  out += ',';
  out += real6(s.normalized_throughput);
  out += ',';
  out += real6(s.mean_gini);
  out += ',';
  out += real6(s.mean_entropy);
  out += ',';
  out += real6(s.final_storage);
  out += ',';
  out += std::to_string(s.wrong_total);
  out += '\n';
}

constexpr const char* kSummaryHeader =
    "seed,epochs,mean_miners,throughput,normalized_throughput,mean_gini,"
    "mean_entropy,final_storage,wrong_total\n";

}  // namespace

std::string records_to_csv(const std::vector<EpochRecord>& records) {
  std::string out =
      "epoch,miners,selected,confirmed,wrong_confirmed,storage_fraction,"
      "credit_gini,credit_entropy,backlog,depth_limit,assignment_size,"
      "aggregate_reliability\n";
  for (const auto& r : records) {
    out += std::to_string(r.epoch);
    out += ',';
    out += std::to_string(r.miners);
    out += ',';
    out += std::to_string(r.selected);
    out += ',';
    out += std::to_string(r.confirmed);
    out += ',';
    out += std::to_string(r.wrong_confirmed);
    out += ',';
    out += real6(r.storage_fraction);
    out += ',';
    out += real6(r.credit_gini);
    out += ',';
    out += real6(r.credit_entropy);
    out += ',';
    out += std::to_string(r.backlog);
    out += ',';
    out += std::to_string(r.depth_limit);
    out += ',';
    out += std::to_string(r.assignment_size);
    out += ',';
    out += real6(r.aggregate_reliability);
    out += '\n';
  }
  return out;
}

RunSummary summarize(std::uint64_t seed, std::uint32_t batch_size,
                     const std::vector<EpochRecord>& records) {
  RunSummary s;
  s.seed = seed;
  s.epochs = static_cast<std::uint32_t>(records.size());
  if (records.empty()) {
    return s;
  }
  double correct = 0.0;
  for (const auto& r : records) {
    s.mean_miners += r.miners;
    correct += static_cast<double>(r.confirmed - r.wrong_confirmed);
    s.mean_gini += r.credit_gini;
    s.mean_entropy += r.credit_entropy;
    s.wrong_total += r.wrong_confirmed;
  }
  const auto n = static_cast<double>(records.size());
  s.mean_miners /= n;
  s.throughput = correct / n;
  s.normalized_throughput = s.throughput / static_cast<double>(batch_size);
  s.mean_gini /= n;
  s.mean_entropy /= n;
  s.final_storage = records.back().storage_fraction;
  return s;
}

std::string summaries_to_csv(const std::vector<RunSummary>& summaries) {
  std::string out = kSummaryHeader;
  for (const auto& s : summaries) {
    append_summary_row(out, s);
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "axis,value,";
  out += kSummaryHeader;
  for (const auto& row : rows) {
    out += row.axis;
    out += ',';
    out += row.value;
    out += ',';
    append_summary_row(out, row.summary);
  }
  return out;
}

std::string schema_text() {
  return
      "Per-epoch CSV (<label>_seed<seed>.csv)\n"
      "  epoch                  1-based epoch number\n"
      "  miners                 live miner count after churn, N(t)\n"
      "  selected               transactions selected this epoch, K(t)\n"
      "  confirmed              transactions confirmed and appended\n"
      "  wrong_confirmed        confirmed transactions that were truly invalid\n"
      "  storage_fraction       per-miner stored fraction of the chain\n"
      "  credit_gini            Gini index of per-miner participation credit\n"
      "  credit_entropy         entropy (bits) of participation credit shares\n"
      "  backlog                pending transactions at epoch start\n"
      "  depth_limit            dependency depth window D(t)\n"
      "  assignment_size        voters assigned per transaction\n"
      "  aggregate_reliability  geometric mean reliability P(t)\n"
      "\n"
      "Summary CSV (<label>_summary.csv), one row per seed\n"
      "  seed                   master seed of the run\n"
      "  epochs                 epochs simulated\n"
      "  mean_miners            mean live miner count\n"
      "  throughput             mean correctly confirmed transactions per epoch\n"
      "  normalized_throughput  throughput divided by the batch size\n"
      "  mean_gini              mean per-epoch credit Gini\n"
      "  mean_entropy           mean per-epoch credit entropy (bits)\n"
      "  final_storage          storage_fraction at the last epoch\n"
      "  wrong_total            total wrong confirmations\n"
      "\n"
      "Sweep CSV (<label>_sweep.csv), long format\n"
      "  axis                   swept scenario key\n"
      "  value                  swept value (textual, as applied)\n"
      "  ...                    then the summary columns above\n"
      "\n"
      "All real numbers carry six significant digits; lines end in LF.\n";
}

std::vector<RunSummary> run_scenario_files(const Scenario& scenario,
                                           const std::vector<std::uint64_t>& seeds,
                                           const std::filesystem::path& out_dir,
                                           const std::string& label) {
  if (seeds.empty()) {
    throw std::invalid_argument("at least one seed is required");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<RunSummary> summaries;
  for (std::uint64_t seed : seeds) {
    Scenario run = scenario;
    run.seed = seed;
    Engine engine(run);
    auto records = engine.run();
    write_file(out_dir / (label + "_seed" + std::to_string(seed) + ".csv"),
               records_to_csv(records));
    summaries.push_back(summarize(seed, run.batch_size, records));
  }
  write_file(out_dir / (label + "_summary.csv"), summaries_to_csv(summaries));
  write_file(out_dir / "schema.txt", schema_text());
  return summaries;
}

std::vector<SweepRow> run_sweep_files(const Scenario& base, const std::string& axis,
                                      const std::vector<std::string>& values,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::filesystem::path& out_dir,
                                      const std::string& label) {
  if (values.empty()) {
    throw std::invalid_argument("sweep requires at least one value");
  }
  if (seeds.empty()) {
    throw std::invalid_argument("at least one seed is required");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<SweepRow> rows;
  for (const auto& value : values) {
    Scenario run = base;
    set_scenario_field(run, axis, value);
    validate_scenario(run);
    for (std::uint64_t seed : seeds) {
      run.seed = seed;
      Engine engine(run);
      auto records = engine.run();
      write_file(out_dir / (label + "_" + axis + "_" + value + "_seed" +
                            std::to_string(seed) + ".csv"),
                 records_to_csv(records));
      rows.push_back(SweepRow{axis, value, summarize(seed, run.batch_size, records)});
    }
  }
  write_file(out_dir / (label + "_sweep.csv"), sweep_to_csv(rows));
  write_file(out_dir / "schema.txt", schema_text());
  return rows;
}

}  // namespace codedchain
