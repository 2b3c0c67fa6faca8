#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "codedchain/engine.hpp"
#include "codedchain/runner.hpp"
#include "codedchain/scenario.hpp"
#include "doctest.h"

using namespace codedchain;

namespace {

Scenario tiny_scenario() {
  Scenario s;
  s.epochs = 6;
  s.n0_miners = 40;
  s.batch_size = 25;
  s.dishonest_fraction = 0.2;
  s.straggler_cap = 0.2;
  s.block_bytes = 4096;
  return s;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("per-epoch CSV carries one row per epoch under a fixed header") {
  Engine engine(tiny_scenario());
  const auto records = engine.run();
  const std::string csv = records_to_csv(records);

  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == records.size() + 1);
  CHECK(lines[0] ==
        "epoch,miners,selected,confirmed,wrong_confirmed,storage_fraction,"
        "credit_gini,credit_entropy,backlog,depth_limit,assignment_size,"
        "aggregate_reliability");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(count_fields(lines[i]) == 12);
  }
  CHECK(csv.find("\r") == std::string::npos);  // LF endings only
  CHECK(csv.back() == '\n');

  // First column is the 1-based epoch index.
  CHECK(lines[1].substr(0, 2) == "1,");
  CHECK(lines.back().substr(0, 2) == "6,");
}

TEST_CASE("summaries aggregate the run") {
  Engine engine(tiny_scenario());
  const auto records = engine.run();
  const RunSummary s = summarize(99, tiny_scenario().batch_size, records);
  CHECK(s.seed == 99);
  CHECK(s.epochs == records.size());

  double miners = 0.0;
  double correct = 0.0;
  double gini_sum = 0.0;
  std::uint64_t wrong = 0;
  for (const auto& r : records) {
    miners += r.miners;
    correct += r.confirmed - r.wrong_confirmed;
    gini_sum += r.credit_gini;
    wrong += r.wrong_confirmed;
  }
  CHECK(s.mean_miners == doctest::Approx(miners / records.size()).epsilon(1e-12));
  CHECK(s.throughput == doctest::Approx(correct / records.size()).epsilon(1e-12));
  CHECK(s.normalized_throughput ==
        doctest::Approx(s.throughput / 25.0).epsilon(1e-12));
  CHECK(s.mean_gini == doctest::Approx(gini_sum / records.size()).epsilon(1e-12));
  CHECK(s.final_storage == records.back().storage_fraction);
  CHECK(s.wrong_total == wrong);

  const RunSummary empty = summarize(1, 25, {});
  CHECK(empty.epochs == 0);
  CHECK(empty.throughput == 0.0);
}

TEST_CASE("reruns of one scenario serialize byte-identically") {
  Engine a(tiny_scenario());
  Engine b(tiny_scenario());
  CHECK(records_to_csv(a.run()) == records_to_csv(b.run()));
}

TEST_CASE("scenario files land under the label with a schema") {
  const auto dir = std::filesystem::temp_directory_path() / "codedchain_runner_test";
  std::filesystem::remove_all(dir);

  const auto summaries =
      run_scenario_files(tiny_scenario(), {7, 8}, dir, "trial");
  REQUIRE(summaries.size() == 2);
  CHECK(summaries[0].seed == 7);
  CHECK(summaries[1].seed == 8);

  CHECK(std::filesystem::exists(dir / "trial_seed7.csv"));
  CHECK(std::filesystem::exists(dir / "trial_seed8.csv"));
  CHECK(std::filesystem::exists(dir / "trial_summary.csv"));
  CHECK(std::filesystem::exists(dir / "schema.txt"));

  const auto summary_lines = split_lines(slurp(dir / "trial_summary.csv"));
  REQUIRE(summary_lines.size() == 3);
  CHECK(summary_lines[0] ==
        "seed,epochs,mean_miners,throughput,normalized_throughput,mean_gini,"
        "mean_entropy,final_storage,wrong_total");
  CHECK(summary_lines[1].substr(0, 2) == "7,");

  // Different seeds genuinely produce different per-epoch traces.
  CHECK(slurp(dir / "trial_seed7.csv") != slurp(dir / "trial_seed8.csv"));

  CHECK_THROWS(run_scenario_files(tiny_scenario(), {}, dir, "trial"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps fan out over the axis and collect a long-format table") {
  const auto dir = std::filesystem::temp_directory_path() / "codedchain_sweep_test";
  std::filesystem::remove_all(dir);

  Scenario base = tiny_scenario();
  const auto rows = run_sweep_files(base, "dishonest_fraction", {"0.0", "0.3"},
                                    {5}, dir, "probe");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].axis == "dishonest_fraction");
  CHECK(rows[0].value == "0.0");
  CHECK(rows[1].value == "0.3");

  CHECK(std::filesystem::exists(dir / "probe_dishonest_fraction_0.0_seed5.csv"));
  CHECK(std::filesystem::exists(dir / "probe_dishonest_fraction_0.3_seed5.csv"));
  CHECK(std::filesystem::exists(dir / "probe_sweep.csv"));

  const auto sweep_lines = split_lines(slurp(dir / "probe_sweep.csv"));
  REQUIRE(sweep_lines.size() == 3);
  CHECK(sweep_lines[0].substr(0, 11) == "axis,value,");
  CHECK(count_fields(sweep_lines[1]) == 11);

  // An empty value list is a configuration error, not a silent no-op.
  CHECK_THROWS(run_sweep_files(base, "dishonest_fraction", {}, {5}, dir, "probe"));
  // So is an axis that fails validation.
  CHECK_THROWS(run_sweep_files(base, "dishonest_fraction", {"1.7"}, {5}, dir, "probe"));
  CHECK_THROWS(run_sweep_files(base, "no_such_axis", {"1"}, {5}, dir, "probe"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("the schema documents every emitted column") {
  const std::string schema = schema_text();
  for (const char* column :
       {"epoch", "miners", "selected", "confirmed", "wrong_confirmed",
        "storage_fraction", "credit_gini", "credit_entropy", "backlog",
        "depth_limit", "assignment_size", "aggregate_reliability", "seed",
        "mean_miners", "throughput", "normalized_throughput", "mean_gini",
        "mean_entropy", "final_storage", "wrong_total", "axis", "value"}) {
    CHECK(schema.find(column) != std::string::npos);
  }
}
