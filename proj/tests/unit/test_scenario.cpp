#include <stdexcept>
#include <string>

#include "codedchain/scenario.hpp"
#include "codedchain/selection.hpp"
#include "doctest.h"

using namespace codedchain;

TEST_CASE("empty text yields the documented defaults") {
  const Scenario s = parse_scenario("");
  CHECK(s.n0_miners == 500);
  CHECK(s.compute_budget == doctest::Approx(6.7e6));
  CHECK(s.size_budget == doctest::Approx(1.2e6));
  CHECK(s.beta == doctest::Approx(0.1));
  CHECK(s.epsilon == doctest::Approx(0.01));
  CHECK(s.soliton_c == doctest::Approx(0.15));
  CHECK(s.soliton_delta == doctest::Approx(0.5));
  CHECK(s.q1 == doctest::Approx(0.9));
  CHECK(s.q2 == doctest::Approx(0.9));
  CHECK(s.q3 == doctest::Approx(0.9));
  CHECK(s.selection_mode == SelectionMode::kStochastic);
  CHECK(s.precode_rate == doctest::Approx(0.8));
  CHECK(s.batch_size == 500);
  CHECK(s.payload_bytes == 16);
  CHECK(s.p_valid == doctest::Approx(0.9));
  CHECK(s.max_group_wbar == 75);
}

TEST_CASE("parse reads key = value lines with comments") {
  const Scenario s = parse_scenario(
      "# population\n"
      "n0_miners = 120\n"
      "epochs=40   # inline comment\n"
      "\n"
      "lambda_join = 2.5\n"
      "selection_mode = deterministic\n");
  CHECK(s.n0_miners == 120);
  CHECK(s.epochs == 40);
  CHECK(s.lambda_join == doctest::Approx(2.5));
  CHECK(s.selection_mode == SelectionMode::kDeterministic);
}

TEST_CASE("parse errors carry the offending line number") {
  try {
    parse_scenario("n0_miners = 100\nepochs = -1\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  CHECK_THROWS(parse_scenario("epochs = 10\nepochs = 20\n"));      // duplicate
  CHECK_THROWS(parse_scenario("frobnicate = 1\n"));                // unknown key
  CHECK_THROWS(parse_scenario("epochs\n"));                        // no '='
  CHECK_THROWS(parse_scenario("epochs = \n"));                     // empty value
  CHECK_THROWS(parse_scenario("epochs = 3x\n"));                   // trailing junk
  CHECK_THROWS(parse_scenario("selection_mode = greedy\n"));
}

TEST_CASE("serialize then parse returns the identical configuration") {
  Scenario s;
  s.epochs = 77;
  s.seed = 0xDEADBEEFCAFEF00Dull;
  s.lambda_join = 3.25;
  s.dishonest_fraction = 0.125;
  s.q1 = 0.875;
  s.selection_mode = SelectionMode::kDeterministic;
  s.gf_bits = 16;
  s.block_bytes = 4096;

  const std::string text = serialize_scenario(s);
  const Scenario back = parse_scenario(text);
  CHECK(serialize_scenario(back) == text);
  CHECK(back.seed == s.seed);
  CHECK(back.lambda_join == s.lambda_join);
  CHECK(back.selection_mode == SelectionMode::kDeterministic);
}

TEST_CASE("set_scenario_field reaches every published name") {
  Scenario s;
  for (const std::string& name : scenario_field_names()) {
    if (name == "selection_mode") {
      CHECK_NOTHROW(set_scenario_field(s, name, "stochastic"));
    } else if (name == "lambda_join" || name == "lambda_leave" ||
               name == "dishonest_fraction" || name == "straggler_cap") {
      CHECK_NOTHROW(set_scenario_field(s, name, "0.25"));
    } else if (name == "q1" || name == "q2" || name == "q3" || name == "beta" ||
               name == "epsilon" || name == "margin" || name == "p_valid" ||
               name == "precode_rate" || name == "eps_dec" ||
               name == "soliton_c" || name == "soliton_delta") {
      CHECK_NOTHROW(set_scenario_field(s, name, "0.4"));
    } else if (name == "gf_bits") {
      CHECK_NOTHROW(set_scenario_field(s, name, "8"));
    } else {
      CHECK_NOTHROW(set_scenario_field(s, name, "64"));
    }
  }
  CHECK_THROWS(set_scenario_field(s, "not_a_field", "1"));
}

TEST_CASE("validation rejects inconsistent configurations") {
  Scenario s;
  s.dishonest_fraction = 0.7;
  s.straggler_cap = 0.6;
  CHECK_THROWS(validate_scenario(s));

  s = Scenario{};
  s.gf_bits = 12;
  CHECK_THROWS(validate_scenario(s));

  s = Scenario{};
  s.block_bytes = 32;  // cannot hold even an empty block image
  CHECK_THROWS(validate_scenario(s));

  s = Scenario{};
  s.gf_bits = 16;
  s.block_bytes = 4097;  // not a whole number of 2-byte symbols
  CHECK_THROWS(validate_scenario(s));

  s = Scenario{};
  s.epochs = 0;
  CHECK_THROWS(validate_scenario(s));

  s = Scenario{};
  s.n0_miners = 2;
  CHECK_THROWS(validate_scenario(s));

  s = Scenario{};
  s.max_group_wbar = 2;
  CHECK_THROWS(validate_scenario(s));

  s = Scenario{};
  CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("presets are self-consistent") {
  for (const std::string& name : preset_names()) {
    const Preset preset = preset_by_name(name);
    CHECK_NOTHROW(validate_scenario(preset.scenario));
    // Sweeping presets carry a populated axis and at least two values.
    if (!preset.sweep_axis.empty()) {
      CHECK(preset.sweep_values.size() >= 2);
      Scenario probe = preset.scenario;
      for (const std::string& value : preset.sweep_values) {
        CHECK_NOTHROW(set_scenario_field(probe, preset.sweep_axis, value));
        CHECK_NOTHROW(validate_scenario(probe));
      }
    }
  }
  CHECK(preset_by_name("fig4").sweep_axis.empty());
  CHECK(preset_by_name("fig8").sweep_axis == "theta");
  CHECK_THROWS(preset_by_name("fig99"));
}
