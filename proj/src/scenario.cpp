#include "codedchain/scenario.hpp"

#include "codedchain/block.hpp"

#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace codedchain {

namespace {

struct FieldSpec {
  const char* name;
  std::function<void(Scenario&, const std::string&)> set;
  std::function<std::string(const Scenario&)> get;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) {
    throw std::invalid_argument("trailing characters after number");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("expected an unsigned integer");
  }
  return v;
}

std::uint32_t parse_u32(const std::string& text) {
  std::uint64_t v = parse_u64(text);
  if (v > 0xFFFFFFFFull) {
    throw std::invalid_argument("value out of range");
  }
  return static_cast<std::uint32_t>(v);
}

#define DOUBLE_FIELD(member)                                               \
  FieldSpec{#member,                                                       \
            [](Scenario& s, const std::string& v) { s.member = parse_double(v); }, \
            [](const Scenario& s) { return format_double(s.member); }}

#define U32_FIELD(member)                                                  \
  FieldSpec{#member,                                                       \
            [](Scenario& s, const std::string& v) { s.member = parse_u32(v); }, \
            [](const Scenario& s) { return std::to_string(s.member); }}

const std::vector<FieldSpec>& field_table() {
  static const std::vector<FieldSpec> table = {
      U32_FIELD(epochs),
      FieldSpec{"seed",
                [](Scenario& s, const std::string& v) { s.seed = parse_u64(v); },
                [](const Scenario& s) { return std::to_string(s.seed); }},
      U32_FIELD(n0_miners),
      DOUBLE_FIELD(lambda_join),
      DOUBLE_FIELD(lambda_leave),
      DOUBLE_FIELD(dishonest_fraction),
      DOUBLE_FIELD(straggler_cap),
      U32_FIELD(theta),
      U32_FIELD(batch_size),
      DOUBLE_FIELD(p_valid),
      DOUBLE_FIELD(fee_scale),
      DOUBLE_FIELD(age_scale),
      DOUBLE_FIELD(compute_shape),
      DOUBLE_FIELD(compute_scale),
      DOUBLE_FIELD(size_mean),
      DOUBLE_FIELD(size_std),
      U32_FIELD(payload_bytes),
      FieldSpec{"selection_mode",
                [](Scenario& s, const std::string& v) {
                  if (v == "stochastic") {
                    s.selection_mode = SelectionMode::kStochastic;
                  } else if (v == "deterministic") {
                    s.selection_mode = SelectionMode::kDeterministic;
                  } else {
                    throw std::invalid_argument(
                        "selection_mode must be stochastic or deterministic");
                  }
                },
                [](const Scenario& s) {
                  return std::string(s.selection_mode == SelectionMode::kStochastic
                                         ? "stochastic"
                                         : "deterministic");
                }},
      DOUBLE_FIELD(compute_budget),
      DOUBLE_FIELD(size_budget),
      DOUBLE_FIELD(q1),
      DOUBLE_FIELD(q2),
      DOUBLE_FIELD(q3),
      U32_FIELD(rounding_trials),
      DOUBLE_FIELD(beta),
      DOUBLE_FIELD(epsilon),
      DOUBLE_FIELD(margin),
      FieldSpec{"gf_bits",
                [](Scenario& s, const std::string& v) { s.gf_bits = parse_u32(v); },
                [](const Scenario& s) { return std::to_string(s.gf_bits); }},
      U32_FIELD(block_bytes),
      DOUBLE_FIELD(precode_rate),
      DOUBLE_FIELD(eps_dec),
      U32_FIELD(mc_trials),
      U32_FIELD(max_group_wbar),
      DOUBLE_FIELD(soliton_c),
      DOUBLE_FIELD(soliton_delta),
      U32_FIELD(cache_budget),
  };
  return table;
}

#undef DOUBLE_FIELD
#undef U32_FIELD

const FieldSpec* find_field(const std::string& key) {
  for (const auto& spec : field_table()) {
    if (key == spec.name) {
      return &spec;
    }
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0) || !(v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

void check_open_unit(double v, const char* name) {
  if (!(v > 0.0) || !(v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
  }
}

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.epochs == 0) throw std::invalid_argument("epochs must be positive");
  if (s.n0_miners < 3) throw std::invalid_argument("n0_miners must be at least 3");
  if (s.lambda_join < 0.0 || s.lambda_leave < 0.0) {
    throw std::invalid_argument("population rates must be nonnegative");
  }
  check_fraction(s.dishonest_fraction, "dishonest_fraction");
  check_fraction(s.straggler_cap, "straggler_cap");
  if (s.dishonest_fraction + s.straggler_cap > 1.0) {
    throw std::invalid_argument(
        "dishonest_fraction + straggler_cap must not exceed 1");
  }
  if (s.batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  check_fraction(s.p_valid, "p_valid");
  check_positive(s.fee_scale, "fee_scale");
  check_positive(s.age_scale, "age_scale");
  check_positive(s.compute_shape, "compute_shape");
  check_positive(s.compute_scale, "compute_scale");
  check_positive(s.size_mean, "size_mean");
  check_positive(s.size_std, "size_std");
  if (s.payload_bytes == 0) {
    throw std::invalid_argument("payload_bytes must be positive");
  }
  check_positive(s.compute_budget, "compute_budget");
  check_positive(s.size_budget, "size_budget");
  check_open_unit(s.q1, "q1");
  check_open_unit(s.q2, "q2");
  check_open_unit(s.q3, "q3");
  check_open_unit(s.beta, "beta");
  check_open_unit(s.epsilon, "epsilon");
  if (!(s.margin > 0.0) || !(s.margin < 0.5)) {
    throw std::invalid_argument("margin must lie in (0, 0.5)");
  }
  if (s.gf_bits != 8 && s.gf_bits != 16) {
    throw std::invalid_argument("gf_bits must be 8 or 16");
  }
  if (s.block_bytes % (s.gf_bits / 8) != 0) {
    throw std::invalid_argument("block_bytes must be a whole number of symbols");
  }
  if (s.block_bytes < serialized_block_size(0, 0) + 4) {
    throw std::invalid_argument("block_bytes cannot hold an empty block");
  }
  check_open_unit(s.precode_rate, "precode_rate");
  check_open_unit(s.eps_dec, "eps_dec");
  if (s.mc_trials == 0) throw std::invalid_argument("mc_trials must be positive");
  if (s.max_group_wbar != 0 && s.max_group_wbar < 3) {
    throw std::invalid_argument("max_group_wbar must be 0 (off) or at least 3");
  }
  check_positive(s.soliton_c, "soliton_c");
  if (!(s.soliton_delta > 0.0) || !(s.soliton_delta <= 1.0)) {
    throw std::invalid_argument("soliton_delta must lie in (0, 1]");
  }
}

Scenario parse_scenario(const std::string& text) {
  Scenario scenario;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    if (!seen.insert(key).second) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": duplicate key '" + key + "'");
    }
    try {
      set_scenario_field(scenario, key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  validate_scenario(scenario);
  return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
  std::string out;
  for (const auto& spec : field_table()) {
    out += spec.name;
    out += " = ";
    out += spec.get(scenario);
    out += '\n';
  }
  return out;
}

void set_scenario_field(Scenario& scenario, const std::string& key,
                        const std::string& value) {
  const FieldSpec* spec = find_field(key);
  if (spec == nullptr) {
    throw std::invalid_argument("unknown key '" + key + "'");
  }
  spec->set(scenario, value);
}

std::vector<std::string> scenario_field_names() {
  std::vector<std::string> names;
  for (const auto& spec : field_table()) {
    names.emplace_back(spec.name);
  }
  return names;
}

Preset preset_by_name(const std::string& name) {
  Preset preset;
  preset.name = name;
  Scenario& s = preset.scenario;
  if (name == "fig4") {
    s.n0_miners = 1000;
    s.lambda_leave = 4.0;
    s.lambda_join = 10.0;
    s.epochs = 250;
    s.dishonest_fraction = 0.3;
    s.straggler_cap = 0.4;
    s.block_bytes = 4096;
  } else if (name == "fig5") {
    s.n0_miners = 500;
    s.lambda_leave = 10.0;
    s.lambda_join = 20.0;
    s.epochs = 500;
    s.dishonest_fraction = 0.1;
    s.straggler_cap = 0.0;
    s.block_bytes = 4096;
  } else if (name == "fig6") {
    s.epochs = 300;
    s.dishonest_fraction = 0.3;
    s.straggler_cap = 0.4;
    s.block_bytes = 4096;
    preset.sweep_axis = "n0_miners";
    preset.sweep_values = {"50",  "100", "150", "200", "250",
                           "300", "350", "400", "450", "500"};
  } else if (name == "fig7") {
    s.epochs = 300;
    s.straggler_cap = 0.4;
    s.block_bytes = 4096;
    preset.sweep_axis = "dishonest_fraction";
    preset.sweep_values = {"0.05", "0.30", "0.45"};
  } else if (name == "fig8") {
    s.epochs = 200;
    s.dishonest_fraction = 0.2;
    s.straggler_cap = 0.0;
    s.block_bytes = 4096;
    preset.sweep_axis = "theta";
    preset.sweep_values = {"1", "2", "3"};
  } else if (name == "fig9") {
    s.epochs = 300;
    s.dishonest_fraction = 0.2;
    s.block_bytes = 4096;
    preset.sweep_axis = "straggler_cap";
    preset.sweep_values = {"0.0", "0.2", "0.4"};
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  validate_scenario(s);
  return preset;
}

std::vector<std::string> preset_names() {
  return {"fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

}  // namespace codedchain
