#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "latloc/trace_model.hpp"

namespace latloc::corpus {

enum class Program { trityp, mid };

std::string_view to_string(Program p);
Program parse_program(std::string_view name);

using Input = std::array<int, 3>;

struct RunResult {
  std::string output;
  std::vector<std::uint32_t> trace;
};

// Mutant ids: trityp 1..8, mid 1 (line 15 assigns y instead of x).
// Empty `mutants` runs the reference. Throws latloc::Error on unknown or
// conflicting mutants.
RunResult run_program(Program program, const std::vector<int>& mutants, const Input& input);

std::uint32_t mutant_line(Program program, int mutant);
std::vector<int> mutant_ids(Program program);
// Every line id a run of `program` may emit.
const std::set<std::uint32_t>& line_map(Program program);

struct SuiteSpec {
  Program program = Program::trityp;
  std::vector<int> mutants;
  std::vector<Input> inputs;  // used verbatim when non-empty
  int grid = 7;               // all triples in [0..grid]^3
  std::size_t random_count = 64;
  std::uint64_t seed = 0;
};

std::vector<Input> suite_inputs(const SuiteSpec& spec);

// Per-mutation failing tests from single-mutation runs.
struct GroundTruth {
  Program program = Program::trityp;
  std::vector<int> mutants;
  std::map<int, std::uint32_t> fault_lines;
  std::map<int, std::set<std::string>> failing;

  nlohmann::json to_json() const;
  static GroundTruth from_json(const nlohmann::json& j);
};

struct GeneratedCorpus {
  TraceContext context;
  GroundTruth truth;
  std::vector<Input> inputs;
};

GeneratedCorpus generate_context(const SuiteSpec& spec);

// Failing test ids for a single mutation over `inputs` (test ids t1..tN).
std::set<std::string> failing_tests(Program program, int mutant, const std::vector<Input>& inputs);

}  // namespace latloc::corpus
