#include "latloc/corpus.hpp"

#include <algorithm>
#include <random>

#include "latloc/error.hpp"

namespace latloc::corpus {

namespace {

class Tracer {
 public:
  void operator()(std::uint32_t line) { lines_.push_back(line); }
  std::vector<std::uint32_t> take() { return std::move(lines_); }

 private:
  std::vector<std::uint32_t> lines_;
};

struct Mutations {
  std::set<int> ids;
  bool on(int m) const { return ids.contains(m); }
};

// Line numbers follow the classic Trityp listing (57..105). Typos in that
// listing are corrected here; mutants are applied on top of the corrected
// reference.
int trityp_body(int i, int j, int k, const Mutations& m, Tracer& t) {
  int trityp = 0;
  t(57);
  t(58);
  if (i == 0 || j == 0 || k == 0) {
    t(59);
    trityp = 4;
  } else {
    t(62);
    trityp = 0;
    t(63);
    if (i == j) {
      t(64);
      trityp = m.on(3) ? i + 1 : trityp + 1;
    }
    t(65);
    if (m.on(5) ? i >= k : i == k) {
      t(66);
      trityp = m.on(8) ? trityp + 20 : trityp + 2;
    }
    t(67);
    if (j == k) {
      t(68);
      trityp = trityp + 3;
    }
    t(69);
    if (trityp == 0) {
      t(71);
      if (i + j <= k || j + k <= i || i + k <= j) {
        t(72);
        trityp = 4;
      } else {
        t(74);
        trityp = m.on(6) ? 0 : 1;
      }
    } else {
      t(78);
      if (trityp > 3) {
        t(79);
        trityp = m.on(2) ? 0 : 3;
      } else {
        t(81);
        if (trityp == 1 && i + j > k) {
          t(82);
          trityp = 2;
        } else {
          t(84);
          if ((m.on(1) ? trityp == 3 : trityp == 2) && i + k > j) {
            t(85);
            trityp = 2;
          } else {
            t(87);
            if ((m.on(4) ? trityp != 3 : trityp == 3) && j + k > i) {
              t(88);
              trityp = 2;
            } else {
              t(90);
              // Mutant 7 reads `trityp == 3;`, an expression statement with no effect.
              if (!m.on(7)) trityp = 4;
            }
          }
        }
      }
    }
  }
  t(93);
  return trityp;
}

std::string trityp_name(int value, Tracer& t) {
  t(97);
  switch (value) {
    case 1: t(99); return "scalene";
    case 2: t(101); return "isosceles";
    case 3: t(103); return "equilateral";
    default: t(105); return "not a triangle";
  }
}

int mid_body(int x, int y, int z, const Mutations& m, Tracer& t) {
  int result = 0;
  t(10);
  result = z;
  t(11);
  if (y < z) {
    t(12);
    if (x < y) {
      t(13);
      result = y;
    } else {
      t(14);
      if (x < z) {
        t(15);
        result = m.on(1) ? y : x;
      }
    }
  } else {
    t(18);
    if (x > y) {
      t(19);
      result = y;
    } else {
      t(20);
      if (x > z) {
        t(21);
        result = x;
      }
    }
  }
  t(24);
  return result;
}

const std::map<int, std::uint32_t>& mutant_table(Program program) {
  static const std::map<int, std::uint32_t> trityp{{1, 84}, {2, 79}, {3, 64}, {4, 87},
                                                   {5, 65}, {6, 74}, {7, 90}, {8, 66}};
  static const std::map<int, std::uint32_t> mid{{1, 15}};
  return program == Program::trityp ? trityp : mid;
}

Mutations validate(Program program, const std::vector<int>& mutants) {
  Mutations m;
  std::set<std::uint32_t> lines;
  for (auto id : mutants) {
    auto line = mutant_line(program, id);
    if (!m.ids.insert(id).second || !lines.insert(line).second) {
      throw Error("conflicting mutations on line " + std::to_string(line));
    }
  }
  return m;
}

RunResult run_validated(Program program, const Mutations& m, const Input& in) {
  Tracer t;
  RunResult r;
  if (program == Program::trityp) {
    r.output = trityp_name(trityp_body(in[0], in[1], in[2], m, t), t);
  } else {
    // The recorded traces show the input statement twice.
    t(4);
    t(4);
    t(5);
    int value = mid_body(in[0], in[1], in[2], m, t);
    t(6);
    r.output = std::to_string(value);
  }
  r.trace = t.take();
  return r;
}

}  // namespace

std::string_view to_string(Program p) { return p == Program::trityp ? "trityp" : "mid"; }

Program parse_program(std::string_view name) {
  if (name == "trityp") return Program::trityp;
  if (name == "mid") return Program::mid;
  throw Error("unknown program '" + std::string(name) + "' (expected trityp or mid)");
}

std::uint32_t mutant_line(Program program, int mutant) {
  const auto& table = mutant_table(program);
  auto it = table.find(mutant);
  if (it == table.end()) {
    throw Error("unknown mutant " + std::to_string(mutant) + " for " + std::string(to_string(program)));
  }
  return it->second;
}

std::vector<int> mutant_ids(Program program) {
  std::vector<int> out;
  for (const auto& [id, line] : mutant_table(program)) out.push_back(id);
  return out;
}

const std::set<std::uint32_t>& line_map(Program program) {
  static const std::set<std::uint32_t> trityp{57, 58, 59, 62, 63, 64, 65, 66, 67, 68, 69, 71, 72, 74, 78, 79,
                                              81, 82, 84, 85, 87, 88, 90, 93, 97, 99, 101, 103, 105};
  static const std::set<std::uint32_t> mid{4, 5, 6, 10, 11, 12, 13, 14, 15, 18, 19, 20, 21, 24};
  return program == Program::trityp ? trityp : mid;
}

RunResult run_program(Program program, const std::vector<int>& mutants, const Input& input) {
  return run_validated(program, validate(program, mutants), input);
}

std::vector<Input> suite_inputs(const SuiteSpec& spec) {
  if (!spec.inputs.empty()) return spec.inputs;
  if (spec.grid < 0) throw Error("grid bound must be non-negative");
  std::vector<Input> out;
  for (int i = 0; i <= spec.grid; ++i) {
    for (int j = 0; j <= spec.grid; ++j) {
      for (int k = 0; k <= spec.grid; ++k) out.push_back({i, j, k});
    }
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> dist(0, std::max(1, 4 * spec.grid));
  for (std::size_t n = 0; n < spec.random_count; ++n) out.push_back({dist(rng), dist(rng), dist(rng)});
  return out;
}

std::set<std::string> failing_tests(Program program, int mutant, const std::vector<Input>& inputs) {
  auto m = validate(program, {mutant});
  std::set<std::string> out;
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    auto expected = run_validated(program, {}, inputs[n]).output;
    if (run_validated(program, m, inputs[n]).output != expected) out.insert("t" + std::to_string(n + 1));
  }
  return out;
}

GeneratedCorpus generate_context(const SuiteSpec& spec) {
  auto mutations = validate(spec.program, spec.mutants);
  auto inputs = suite_inputs(spec);
  if (inputs.empty()) throw Error("empty test suite");

  std::vector<TestExecution> executions;
  executions.reserve(inputs.size());
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    auto expected = run_validated(spec.program, {}, inputs[n]);
    auto actual = run_validated(spec.program, mutations, inputs[n]);
    TestExecution exec;
    exec.test_id = "t" + std::to_string(n + 1);
    exec.verdict = actual.output == expected.output ? Verdict::pass : Verdict::fail;
    for (auto line : actual.trace) exec.sequence.push_back(make_item(ItemKind::line, line));
    executions.push_back(std::move(exec));
  }

  GroundTruth truth;
  truth.program = spec.program;
  truth.mutants = spec.mutants;
  for (auto id : spec.mutants) {
    truth.fault_lines[id] = mutant_line(spec.program, id);
    truth.failing[id] = failing_tests(spec.program, id, inputs);
  }
  return {TraceContext::from_executions(std::move(executions), TraceMode::sequence), std::move(truth),
          std::move(inputs)};
}

nlohmann::json GroundTruth::to_json() const {
  nlohmann::json j;
  j["format"] = 1;
  j["program"] = std::string(corpus::to_string(program));
  j["mutants"] = mutants;
  auto& lines = j["fault_lines"] = nlohmann::json::object();
  for (const auto& [id, line] : fault_lines) lines[std::to_string(id)] = line;
  auto& fails = j["failing"] = nlohmann::json::object();
  for (const auto& [id, tests] : failing) fails[std::to_string(id)] = tests;
  return j;
}

GroundTruth GroundTruth::from_json(const nlohmann::json& j) {
  try {
    GroundTruth t;
    t.program = parse_program(j.at("program").get<std::string>());
    t.mutants = j.at("mutants").get<std::vector<int>>();
    for (const auto& [key, line] : j.at("fault_lines").items()) t.fault_lines[std::stoi(key)] = line.get<std::uint32_t>();
    for (const auto& [key, tests] : j.at("failing").items()) {
      t.failing[std::stoi(key)] = tests.get<std::set<std::string>>();
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed ground-truth file: ") + e.what());
  }
}

}  // namespace latloc::corpus
