// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include "latloc/failure_lattice.hpp"
#include "support.hpp"

using namespace latloc;
using testing::line;

namespace {

using Seconds = std::chrono::duration<double>;

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<std::string()> check;  // empty string on success, else the reason
};

std::string fail_if(bool bad, const std::string& why) { return bad ? why : std::string(); }

bool contains(const std::vector<ItemId>& items, const ItemId& item) {
  return std::find(items.begin(), items.end(), item) != items.end();
}

std::set<std::string> names(const std::vector<std::size_t>& idx, const std::function<std::string(std::size_t)>& f) {
  std::set<std::string> out;
  for (auto i : idx) out.insert(f(i));
  return out;
}

struct Mined {
  FailureLattice fl;
  std::vector<std::vector<ItemId>> failing;
};

Mined mine(const std::vector<int>& mutants) {
  corpus::SuiteSpec spec;
  spec.mutants = mutants;
  auto ctx = corpus::generate_context(spec).context;
  auto fl = FailureLattice::build(mine_failure_rules(ctx, {1, Rational(1)}));
  return {std::move(fl), testing::failing_coverage(ctx)};
}

std::set<ItemId> fault_lines(const std::vector<int>& mutants) {
  std::set<ItemId> out;
  for (auto m : mutants) out.insert(line(corpus::mutant_line(corpus::Program::trityp, m)));
  return out;
}

std::string solar_golden() {
  auto k = testing::solar();
  auto lat = fca::build_lattice(k);
  bool a = false, g = false;
  for (std::size_t c = 0; c < lat.size(); ++c) {
    const auto& fc = lat.at(c);
    auto ext = names(members(fc.extent), [&](auto i) { return k.object_name(i); });
    auto in = names(members(fc.intent), [&](auto i) { return k.attribute_name(i); });
    auto olabel = names(lat.object_label(c), [&](auto i) { return k.object_name(i); });
    a = a || (ext == std::set<std::string>{"Jupiter", "Saturn", "Uranus", "Neptune"} &&
              in == std::set<std::string>{"far from sun", "with moons"});
    g = g || (olabel == std::set<std::string>{"Jupiter", "Saturn"} && in.contains("large"));
  }
  if (!a) return "no concept {Jupiter,Saturn,Uranus,Neptune} x {far from sun,with moons}";
  return fail_if(!g, "no concept labelled {Jupiter,Saturn} with 'large' in its intent");
}

std::string indicator_golden() {
  auto k = testing::solar();
  auto near = k.attributes_named({"near sun"});
  auto s = rule_stats(k, near, k.attributes_named({"with moons"}));
  auto w = rule_stats(k, near, k.attributes_named({"without moons"}));
  if (s.support != 2 || s.normalized_support != Rational(1, 4) || s.confidence != Rational(1, 2) ||
      s.lift != Rational(2, 3)) {
    return "near sun -> with moons: support " + std::to_string(s.support) + ", lift " +
           (s.lift ? to_string(*s.lift) : "undefined");
  }
  return fail_if(w.lift != Rational(2), "near sun -> without moons lift is not 2");
}

std::string fca_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_real_distribution<double> density(0.1, 0.8);
  for (int trial = 0; trial < 200; ++trial) {
    auto k = testing::random_context(rng, dim(rng), dim(rng), density(rng));
    auto lat = fca::build_lattice(k);
    std::set<std::vector<std::size_t>> got;
    for (const auto& c : lat.concepts()) got.insert(members(c.intent));
    if (got.size() != lat.size() || got != testing::brute_force_intents(k)) {
      return "intents differ from brute force on trial " + std::to_string(trial);
    }
    std::size_t attrs = 0, objs = 0;
    for (std::size_t c = 0; c < lat.size(); ++c) {
      attrs += lat.attribute_label(c).size();
      objs += lat.object_label(c).size();
    }
    if (attrs != k.attribute_count() || objs != k.object_count()) {
      return "label sums wrong on trial " + std::to_string(trial);
    }
  }
  return {};
}

std::string monotony() {
  for (auto mutants : std::vector<std::vector<int>>{{1}, {1, 2, 6}, {1, 7}}) {
    auto m = mine(mutants);
    const auto& fl = m.fl;
    for (std::size_t a = 0; a < fl.size(); ++a) {
      for (std::size_t b = 0; b < fl.size(); ++b) {
        const auto& x = fl.annotation(a);
        const auto& y = fl.annotation(b);
        if (!x || !y) continue;
        if (fl.lattice().at(a).extent.is_subset_of(fl.lattice().at(b).extent) && x->support > y->support) {
          return "support increases downward between concepts " + std::to_string(a) + " and " + std::to_string(b);
        }
      }
    }
    for (const auto& cl : support_clusters(fl)) {
      for (auto c : cl.concepts) {
        if (fl.annotation(c)->lift > fl.annotation(cl.head)->lift) {
          return "head " + std::to_string(cl.head) + " does not carry its cluster's maximal lift";
        }
      }
    }
  }
  return {};
}

std::string single_fault() {
  auto m = mine({1});
  bool head84 = false;
  for (const auto& cl : support_clusters(m.fl)) head84 = head84 || contains(m.fl.label_items(cl.head), line(84));
  if (!head84) return "no head concept label holds line 84";
  auto run = run_scripted(m.fl, m.failing, fault_lines({1}));
  if (!run.session.failures_to_explain().empty()) return "failure concepts left unexplained";
  return fail_if(!contains(run.inspected, line(84)), "line 84 never inspected");
}

std::string multi_fault() {
  auto m = mine({1, 2, 6});
  auto run = run_scripted(m.fl, m.failing, fault_lines({1, 2, 6}));
  if (!run.session.failures_to_explain().empty()) return "failure concepts left unexplained";
  for (auto l : {84u, 79u, 74u}) {
    if (!contains(run.inspected, line(l))) return "line " + std::to_string(l) + " never inspected";
  }
  auto previous = run.session.initial_failure_concepts().size();
  for (const auto& r : run.session.log()) {
    if (r.failures_to_explain > previous) return "failures_to_explain grew";
    previous = r.failures_to_explain;
  }
  return {};
}

// Equal-side pattern of the triangle classes each mutant can disturb.
int equal_sides(const corpus::Input& in) {
  return (in[0] == in[1]) + (in[1] == in[2]) + (in[0] == in[2]);
}

std::string dependencies() {
  corpus::SuiteSpec spec;
  auto inputs = corpus::suite_inputs(spec);
  std::map<int, std::set<std::string>> failing;
  for (int m : {1, 2, 6}) failing[m] = corpus::failing_tests(corpus::Program::trityp, m, inputs);
  // Mutant 1 only disturbs isosceles inputs, 2 equilateral, 6 scalene.
  std::map<int, int> pattern{{1, 1}, {2, 3}, {6, 0}};
  for (const auto& [m, ids] : failing) {
    if (ids.empty()) return "mutant " + std::to_string(m) + " never fails";
    for (const auto& id : ids) {
      if (equal_sides(inputs.at(std::stoul(id.substr(1)) - 1)) != pattern[m]) {
        return "mutant " + std::to_string(m) + " fails outside its triangle class";
      }
    }
  }
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {1, 6}, {2, 6}}) {
    if (classify_dependency(failing[a], failing[b]).kind != DependencyKind::ID) {
      return "mutants " + std::to_string(a) + "," + std::to_string(b) + " not ID";
    }
  }

  const auto mutants = corpus::mutant_ids(corpus::Program::trityp);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> side(0, 12);
  std::uniform_int_distribution<int> batch(1, 6);
  std::size_t compared = 0;
  for (int run = 0; run < 10; ++run) {
    std::map<int, std::set<std::string>> fails;
    std::map<std::pair<int, int>, DependencyKind> last;
    std::size_t tests = 0;
    auto add_input = [&] {
      corpus::Input in{side(rng), side(rng), side(rng)};
      auto id = "t" + std::to_string(++tests);
      auto expected = corpus::run_program(corpus::Program::trityp, {}, in).output;
      for (auto m : mutants) {
        if (corpus::run_program(corpus::Program::trityp, {m}, in).output != expected) fails[m].insert(id);
      }
    };
    for (int i = 0; i < 40; ++i) add_input();
    for (int step = 0; step <= 10; ++step) {
      if (step > 0) {
        for (int i = batch(rng); i > 0; --i) add_input();
      }
      for (std::size_t i = 0; i < mutants.size(); ++i) {
        for (std::size_t j = i + 1; j < mutants.size(); ++j) {
          auto a = mutants[i], b = mutants[j];
          if (fails[a].empty() || fails[b].empty()) continue;
          auto kind = classify_dependency(fails[a], fails[b]).kind;
          auto key = std::make_pair(a, b);
          auto it = last.find(key);
          compared += it != last.end();
          if (it != last.end() && !dependency_transition_allowed(it->second, kind)) {
            return "mutants " + std::to_string(a) + "," + std::to_string(b) + " moved " +
                   std::string(to_string(it->second)) + " -> " + std::string(to_string(kind));
          }
          last[key] = kind;
        }
      }
    }
  }
  return fail_if(compared == 0, "no dependency transition observed");
}

std::string indicator_dynamics() {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> clause(0, 3);
  int checked = 0;
  for (int attempt = 0; checked < 500; ++attempt) {
    if (attempt > 20000) return "could not draw 500 usable triples";
    std::vector<TestExecution> execs;
    std::size_t n = 3 + attempt % 10;
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<std::uint32_t> trace;
      for (std::uint32_t item = 1; item <= 5; ++item) {
        if (coin(rng)) trace.push_back(item);
      }
      if (trace.empty()) trace.push_back(1);
      execs.push_back(testing::execution("t" + std::to_string(t), coin(rng), trace));
    }
    auto base = testing::context_of(execs);
    if (base.failing_count() == 0 || base.failing_count() == base.object_count()) continue;
    std::vector<ItemId> premise;
    for (std::uint32_t item = 1; item <= 5; ++item) {
      if (coin(rng) && base.has_attribute(line(item))) premise.push_back(line(item));
    }
    if (premise.empty()) continue;
    auto before = failure_rule_stats(base, premise);
    if (before.support == 0) continue;

    int kind = clause(rng);
    bool failing = kind % 2 == 1;
    bool covers = kind < 2;
    std::vector<std::uint32_t> trace{9};
    if (covers) {
      for (const auto& p : premise) trace.push_back(p.id);
    }
    execs.push_back(testing::execution("new", failing, trace));
    auto after = failure_rule_stats(testing::context_of(execs), premise);
    ++checked;
    bool ok = true;
    if (covers && !failing) {
      ok = after.support == before.support && *after.confidence < *before.confidence;
    } else if (covers && failing) {
      ok = after.support > before.support && *after.confidence >= *before.confidence &&
           (*before.confidence == Rational(1) || *after.confidence > *before.confidence);
    } else if (!failing) {
      ok = *after.lift > *before.lift;
    } else {
      ok = *after.lift < *before.lift;
    }
    if (!ok) return "clause " + std::to_string(kind) + " violated on triple " + std::to_string(checked);
  }
  return {};
}

std::string ngram_mid() {
  using namespace latloc::ngram;
  auto traces = testing::mid_traces();
  auto verdicts = testing::mid_verdicts();
  auto blocks = linear_blocks(build_xsg(traces));
  auto block_holding = [&](Symbol s) {
    for (const auto& b : blocks) {
      if (std::find(b.items.begin(), b.items.end(), s) != b.items.end()) return b.block_id;
    }
    return 0u;
  };
  for (auto group : std::vector<std::vector<Symbol>>{{5, 10, 11}, {24, 6}}) {
    for (auto s : group) {
      if (block_holding(s) != block_holding(group.front()) || block_holding(s) == 0) {
        return "line " + std::to_string(s) + " split from its block";
      }
    }
  }
  for (const auto& t : traces) {
    if (expand_block_trace(to_block_trace(t, blocks), blocks) != t) return "block trace does not round-trip";
  }

  auto report = localize_lines(traces, verdicts, {Rational(1), 3});
  auto r15 = report.rank_of(15);
  if (!r15) return "line 15 not ranked";
  std::set<Symbol> failing_lines;
  std::set<Symbol> passing_lines;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    (verdicts[t] == Verdict::fail ? failing_lines : passing_lines).insert(traces[t].begin(), traces[t].end());
  }
  for (auto s : passing_lines) {
    if (failing_lines.contains(s)) continue;
    if (auto r = report.rank_of(s); r && *r < *r15) return "passing-only line " + std::to_string(s) + " outranks 15";
  }

  auto block_traces = testing::naive_block_traces(traces, blocks);
  if (report.grams.empty()) return "no grams reported";
  for (const auto& g : report.grams) {
    std::size_t total = 0, fail = 0;
    for (std::size_t t = 0; t < block_traces.size(); ++t) {
      if (!testing::occurs(block_traces[t], g.gram)) continue;
      ++total;
      fail += verdicts[t] == Verdict::fail;
    }
    if (total == 0 || g.confidence != Rational(static_cast<std::int64_t>(fail), static_cast<std::int64_t>(total))) {
      return "gram confidence differs from brute-force count";
    }
  }
  return {};
}

std::string tie_policy() {
  using namespace latloc::ngram;
  std::vector<Sequence> seqs;
  std::vector<Verdict> verdicts;
  for (int i = 0; i < 5; ++i) {
    auto v = i < 4 ? Verdict::fail : Verdict::pass;
    seqs.push_back({1, 2});
    seqs.push_back({3, 4});
    verdicts.push_back(v);
    verdicts.push_back(v);
  }
  auto report = localize_events(seqs, verdicts, {Rational(1, 2), 2});
  if (report.tie_groups.size() != 1 || report.tie_groups[0].confidence != Rational(4, 5)) {
    return "expected one tie group at confidence 4/5";
  }
  HandlerFaults faults{{1, {"f1"}}, {4, {"f2", "f3"}}};
  std::set<std::vector<Symbol>> best_quoted{{4, 1, 2, 3}, {4, 1, 3, 2}};
  std::set<std::vector<Symbol>> worst_quoted{{2, 3, 1, 4}, {3, 2, 1, 4}};
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    auto bw = best_worst_ranks(report, faults, seed);
    if (!best_quoted.contains(bw.best_order)) return "best order not one of the quoted orders";
    if (!worst_quoted.contains(bw.worst_order)) return "worst order not one of the quoted orders";
  }
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"solar-system golden lattice", 1, solar_golden},
      {"indicator golden values", 1, indicator_golden},
      {"FCA oracle equivalence (200 random contexts)", 30, fca_oracle},
      {"failure lattice monotony (mutants 1; 1+2+6; 1+7)", 30, monotony},
      {"single-fault localization (mutant 1)", 10, single_fault},
      {"multi-fault exploration (mutants 1+2+6)", 30, multi_fault},
      {"dependency classification and transitions", 30, dependencies},
      {"indicator dynamics (500 triples)", 10, indicator_dynamics},
      {"N-gram mid benchmark", 5, ngram_mid},
      {"event-mode tie policy", 1, tie_policy},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string reason;
    try {
      reason = c.check();
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    double elapsed = Seconds(std::chrono::steady_clock::now() - start).count();
    if (reason.empty() && elapsed >= c.limit_seconds) {
      reason = "took " + std::to_string(elapsed) + " s, limit " + std::to_string(c.limit_seconds) + " s";
    }
    char timing[48];
    std::snprintf(timing, sizeof timing, "%.3f s", elapsed);
    std::cout << (reason.empty() ? "PASS " : "FAIL ") << c.name << " (" << timing << ")";
    if (!reason.empty()) std::cout << ": " << reason;
    std::cout << std::endl;
    failed += !reason.empty();
  }
  return failed == 0 ? 0 : 1;
}
