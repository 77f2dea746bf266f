#include "latloc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "latloc/corpus.hpp"
#include "latloc/error.hpp"
#include "latloc/failure_lattice.hpp"
#include "latloc/json_io.hpp"
#include "latloc/ngram.hpp"
#include "latloc/rules.hpp"
#include "latloc/server.hpp"
#include "latloc/trace_model.hpp"

namespace latloc {

namespace {

struct Options {
  std::string input;
  std::string out;
  std::string traces;
  std::string dot;
  std::string truth;
  std::string mode = "coverage";
  std::string ngram_mode = "line";
  std::string kind = "line";
  std::string min_sup;
  std::string ngram_min_sup = "0.9";
  std::string min_lift = "1";
  std::size_t n_max = 3;
  std::uint64_t seed = 0;
  std::string strategy = "queue";
  int serve = -1;
  std::string host = "127.0.0.1";
  std::string static_dir;
  std::string program = "trityp";
  std::vector<int> mutants;
  int grid = 7;
  std::size_t random_count = 64;
};

std::uint64_t effective_seed(const Options& o) {
  if (const char* env = std::getenv("LATLOC_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(std::string("LATLOC_SEED is not a non-negative integer: ") + env);
  }
  return o.seed;
}

ItemKind item_kind(const std::string& text) {
  if (text == "line") return ItemKind::line;
  if (text == "event") return ItemKind::event;
  throw Error("unknown item kind '" + text + "' (expected line or event)");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(path + " is not valid JSON");
  return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

void write_json(const std::string& path, const nlohmann::json& j, std::ostream& out) {
  write_text(path, j.dump(2) + "\n", out);
}

std::vector<std::vector<ItemId>> failing_coverage(const TraceContext& ctx) {
  std::vector<std::vector<ItemId>> out;
  for (const auto& e : ctx.executions()) {
    if (e.verdict == Verdict::fail) out.push_back(e.coverage);
  }
  return out;
}

std::string join(const std::vector<ItemId>& items) {
  std::string s;
  for (const auto& i : items) {
    if (!s.empty()) s += ' ';
    s += i.display;
  }
  return s.empty() ? "-" : s;
}

int cmd_ingest(const Options& o, std::ostream& out) {
  auto mode = o.mode == "sequence" ? TraceMode::sequence : TraceMode::coverage;
  auto ctx = load_trace_context(o.input, mode, item_kind(o.kind));
  if (!o.out.empty()) {
    std::ostringstream s;
    write_trace_context(s, ctx);
    write_text(o.out, s.str(), out);
  }
  auto items = nlohmann::json::array();
  for (std::size_t a = 0; a < ctx.item_count(); ++a) items.push_back(ctx.attributes()[a].id);
  nlohmann::json summary{{"format", json_io::kFormat},
                         {"mode", o.mode},
                         {"item_kind", o.kind},
                         {"tests", ctx.object_count()},
                         {"failing", ctx.failing_count()},
                         {"passing", ctx.object_count() - ctx.failing_count()},
                         {"items", items}};
  if (o.out.empty() || o.out != "-") write_json("", summary, out);
  return 0;
}

int cmd_mine(const Options& o, std::ostream& out) {
  auto ctx = load_trace_context(o.input, TraceMode::coverage, item_kind(o.kind));
  MiningOptions mo;
  if (!o.min_sup.empty()) {
    auto sup = parse_rational(o.min_sup);
    if (sup.denominator() != 1 || sup < 1) throw Error("--min-sup must be a positive integer for mine");
    mo.min_support = static_cast<std::size_t>(sup.numerator());
  }
  mo.min_lift = parse_rational(o.min_lift);
  if (mo.min_lift < 0) throw Error("--min-lift must be non-negative");
  auto rules = mine_failure_rules(ctx, mo);
  write_json(o.out, json_io::rules_to_json(rules, item_kind(o.kind)), out);
  return 0;
}

int cmd_lattice(const Options& o, std::ostream& out) {
  auto file = json_io::rules_from_json(read_json(o.input));
  auto ctx = load_trace_context(o.traces, TraceMode::coverage, file.kind);
  auto failing = failing_coverage(ctx);
  auto fl = FailureLattice::build(std::move(file.rules));
  write_json(o.out, json_io::lattice_to_json(fl, failing, file.kind), out);
  if (!o.dot.empty()) {
    auto dot = fca::export_dot(fl.lattice(), fl.context());
    std::ofstream f(o.dot, std::ios::binary);
    if (!f) throw Error("cannot write " + o.dot);
    f << dot;
  }
  return 0;
}

void present(std::ostream& out, const FailureLattice& fl, const Presentation& p, const ExplorationSession& s) {
  out << "concept " << p.concept_id;
  if (p.annotation) {
    out << "  support " << p.annotation->support << "  lift " << to_string(p.annotation->lift);
  }
  out << "\n  label: " << join(p.label) << "\n  intent: " << join(fl.intent_items(p.concept_id))
      << "\n  fault context: " << join(p.fault_context) << "\n  frontier " << s.frontier().size()
      << ", failures to explain " << s.failures_to_explain().size() << "\n";
}

int explore_terminal(const Options& o, json_io::LatticeFile file, std::ostream& out, std::istream& in) {
  auto kind = file.kind;
  auto fl = FailureLattice::build(std::move(file.rules));
  auto session = ExplorationSession::start(fl, file.failing_coverage, parse_strategy(o.strategy));
  bool quit = false;
  while (!session.finished() && !quit) {
    auto p = session.next_concept(fl);
    present(out, fl, p, session);
    for (;;) {
      out << "[f <items> | n | q]> " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        quit = true;
        break;
      }
      std::istringstream words(line);
      std::string cmd;
      words >> cmd;
      if (cmd == "q") {
        quit = true;
        break;
      }
      if (cmd == "n") {
        session.apply_decision(fl, p.concept_id, Decision::no_fault());
        break;
      }
      if (cmd == "f") {
        std::vector<ItemId> items;
        long long v = 0;
        while (words >> v) {
          if (v < 0) break;
          items.push_back(make_item(kind, static_cast<std::uint32_t>(v)));
        }
        if (!words.eof() || items.empty()) {
          out << "expected: f <item> [<item>...]\n";
          continue;
        }
        session.apply_decision(fl, p.concept_id, Decision::fault_located(std::move(items)));
        break;
      }
      out << "unrecognized input\n";
    }
  }
  out << (session.failures_to_explain().empty() ? "all failure concepts explained"
                                                 : "stopped with failure concepts left to explain")
      << " after " << session.log().size() << " decisions, " << session.fault_context().size()
      << " items inspected\n";
  if (!o.out.empty()) write_json(o.out, json_io::session_to_json(session), out);
  return 0;
}

int cmd_explore(const Options& o, std::ostream& out, std::istream& in) {
  auto file = json_io::lattice_file_from_json(read_json(o.input));
  if (o.serve < 0) return explore_terminal(o, std::move(file), out, in);
  ExploreService service(std::move(file), parse_strategy(o.strategy));
  std::optional<std::filesystem::path> static_dir;
  if (!o.static_dir.empty()) static_dir = o.static_dir;
  HttpServer server(service, static_dir);
  int port = server.bind(o.host, o.serve);
  out << "serving on http://" << o.host << ":" << port << std::endl;
  server.serve();
  return 0;
}

ngram::HandlerFaults handler_faults(const nlohmann::json& j) {
  ngram::HandlerFaults faults;
  if (j.contains("fault_lines")) {
    auto truth = corpus::GroundTruth::from_json(j);
    for (const auto& [mutant, line] : truth.fault_lines) faults[line].insert(std::to_string(mutant));
    return faults;
  }
  if (!j.contains("handler_faults") || !j["handler_faults"].is_object()) {
    throw Error("ground truth needs \"fault_lines\" or \"handler_faults\"");
  }
  for (const auto& [item, names] : j["handler_faults"].items()) {
    faults[static_cast<ngram::Symbol>(std::stoul(item))] = names.get<std::set<std::string>>();
  }
  return faults;
}

int cmd_ngram(const Options& o, std::ostream& out) {
  if (o.ngram_mode != "line" && o.ngram_mode != "event") throw Error("--mode must be line or event");
  auto ctx = load_trace_context(o.input, TraceMode::sequence, item_kind(o.ngram_mode));
  std::vector<ngram::Sequence> sequences;
  std::vector<Verdict> verdicts;
  for (const auto& e : ctx.executions()) {
    ngram::Sequence s;
    for (const auto& i : e.sequence) s.push_back(i.id);
    sequences.push_back(std::move(s));
    verdicts.push_back(e.verdict);
  }
  ngram::NGramOptions opts;
  opts.min_support = parse_rational(o.ngram_min_sup);
  opts.n_max = o.n_max;
  auto report = o.ngram_mode == "line" ? ngram::localize_lines(sequences, verdicts, opts)
                                 : ngram::localize_events(sequences, verdicts, opts);
  std::optional<ngram::BestWorst> envelope;
  if (!o.truth.empty()) {
    envelope = ngram::best_worst_ranks(report, handler_faults(read_json(o.truth)), effective_seed(o));
  }
  write_json(o.out, json_io::report_to_json(report, o.ngram_mode, envelope), out);
  return 0;
}

int cmd_corpus(const Options& o, std::ostream& out) {
  corpus::SuiteSpec spec;
  spec.program = corpus::parse_program(o.program);
  spec.mutants = o.mutants;
  spec.grid = o.grid;
  spec.random_count = o.random_count;
  spec.seed = effective_seed(o);
  auto generated = corpus::generate_context(spec);
  std::ostringstream s;
  write_trace_context(s, generated.context);
  write_text(o.out, s.str(), out);
  if (!o.truth.empty()) write_json(o.truth, generated.truth.to_json(), out);
  return 0;
}

int cmd_deps(const Options& o, std::ostream& out) {
  auto truth = corpus::GroundTruth::from_json(read_json(o.input));
  auto pairs = nlohmann::json::array();
  for (auto a = truth.failing.begin(); a != truth.failing.end(); ++a) {
    for (auto b = std::next(a); b != truth.failing.end(); ++b) {
      auto dep = classify_dependency(a->second, b->second);
      nlohmann::json p{{"first", a->first}, {"second", b->first}, {"kind", std::string(to_string(dep.kind))}};
      if (dep.first_depends_on_second) {
        p["dependent"] = *dep.first_depends_on_second ? a->first : b->first;
      }
      pairs.push_back(std::move(p));
    }
  }
  write_json(o.out, {{"format", json_io::kFormat}, {"pairs", std::move(pairs)}}, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Fault localization by failure-lattice exploration and N-gram analysis", "latloc"};
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Validate a trace file and summarize it");
  ingest->add_option("traces", o.input, "Trace file (JSON lines or CSV)")->required();
  ingest->add_option("--mode", o.mode, "coverage or sequence")
      ->check(CLI::IsMember({"coverage", "sequence"}))
      ->default_val("coverage");
  ingest->add_option("--kind", o.kind, "Item kind: line or event")->check(CLI::IsMember({"line", "event"}));
  ingest->add_option("--out", o.out, "Write the normalized trace file here");

  auto* mine = app.add_subcommand("mine", "Mine failure rules");
  mine->add_option("traces", o.input, "Trace file")->required();
  mine->add_option("--min-sup", o.min_sup, "Minimum support (test count)");
  mine->add_option("--min-lift", o.min_lift, "Minimum lift (rational, e.g. 1.25 or 5/4)");
  mine->add_option("--kind", o.kind, "Item kind: line or event")->check(CLI::IsMember({"line", "event"}));
  mine->add_option("--out", o.out, "Output file (default stdout)");

  auto* lattice = app.add_subcommand("lattice", "Build the annotated failure lattice");
  lattice->add_option("rules", o.input, "Rules file from `mine`")->required();
  lattice->add_option("--traces", o.traces, "Trace file the rules were mined from")->required();
  lattice->add_option("--out", o.out, "Output file (default stdout)");
  lattice->add_option("--dot", o.dot, "Also write a DOT rendering");

  auto* explore = app.add_subcommand("explore", "Explore a failure lattice");
  explore->add_option("lattice", o.input, "Lattice file from `lattice`")->required();
  explore->add_option("--strategy", o.strategy, "queue or stack")->check(CLI::IsMember({"queue", "stack"}));
  explore->add_option("--serve", o.serve, "Serve the HTTP API on this port (0 picks one)")
      ->check(CLI::Range(0, 65535));
  explore->add_option("--host", o.host, "Bind address for --serve");
  explore->add_option("--static", o.static_dir, "Directory of static files to serve");
  explore->add_option("--out", o.out, "Write the final session snapshot (terminal mode)");

  auto* ng = app.add_subcommand("ngram", "Rank lines or events with N-gram analysis");
  ng->add_option("traces", o.input, "Trace file with exact sequences")->required();
  ng->add_option("--mode", o.ngram_mode, "line or event")->check(CLI::IsMember({"line", "event"}))->default_val("line");
  ng->add_option("--min-sup", o.ngram_min_sup, "Minimum support as a fraction of failing traces")->default_val("0.9");
  ng->add_option("--nmax", o.n_max, "Longest gram")->check(CLI::PositiveNumber)->default_val(3);
  ng->add_option("--ground-truth", o.truth, "Ground-truth file for the best/worst envelope");
  ng->add_option("--seed", o.seed, "Seed for tie shuffles (LATLOC_SEED overrides)");
  ng->add_option("--out", o.out, "Output file (default stdout)");

  auto* corp = app.add_subcommand("corpus", "Generate a benchmark trace file");
  corp->add_option("--program", o.program, "trityp or mid")->check(CLI::IsMember({"trityp", "mid"}));
  corp->add_option("--mutants", o.mutants, "Mutant ids, comma separated")->delimiter(',');
  corp->add_option("--grid", o.grid, "Inputs cover [0..grid]^3")->check(CLI::NonNegativeNumber);
  corp->add_option("--random", o.random_count, "Extra seeded random inputs");
  corp->add_option("--seed", o.seed, "Seed for random inputs (LATLOC_SEED overrides)");
  corp->add_option("--out", o.out, "Trace file (default stdout)");
  corp->add_option("--truth", o.truth, "Ground-truth sidecar");

  auto* deps = app.add_subcommand("deps", "Classify fault dependencies from a ground-truth file");
  deps->add_option("truth", o.input, "Ground-truth sidecar from `corpus`")->required();
  deps->add_option("--out", o.out, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(o, out);
    if (mine->parsed()) return cmd_mine(o, out);
    if (lattice->parsed()) return cmd_lattice(o, out);
    if (explore->parsed()) return cmd_explore(o, out, in);
    if (ng->parsed()) return cmd_ngram(o, out);
    if (corp->parsed()) return cmd_corpus(o, out);
    if (deps->parsed()) return cmd_deps(o, out);
  } catch (const ParseError& e) {
    err << "error: " << o.input << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace latloc
