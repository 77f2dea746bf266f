#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latloc/corpus.hpp"
#include "latloc/error.hpp"
#include "latloc/failure_lattice.hpp"
#include "latloc/json_io.hpp"
#include "latloc/ngram.hpp"
#include "latloc/rules.hpp"
#include "latloc/server.hpp"
#include "latloc/trace_model.hpp"

#include <sstream>

namespace py = pybind11;
using namespace latloc;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::object fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.numerator(), r.denominator());
}

Rational rational_arg(const py::handle& h) { return parse_rational(py::str(h).cast<std::string>()); }

ItemKind kind_arg(const std::string& kind) {
  if (kind == "line") return ItemKind::line;
  if (kind == "event") return ItemKind::event;
  throw Error("unknown item kind '" + kind + "'");
}

TraceMode mode_arg(const std::string& mode) {
  if (mode == "coverage") return TraceMode::coverage;
  if (mode == "sequence") return TraceMode::sequence;
  throw Error("unknown mode '" + mode + "'");
}

std::vector<ItemId> items_arg(const std::vector<std::uint32_t>& ids, ItemKind kind) {
  std::vector<ItemId> out;
  for (auto id : ids) out.push_back(make_item(kind, id));
  std::sort(out.begin(), out.end());
  return out;
}

py::dict stats_dict(const RuleStats& s) {
  py::dict d;
  d["support"] = s.support;
  d["normalized_support"] = fraction(s.normalized_support);
  d["confidence"] = s.confidence ? fraction(*s.confidence) : py::none();
  d["lift"] = s.lift ? fraction(*s.lift) : py::none();
  return d;
}

std::vector<std::vector<ItemId>> failing_coverage(const TraceContext& ctx) {
  std::vector<std::vector<ItemId>> out;
  for (const auto& e : ctx.executions()) {
    if (e.verdict == Verdict::fail) out.push_back(e.coverage);
  }
  return out;
}

std::vector<FailureRule> mine(const TraceContext& ctx, std::size_t min_support, const py::object& min_lift) {
  MiningOptions o;
  o.min_support = min_support;
  o.min_lift = rational_arg(min_lift);
  return mine_failure_rules(ctx, o);
}

std::vector<Verdict> verdicts_arg(const std::vector<std::string>& verdicts) {
  std::vector<Verdict> out;
  for (const auto& v : verdicts) {
    if (v == "pass") out.push_back(Verdict::pass);
    else if (v == "fail") out.push_back(Verdict::fail);
    else throw Error("unknown verdict '" + v + "'");
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Failure-lattice exploration and N-gram fault localization";

  py::register_exception<Error>(m, "LatlocError", PyExc_ValueError);

  py::class_<TraceContext>(m, "TraceContext")
      .def_property_readonly("object_count", &TraceContext::object_count)
      .def_property_readonly("failing_count", &TraceContext::failing_count)
      .def_property_readonly("items", [](const TraceContext& c) {
        std::vector<std::uint32_t> ids;
        for (std::size_t a = 0; a < c.item_count(); ++a) ids.push_back(c.attributes()[a].id);
        return ids;
      })
      .def_property_readonly("tests", [](const TraceContext& c) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : c.executions()) out.emplace_back(e.test_id, std::string(to_string(e.verdict)));
        return out;
      })
      .def("to_jsonl", [](const TraceContext& c) {
        std::ostringstream s;
        write_trace_context(s, c);
        return s.str();
      });

  m.def("load_trace_context",
        [](const std::string& path, const std::string& mode, const std::string& kind) {
          return load_trace_context(path, mode_arg(mode), kind_arg(kind));
        },
        py::arg("path"), py::arg("mode") = "coverage", py::arg("kind") = "line");
  m.def("parse_trace_context",
        [](const std::string& text, const std::string& mode, const std::string& kind) {
          std::istringstream in(text);
          return parse_trace_context(in, mode_arg(mode), kind_arg(kind));
        },
        py::arg("text"), py::arg("mode") = "coverage", py::arg("kind") = "line");

  m.def("failure_rule_stats",
        [](const TraceContext& ctx, const std::vector<std::uint32_t>& premise, const std::string& kind) {
          return stats_dict(failure_rule_stats(ctx, items_arg(premise, kind_arg(kind))));
        },
        py::arg("context"), py::arg("premise"), py::arg("kind") = "line");

  m.def("mine_failure_rules",
        [](const TraceContext& ctx, std::size_t min_support, const py::object& min_lift) {
          py::list out;
          for (const auto& r : mine(ctx, min_support, min_lift)) {
            auto d = stats_dict(r.stats);
            std::vector<std::uint32_t> premise;
            for (const auto& i : r.premise) premise.push_back(i.id);
            d["premise"] = premise;
            out.append(d);
          }
          return out;
        },
        py::arg("context"), py::arg("min_support") = 1, py::arg("min_lift") = 1);

  m.def("failure_lattice",
        [](const TraceContext& ctx, std::size_t min_support, const py::object& min_lift) {
          auto fl = FailureLattice::build(mine(ctx, min_support, min_lift));
          return to_py(json_io::lattice_to_json(fl, failing_coverage(ctx)));
        },
        py::arg("context"), py::arg("min_support") = 1, py::arg("min_lift") = 1,
        "Annotated failure lattice in the `lattice` command's JSON layout.");

  m.def("run_scripted",
        [](const TraceContext& ctx, const std::vector<std::uint32_t>& fault_items, std::size_t min_support,
           const py::object& min_lift, const std::string& strategy) {
          auto fl = FailureLattice::build(mine(ctx, min_support, min_lift));
          auto faults = items_arg(fault_items, ItemKind::line);
          auto run = run_scripted(fl, failing_coverage(ctx), {faults.begin(), faults.end()}, parse_strategy(strategy));
          auto j = json_io::session_to_json(run.session);
          j["inspected"] = json_io::items_to_json(run.inspected);
          j["located"] = json_io::items_to_json(run.located);
          return to_py(j);
        },
        py::arg("context"), py::arg("fault_items"), py::arg("min_support") = 1, py::arg("min_lift") = 1,
        py::arg("strategy") = "queue");

  m.def("classify_dependency",
        [](const std::set<std::string>& a, const std::set<std::string>& b) {
          return std::string(to_string(classify_dependency(a, b).kind));
        },
        py::arg("fail1"), py::arg("fail2"));

  m.def("run_program",
        [](const std::string& program, const std::vector<int>& mutants, const corpus::Input& input) {
          auto r = corpus::run_program(corpus::parse_program(program), mutants, input);
          return py::make_tuple(r.output, r.trace);
        },
        py::arg("program"), py::arg("mutants"), py::arg("input"));

  m.def("generate_corpus",
        [](const std::string& program, const std::vector<int>& mutants, int grid, std::size_t random_count,
           std::uint64_t seed) {
          corpus::SuiteSpec spec;
          spec.program = corpus::parse_program(program);
          spec.mutants = mutants;
          spec.grid = grid;
          spec.random_count = random_count;
          spec.seed = seed;
          auto g = corpus::generate_context(spec);
          return py::make_tuple(std::move(g.context), to_py(g.truth.to_json()));
        },
        py::arg("program"), py::arg("mutants"), py::arg("grid") = 7, py::arg("random_count") = 64,
        py::arg("seed") = 0);

  m.def("localize",
        [](const std::vector<ngram::Sequence>& traces, const std::vector<std::string>& verdicts,
           const std::string& mode, const py::object& min_support, std::size_t n_max) {
          ngram::NGramOptions o;
          o.min_support = rational_arg(min_support);
          o.n_max = n_max;
          auto v = verdicts_arg(verdicts);
          if (mode != "line" && mode != "event") throw Error("mode must be line or event");
          auto report = mode == "line" ? ngram::localize_lines(traces, v, o) : ngram::localize_events(traces, v, o);
          return to_py(json_io::report_to_json(report, mode));
        },
        py::arg("traces"), py::arg("verdicts"), py::arg("mode") = "line", py::arg("min_support") = "9/10",
        py::arg("n_max") = 3);

  py::class_<ExploreService>(m, "ExploreService")
      .def(py::init([](const TraceContext& ctx, std::size_t min_support, const py::object& min_lift,
                       const std::string& strategy) {
             json_io::LatticeFile file;
             file.rules = mine(ctx, min_support, min_lift);
             file.failing_coverage = failing_coverage(ctx);
             return std::make_unique<ExploreService>(std::move(file), parse_strategy(strategy));
           }),
           py::arg("context"), py::arg("min_support") = 1, py::arg("min_lift") = 1, py::arg("strategy") = "queue")
      .def("lattice", [](const ExploreService& s) { return to_py(s.lattice()); })
      .def("session", [](const ExploreService& s) { return to_py(s.session()); })
      .def("decide", [](ExploreService& s, const py::object& body) { return to_py(s.decide(from_py(body))); })
      .def("reset", [](ExploreService& s, const py::object& body) { return to_py(s.reset(from_py(body))); },
           py::arg("body") = py::dict());
}
