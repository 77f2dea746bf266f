#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "latloc/error.hpp"
#include "support.hpp"

using namespace latloc;
using testing::line;
using testing::lines;

namespace {

TraceContext parse(const std::string& text, TraceMode mode = TraceMode::coverage) {
  std::istringstream in(text);
  return parse_trace_context(in, mode);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text, TraceMode::sequence);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("mid table loads with one failing test") {
  auto ctx = load_trace_context(testing::data_path("mid.jsonl"), TraceMode::sequence);
  CHECK(ctx.object_count() == 6);
  CHECK(ctx.failing_count() == 1);
  CHECK(ctx.passing_objects().count() == 5);
  CHECK(ctx.executions()[5].test_id == "t6");
  CHECK(ctx.executions()[5].verdict == Verdict::fail);
}

TEST_CASE("repeated items collapse in the coverage but not in the sequence") {
  auto ctx = load_trace_context(testing::data_path("mid.jsonl"), TraceMode::sequence);
  const auto& t1 = ctx.executions()[0];
  CHECK(t1.sequence.size() == 10);
  CHECK(std::count(t1.coverage.begin(), t1.coverage.end(), line(4)) == 1);
  CHECK(t1.coverage == lines({4, 5, 6, 10, 11, 12, 14, 15, 24}));
}

TEST_CASE("coverage_of deduplicates and sorts") {
  std::vector<ItemId> seq;
  for (auto n : {4, 4, 5, 10, 11, 12, 14, 15, 24, 6}) seq.push_back(line(n));
  CHECK(coverage_of(seq) == lines({4, 5, 6, 10, 11, 12, 14, 15, 24}));
  CHECK(coverage_of(std::vector<ItemId>{line(7)}) == lines({7}));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> item(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ItemId> s(1 + trial % 17);
    for (auto& i : s) i = line(item(rng));
    auto c = coverage_of(s);
    CHECK(c.size() <= s.size());
    CHECK(coverage_of(c) == c);
    CHECK(std::is_sorted(c.begin(), c.end()));
  }
}

TEST_CASE("empty input is rejected") {
  CHECK(parse_error("") .find("no executions") != std::string::npos);
  CHECK(parse_error("\n  \n").find("no executions") != std::string::npos);
}

TEST_CASE("malformed records report their line number") {
  auto msg = parse_error("{\"test\":\"a\",\"verdict\":\"pass\",\"trace\":[1]}\n{\"test\":\"b\",\"verdict\":\"pass\"");
  CHECK(msg.find("line 2") != std::string::npos);
  try {
    parse("{\"test\":\"a\",\"verdict\":\"pass\",\"trace\":[1]}\n\n{\"test\":\"b\"}", TraceMode::sequence);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("validation errors") {
  CHECK(parse_error("{\"test\":\"a\",\"verdict\":\"pass\",\"trace\":[1]}\n{\"test\":\"a\",\"verdict\":\"fail\",\"trace\":[2]}")
            .find("duplicate") != std::string::npos);
  CHECK(parse_error("{\"test\":\"a\",\"verdict\":\"pass\",\"trace\":[]}").find("empty") != std::string::npos);
  CHECK(parse_error("{\"test\":\"a\",\"verdict\":\"maybe\",\"trace\":[1]}").find("verdict") != std::string::npos);
  CHECK(parse_error("{\"test\":\"a\",\"verdict\":\"pass\",\"trace\":[-1]}") != "");
}

TEST_CASE("rows hold coverage plus exactly one verdict") {
  auto ctx = load_trace_context(testing::data_path("mid.jsonl"), TraceMode::coverage);
  const auto& k = ctx.formal();
  for (std::size_t o = 0; o < ctx.object_count(); ++o) {
    CHECK(k.has(o, ctx.pass_attribute()) != k.has(o, ctx.fail_attribute()));
    const auto& e = ctx.executions()[o];
    CHECK(k.has(o, ctx.fail_attribute()) == (e.verdict == Verdict::fail));
    for (std::size_t a = 0; a < ctx.item_count(); ++a) {
      bool covered = std::find(e.coverage.begin(), e.coverage.end(), ctx.attributes()[a]) != e.coverage.end();
      CHECK(k.has(o, a) == covered);
    }
  }
  CHECK((ctx.failing_objects() & ctx.passing_objects()).none());
  CHECK((ctx.failing_objects() | ctx.passing_objects()).count() == ctx.object_count());
}

TEST_CASE("no dead item columns") {
  auto ctx = load_trace_context(testing::data_path("mid.jsonl"), TraceMode::coverage);
  for (std::size_t a = 0; a < ctx.item_count(); ++a) CHECK(ctx.formal().column(a).any());
}

TEST_CASE("coverage mode drops sequences") {
  auto ctx = load_trace_context(testing::data_path("mid.jsonl"), TraceMode::coverage);
  CHECK(ctx.mode() == TraceMode::coverage);
  CHECK(ctx.executions()[0].sequence.empty());
  CHECK(ctx.executions()[0].coverage.size() == 9);
}

TEST_CASE("CSV variant is accepted in coverage mode only") {
  auto ctx = load_trace_context(testing::data_path("solar.csv"), TraceMode::coverage);
  CHECK(ctx.object_count() == 8);
  CHECK(ctx.failing_count() == 2);
  CHECK(ctx.item_count() == 7);
  CHECK_THROWS_AS(load_trace_context(testing::data_path("solar.csv"), TraceMode::sequence), Error);
}

TEST_CASE("item identity is the id, not the display") {
  auto a = parse("{\"test\":\"x\",\"verdict\":\"fail\",\"trace\":[3,1]}\n{\"test\":\"y\",\"verdict\":\"pass\",\"trace\":[1]}");
  auto b = parse("y,pass,1\nx,fail,1,3\n");
  CHECK(equivalent(a, b));
  ItemId relabeled = line(3);
  relabeled.display = "three";
  CHECK(relabeled == line(3));
}

TEST_CASE("serialize then load gives an equivalent context") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> item(1, 30);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TestExecution> execs;
    for (int t = 0; t < 1 + trial % 9; ++t) {
      std::vector<std::uint32_t> trace(1 + (t * 7 + trial) % 12);
      for (auto& x : trace) x = item(rng);
      execs.push_back(testing::execution("t" + std::to_string(t), (t + trial) % 3 == 0, trace));
    }
    for (auto mode : {TraceMode::coverage, TraceMode::sequence}) {
      auto ctx = TraceContext::from_executions(execs, mode);
      std::ostringstream out;
      write_trace_context(out, ctx);
      std::istringstream in(out.str());
      auto back = parse_trace_context(in, mode);
      CHECK(equivalent(ctx, back));
      if (mode == TraceMode::sequence) {
        for (std::size_t i = 0; i < execs.size(); ++i) CHECK(back.executions()[i].sequence == ctx.executions()[i].sequence);
      }
    }
  }
}

TEST_CASE("verdict items cannot be spoofed through the input") {
  auto ctx = parse("a,fail,1,2\nb,pass,2\n");
  CHECK(ctx.attributes()[ctx.pass_attribute()].kind == ItemKind::verdict_pass);
  CHECK(ctx.attributes()[ctx.fail_attribute()].kind == ItemKind::verdict_fail);
  CHECK(ctx.item_count() == 2);
  CHECK_THROWS_AS(ctx.attribute_index(line(99)), Error);
}
