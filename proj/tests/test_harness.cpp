#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lex_gen.hpp"
#include "zorn/cli.hpp"
#include "zorn/harness.hpp"

using namespace zorn;
using namespace zorn::harness;

namespace {

PredNode atom_eq(Nat i, Nat v) {
  PredNode n;
  n.kind = PredNode::Kind::eq_const;
  n.i = i;
  n.value = v;
  return n;
}

/// Fixed probe suite: carriers and answer functions the challengers see.
struct ProbeSuite {
  std::vector<Carrier> carriers;
  std::vector<Nat> salts;
};

ProbeSuite probe_suite() {
  std::mt19937_64 rng(99);
  ProbeSuite s;
  for (int i = 0; i < 100; ++i) {
    s.carriers.push_back(testgen::gen_nat_seq(rng, 6, 4));
    s.salts.push_back(rng() % 5);
  }
  return s;
}

std::vector<std::string> observe(const GeneratedChallengers& g, const ProbeSuite& suite) {
  auto pair = g.pair();
  std::vector<std::string> out;
  for (std::size_t i = 0; i < suite.carriers.size(); ++i) {
    Nat salt = suite.salts[i];
    SizeProbe<Sig> h = [salt](const Step& a) { return (a.n + a.y.at(a.n) + salt) % 4; };
    auto step = pair.G(suite.carriers[i], h);
    std::ostringstream os;
    os << pair.F(suite.carriers[i], h) << '/' << step.n << '/' << format_approx(step.y.take(8));
    out.push_back(os.str());
  }
  return out;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "zlr");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("predicate atoms and the absent-position convention") {
  auto a = atom_eq(2, 7);
  CHECK(eval_predicate(a, {7, 7, 7}));
  CHECK(eval_predicate(a, {7, 7}));
  CHECK_FALSE(eval_predicate(a, {7, 7, 6}));

  GenConfig cfg;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    auto q = gen_predicate(rng, cfg, 0);
    auto k = q.tree->kind;
    CHECK((k == PredNode::Kind::yes || k == PredNode::Kind::no));
  }
}

TEST_CASE("generated predicates read at most q_depth positions") {
  GenConfig cfg;
  cfg.q_depth = 3;
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    auto q = gen_predicate(rng, cfg).fn();
    std::vector<Nat> u{1, 2, 0, 3, 3, 1};
    for (Nat tail = 0; tail < 4; ++tail) {
      auto v = u;
      v[3] = tail;
      v[5] = 3 - tail;
      CHECK(q(u) == q(v));
    }
  }
}

TEST_CASE("depth-0 challengers ignore their probe") {
  GenConfig cfg;
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    auto pair = gen_challengers(rng, cfg, 0).pair();
    int calls = 0;
    SizeProbe<Sig> h = [&](const Step&) -> Nat { return ++calls; };
    Nat v = pair.F(Carrier::constant(2), h);
    pair.G(Carrier::constant(2), h);
    CHECK(calls == 0);
    CHECK(v <= cfg.elem_max);
  }
}

TEST_CASE("challenger calls make at most f_depth queries") {
  GenConfig cfg;
  cfg.f_depth = 3;
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    auto pair = gen_challengers(rng, cfg).pair();
    int calls = 0;
    SizeProbe<Sig> h = [&](const Step& a) -> Nat { return ++calls + a.n; };
    pair.F(Carrier::filled({1, 2}, 3), h);
    CHECK(calls <= 3);
    calls = 0;
    pair.G(Carrier::filled({1, 2}, 3), h);
    CHECK(calls <= 3);
  }
}

TEST_CASE("replaying a sub-seed regenerates the same instance") {
  GenConfig cfg;
  auto suite = probe_suite();
  for (Nat id = 0; id < 30; ++id) {
    auto seed = derive_sub_seed(cfg.seed, id);
    auto a = generate_case(cfg, seed);
    auto b = generate_case(cfg, seed);
    CHECK(describe(*a.q.tree) == describe(*b.q.tree));
    CHECK(observe(a.challengers, suite) == observe(b.challengers, suite));
    CHECK(a.x.take(12) == b.x.take(12));
  }
}

TEST_CASE("generator totality: challengers alone stay within the engineering bound") {
  GenConfig cfg;
  Nat bound = cfg.f_depth * cfg.scan_cap * 16;
  auto ops = lex::nat_ops();
  auto suite = probe_suite();
  for (Nat id = 0; id < 300; ++id) {
    auto c = generate_case(cfg, derive_sub_seed(7, id));
    auto pair = c.challengers.pair();
    SizeProbe<Sig> p = [](const Step& a) { return a.n; };
    auto cut = lex::e_lex(pair.F, c.x, p, ops, Budget(bound), cfg.scan_cap);
    CHECK(cut.has_value());
    auto q = c.q.fn();
    for (const auto& y : suite.carriers) {
      CHECK(pair.F(y, p) <= cfg.elem_max);
      q(y.take(pair.F(y, p)));
    }
  }
}

TEST_CASE("campaigns are deterministic and self-consistent") {
  GenConfig cfg;
  cfg.cases = 40;
  auto a = run_campaign(cfg);
  auto b = run_campaign(cfg);
  REQUIRE(a.records.size() == 40);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].case_id == i);
    CHECK(to_jsonl(a.records[i]) == to_jsonl(b.records[i]));
    CHECK(record_consistent(a.records[i]));
    CHECK(a.records[i].report.status != GoalStatus::violated);
  }
  cfg.jobs = 3;
  auto c = run_campaign(cfg);
  for (std::size_t i = 0; i < a.records.size(); ++i)
    CHECK(to_jsonl(a.records[i]) == to_jsonl(c.records[i]));

  cfg.cases = 1;
  CHECK(to_jsonl(run_campaign(cfg).records[0]) == to_jsonl(run_campaign(cfg).records[0]));
}

TEST_CASE("no fuel, no results") {
  GenConfig cfg;
  cfg.cases = 10;
  cfg.fuel = 0;
  auto out = run_campaign(cfg);
  CHECK(out.summary.exhausted == 10);
}

TEST_CASE("caps below one are rejected") {
  GenConfig cfg;
  cfg.q_depth = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("JSONL schema") {
  GenConfig cfg;
  cfg.cases = 1;
  auto line = to_jsonl(run_campaign(cfg).records[0]);
  auto j = nlohmann::ordered_json::parse(line);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"case_id", "sub_seed", "status", "r", "s_prefix", "gamma_len",
                                         "q_x_r", "q_s", "c_holds", "rp_ok", "budget_spent"});
  CHECK(line.find('\n') == std::string::npos);
}

TEST_CASE("command line") {
  auto usage = cli({});
  CHECK(usage.code == 2);
  CHECK(usage.err.find("usage:") != std::string::npos);
  CHECK(cli({"demo", "bounded"}).code == 2);
  CHECK(cli({"demo", "maximal-ideal", "--ring", "q"}).code == 2);
  CHECK(cli({"fuzz", "--q-depth", "0"}).code == 2);

  auto diverge = cli({"demo", "diverge", "--fuel", "1000"});
  CHECK(diverge.code == 0);
  CHECK(diverge.out.find("exhausted") != std::string::npos);

  auto bounded = cli({"demo", "bounded", "--n", "5"});
  CHECK(bounded.code == 0);
  CHECK(bounded.out == "bounded: value 5\n");

  auto dir = std::filesystem::temp_directory_path();
  auto p1 = dir / "zlr_cli_a.jsonl";
  auto p2 = dir / "zlr_cli_b.jsonl";
  auto fuzz = cli({"fuzz", "--cases", "20", "--seed", "7", "--fuel", "100000", "--report", p1.string()});
  CHECK(fuzz.code == 0);
  std::string first = slurp(p1);
  CHECK(std::count(first.begin(), first.end(), '\n') == 20);

  ::setenv("ZL_SEED", "7", 1);
  auto env = cli({"fuzz", "--cases", "20", "--seed", "8", "--fuel", "100000", "--report", p2.string()});
  ::setenv("ZL_SEED", "not-a-number", 1);
  auto bad_env = cli({"fuzz", "--cases", "1"});
  ::unsetenv("ZL_SEED");
  CHECK(env.code == 0);
  CHECK(slurp(p2) == first);
  CHECK(bad_env.code == 2);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("property: goal reports are stable in the budget") {
  GenConfig cfg;
  for (Nat id = 0; id < 60; ++id) {
    auto c = generate_case(cfg, derive_sub_seed(3, id));
    auto full = run_case(cfg, c);
    if (full.status == GoalStatus::exhausted) continue;
    Nat needed = full.budget_spent;
    auto exact_cfg = cfg;
    exact_cfg.fuel = needed;
    auto exact = run_case(exact_cfg, c);
    CHECK(exact.status == full.status);
    CHECK(exact.r == full.r);
    CHECK(exact.s_prefix == full.s_prefix);
    CHECK(exact.budget_spent == needed);
    auto short_cfg = cfg;
    short_cfg.fuel = needed - 1;
    CHECK(run_case(short_cfg, c).status == GoalStatus::exhausted);
  }
}
