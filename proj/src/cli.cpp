#include "zorn/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zorn/harness.hpp"
#include "zorn/instances.hpp"
#include "zorn/report.hpp"

namespace zorn {

namespace {

constexpr const char* kSynopsis =
    "usage: zlr fuzz [--cases N] [--seed S] [--fuel N] [--q-depth N] [--f-depth N]\n"
    "                [--elem-max N] [--scan-cap N] [--report PATH] [--trace-prefix-len N]\n"
    "       zlr demo subset-phi | diverge | bounded --n N | omega-n --n N\n"
    "                | maximal-ideal --ring z   [--fuel N] [--trace-prefix-len N]\n"
    "environment: ZL_SEED overrides --seed\n";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_exhausted(std::ostream& out, const Exhausted& e) {
  out << "exhausted: reason=" << to_string(e.reason) << " unfoldings=" << e.unfoldings
      << " elided=" << e.elided << '\n';
  for (const auto& f : e.frames) out << "  " << f.recursor << ' ' << f.prefix << '\n';
}

template <class V>
void print_outcome(std::ostream& out, const char* label, const Outcome<V>& o) {
  out << label << ": ";
  if (o.has_value()) {
    out << "value " << o.value() << '\n';
  } else {
    print_exhausted(out, o.exhausted());
  }
}

int run_fuzz(const harness::GenConfig& cfg, const std::string& report_path, std::ostream& out,
             std::ostream& err) {
  harness::validate(cfg);
  auto start = std::chrono::steady_clock::now();
  auto campaign = harness::run_campaign(cfg);
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!report_path.empty()) {
    std::ofstream file(report_path, std::ios::binary);
    if (!file) {
      err << "cannot open report file " << report_path << '\n';
      return 2;
    }
    for (const auto& rec : campaign.records) file << harness::to_jsonl(rec) << '\n';
  }
  const auto& s = campaign.summary;
  out << "cases=" << campaign.records.size() << " ok=" << s.ok << " violated=" << s.violated
      << " exhausted=" << s.exhausted << " rp_failures=" << s.rp_failures << " seconds="
      << std::fixed << std::setprecision(2) << seconds << '\n';
  for (const auto& rec : campaign.records)
    if (rec.report.status == GoalStatus::violated)
      out << "violated case " << rec.case_id << " sub_seed " << rec.sub_seed << '\n';
  return s.violated == 0 ? 0 : 1;
}

int run_maximal_ideal(Budget budget, std::size_t prefix_len, std::ostream& out) {
  auto ring = zigzag_ring_z();
  struct Named {
    const char* name;
    ideal::Challengers pair;
  };
  Named pairs[] = {{"constant", ideal::constant_challengers()},
                   {"depth-1", ideal::depth1_challengers()},
                   {"adversarial", ideal::adversarial_challengers()}};
  GoalOptions opts;
  opts.prefix_len = prefix_len;
  bool violated = false;
  for (const auto& [name, pair] : pairs) {
    auto rep = ideal::maximal_ideal_demo(ring, pair.F, pair.G, budget, opts);
    out << "== " << name << " ==\n";
    out << "code  element  member\n";
    for (std::size_t c = 0; c < rep.s_prefix.size(); ++c)
      out << std::setw(4) << c << "  " << std::setw(7) << zigzag_decode(c) << "  "
          << rep.s_prefix[c] << '\n';
    out << goal_report_json(rep).dump() << '\n';
    violated = violated || rep.status == GoalStatus::violated;
  }
  return violated ? 1 : 0;
}

std::uint64_t parse_seed_env(const char* text) {
  std::string s(text);
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s.front() == '-')
    throw UsageError("ZL_SEED must be a non-negative integer");
  return v;
}

}  // namespace

int cli_main(int argc, char** argv) { return cli_main(argc, argv, std::cout, std::cerr); }

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recursion over chain-bounded partial orders: demos and fuzz campaigns", "zlr"};
  app.require_subcommand(1);
  app.fallthrough();

  harness::GenConfig cfg;
  Nat fuel = cfg.fuel;
  std::string report_path;
  std::size_t trace_prefix_len = 16;

  app.add_option("--fuel", fuel, "Unfolding budget per evaluation");
  app.add_option("--trace-prefix-len", trace_prefix_len, "Carrier entries shown per trace frame")
      ->check(CLI::PositiveNumber);

  auto* fuzz = app.add_subcommand("fuzz", "Run a seeded goal-checker campaign");
  fuzz->add_option("--cases", cfg.cases, "Number of cases");
  fuzz->add_option("--seed", cfg.seed, "Campaign seed (ZL_SEED overrides)");
  fuzz->add_option("--q-depth", cfg.q_depth, "Positions a predicate may inspect");
  fuzz->add_option("--f-depth", cfg.f_depth, "Queries per challenger call");
  fuzz->add_option("--elem-max", cfg.elem_max, "Largest generated element");
  fuzz->add_option("--scan-cap", cfg.scan_cap, "Truncation search bound");
  fuzz->add_option("--report", report_path, "Write one JSON line per case");
  fuzz->add_option("--jobs", cfg.jobs, "Worker threads (0 = hardware concurrency)");

  auto* demo = app.add_subcommand("demo", "Run a fixed demonstration");
  demo->require_subcommand(1);
  demo->fallthrough();
  auto* subset_phi = demo->add_subcommand("subset-phi", "Simple recursion on subsets of N");
  auto* diverge = demo->add_subcommand("diverge", "Simple recursion at function type");
  Nat bound = 0;
  auto* bounded = demo->add_subcommand("bounded", "The bounded variant of the divergent body");
  bounded->add_option("--n", bound, "Bound N")->required();
  Nat omega_n = 0;
  auto* omega = demo->add_subcommand("omega-n", "Omega^n against controlled recursion");
  omega->add_option("--n", omega_n, "Truncation point n")->required();
  std::string ring_name;
  auto* ideal_cmd = demo->add_subcommand("maximal-ideal", "Goal checker on proper ideals");
  ideal_cmd->add_option("--ring", ring_name, "Ring (z)")->required()->check(CLI::IsMember({"z"}));

  try {
    app.parse(argc, argv);
    if (const char* env = std::getenv("ZL_SEED")) cfg.seed = parse_seed_env(env);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << kSynopsis;
    return 2;
  } catch (const UsageError& e) {
    err << e.what() << '\n' << kSynopsis;
    return 2;
  }

  cfg.fuel = fuel;
  cfg.prefix_len = trace_prefix_len;
  Budget budget(fuel);
  TraceOptions trace;
  trace.prefix_len = trace_prefix_len;

  try {
    if (fuzz->parsed()) return run_fuzz(cfg, report_path, out, err);
    if (subset_phi->parsed()) {
      print_outcome(out, "subset-phi", demo::subset_phi(budget, trace));
    } else if (diverge->parsed()) {
      print_outcome(out, "diverge", demo::divergence(budget, trace));
    } else if (bounded->parsed()) {
      print_outcome(out, "bounded", demo::simple_rec_bounded(bound, budget, trace));
    } else if (omega->parsed()) {
      auto cmp = demo::omega_n_sample(omega_n, budget);
      print_outcome(out, "omega_n", cmp.direct);
      print_outcome(out, "controlled_rec", cmp.via_controlled);
    } else if (ideal_cmd->parsed()) {
      return run_maximal_ideal(budget, trace_prefix_len, out);
    }
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n' << kSynopsis;
    return 2;
  }
  return 0;
}

}  // namespace zorn
