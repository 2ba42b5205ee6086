#pragma once

// Seeded random instances (Q, F, G, x) over the lexicographic instance on
// naturals, and campaigns that run the goal checker over them.
//
// Generated objects are plain data trees evaluated by small interpreters, so
// a case can be regenerated from its sub-seed and inspected.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "zorn/lex.hpp"
#include "zorn/report.hpp"

namespace zorn::harness {

using Sig = lex::Signature<Nat>;
using Carrier = Seq<Nat>;
using Step = lex::Step<Nat>;
using Approx = std::vector<Nat>;
using Rng = std::mt19937_64;

struct GenConfig {
  std::uint64_t seed = 42;
  Nat cases = 100;
  Nat fuel = 1'000'000;
  /// Positions a generated predicate may inspect.
  Nat q_depth = 4;
  /// Queries a generated challenger may make per call.
  Nat f_depth = 2;
  /// Largest element value and largest leaf size index.
  Nat elem_max = 3;
  Nat scan_cap = lex::kDefaultScanCap;
  std::size_t prefix_len = 16;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;
};

/// Throws std::invalid_argument naming the first cap below 1.
void validate(const GenConfig& cfg);

/// Uniform draw from [0, n); n must be positive.
Nat draw(Rng& rng, Nat n);

/// splitmix64 of (seed, case_id)
std::uint64_t derive_sub_seed(std::uint64_t seed, Nat case_id);

// ---------------------------------------------------------------------------
// Predicates

struct PredNode {
  enum class Kind { yes, no, eq_const, less, eq, all, any, negate };
  Kind kind = Kind::yes;
  Nat i = 0;
  Nat j = 0;
  Nat value = 0;
  std::vector<std::shared_ptr<const PredNode>> kids;
};

/// Absent positions (at or past |u|) satisfy atoms vacuously.
bool eval_predicate(const PredNode& node, const Approx& u);
std::string describe(const PredNode& node);

struct GeneratedPredicate {
  std::shared_ptr<const PredNode> tree;
  [[nodiscard]] Predicate<Approx> fn() const;
};

/// A tree of depth <= 3; depth 0 is a constant.
GeneratedPredicate gen_predicate(Rng& rng, const GenConfig& cfg);
GeneratedPredicate gen_predicate(Rng& rng, const GenConfig& cfg, Nat depth);

// ---------------------------------------------------------------------------
// Challengers

/// Steps built relative to the challenger's argument y.
struct StepPattern {
  enum class Kind {
    /// (n, |y|_n @ const fill)
    fill,
    /// (n, z) with z(n) = y(n) - 1 (saturating) and z = fill after n
    decrement,
  };
  Kind kind = Kind::fill;
  Nat n = 0;
  Nat fill = 0;

  [[nodiscard]] Step build(const Carrier& y) const;
};

struct ChallengerNode {
  enum class Kind {
    query,
    /// F leaf returning `value`
    size_leaf,
    /// G leaf returning `pattern` built at the argument
    step_leaf,
    /// F leaf returning min(last query result + value, elem_max)
    result_plus,
  };
  Kind kind = Kind::size_leaf;
  StepPattern pattern;
  Nat value = 0;
  Nat cap = 0;
  std::vector<std::shared_ptr<const ChallengerNode>> kids;
};

std::string describe(const ChallengerNode& node);

struct GeneratedChallengers {
  std::shared_ptr<const ChallengerNode> f_tree;
  std::shared_ptr<const ChallengerNode> g_tree;
  [[nodiscard]] CounterexamplePair<Carrier, Step> pair() const;
};

GeneratedChallengers gen_challengers(Rng& rng, const GenConfig& cfg);
GeneratedChallengers gen_challengers(Rng& rng, const GenConfig& cfg, Nat depth);

Carrier gen_carrier(Rng& rng, const GenConfig& cfg);

// ---------------------------------------------------------------------------
// Cases and campaigns

struct LexCase {
  GeneratedPredicate q;
  GeneratedChallengers challengers;
  Carrier x;
};

/// Regenerates the instance of a case from its sub-seed.
LexCase generate_case(const GenConfig& cfg, std::uint64_t sub_seed);

GoalReport<Approx> run_case(const GenConfig& cfg, const LexCase& c);

struct CaseRecord {
  Nat case_id = 0;
  std::uint64_t sub_seed = 0;
  GoalReport<Approx> report;
  /// Unfoldings spent, same as report.budget_spent.
  Nat wall_steps = 0;
};

/// One JSON object, schema-ordered keys, no trailing newline.
std::string to_jsonl(const CaseRecord& rec);

struct CampaignSummary {
  Nat ok = 0;
  Nat violated = 0;
  Nat exhausted = 0;
  Nat rp_failures = 0;
};

struct Campaign {
  std::vector<CaseRecord> records;  ///< in case_id order
  CampaignSummary summary;
};

Campaign run_campaign(const GenConfig& cfg);

/// Re-derives the verdict from the recorded booleans.
bool record_consistent(const CaseRecord& rec);

}  // namespace zorn::harness
