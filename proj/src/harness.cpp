#include "zorn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace zorn {

Json exhausted_json(const Exhausted& e) {
  Json frames = Json::array();
  for (const auto& f : e.frames) frames.push_back(Json{{"recursor", f.recursor}, {"prefix", f.prefix}});
  return Json{{"reason", to_string(e.reason)},
              {"unfoldings", e.unfoldings},
              {"elided", e.elided},
              {"frames", std::move(frames)}};
}

}  // namespace zorn

namespace zorn::harness {

void validate(const GenConfig& cfg) {
  auto require = [](Nat v, const char* name) {
    if (v < 1) throw std::invalid_argument(std::string(name) + " must be at least 1");
  };
  require(cfg.q_depth, "q_depth");
  require(cfg.f_depth, "f_depth");
  require(cfg.elem_max, "elem_max");
  require(cfg.scan_cap, "scan_cap");
  require(cfg.prefix_len, "prefix_len");
}

Nat draw(Rng& rng, Nat n) { return rng() % n; }

std::uint64_t derive_sub_seed(std::uint64_t seed, Nat case_id) {
  std::uint64_t z = seed + (case_id + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------

bool eval_predicate(const PredNode& node, const Approx& u) {
  using K = PredNode::Kind;
  auto present = [&](Nat i) { return i < u.size(); };
  switch (node.kind) {
    case K::yes: return true;
    case K::no: return false;
    case K::eq_const: return !present(node.i) || u[node.i] == node.value;
    case K::less: return !present(node.i) || !present(node.j) || u[node.i] < u[node.j];
    case K::eq: return !present(node.i) || !present(node.j) || u[node.i] == u[node.j];
    case K::all:
      return std::all_of(node.kids.begin(), node.kids.end(),
                         [&](const auto& k) { return eval_predicate(*k, u); });
    case K::any:
      return std::any_of(node.kids.begin(), node.kids.end(),
                         [&](const auto& k) { return eval_predicate(*k, u); });
    case K::negate: return !eval_predicate(*node.kids.front(), u);
  }
  return false;
}

std::string describe(const PredNode& node) {
  using K = PredNode::Kind;
  std::ostringstream os;
  switch (node.kind) {
    case K::yes: return "true";
    case K::no: return "false";
    case K::eq_const: os << "u[" << node.i << "]=" << node.value; break;
    case K::less: os << "u[" << node.i << "]<u[" << node.j << "]"; break;
    case K::eq: os << "u[" << node.i << "]=u[" << node.j << "]"; break;
    case K::all:
    case K::any:
      os << '(' << (node.kind == K::all ? "and" : "or");
      for (const auto& k : node.kids) os << ' ' << describe(*k);
      os << ')';
      break;
    case K::negate: os << "(not " << describe(*node.kids.front()) << ')'; break;
  }
  return os.str();
}

Predicate<Approx> GeneratedPredicate::fn() const {
  return [tree = tree](const Approx& u) { return eval_predicate(*tree, u); };
}

namespace {

std::shared_ptr<const PredNode> gen_pred_node(Rng& rng, const GenConfig& cfg, Nat depth) {
  using K = PredNode::Kind;
  auto node = std::make_shared<PredNode>();
  Nat choice = depth <= 1 ? 3 : draw(rng, 4);
  switch (choice) {
    case 0:
    case 1:
      node->kind = choice == 0 ? K::all : K::any;
      node->kids.push_back(gen_pred_node(rng, cfg, depth - 1));
      node->kids.push_back(gen_pred_node(rng, cfg, depth - 1));
      break;
    case 2:
      node->kind = K::negate;
      node->kids.push_back(gen_pred_node(rng, cfg, depth - 1));
      break;
    default: {
      Nat atom = draw(rng, 3);
      node->kind = atom == 0 ? K::eq_const : atom == 1 ? K::less : K::eq;
      node->i = draw(rng, cfg.q_depth);
      node->j = draw(rng, cfg.q_depth);
      node->value = draw(rng, cfg.elem_max + 1);
      break;
    }
  }
  return node;
}

}  // namespace

GeneratedPredicate gen_predicate(Rng& rng, const GenConfig& cfg) {
  return gen_predicate(rng, cfg, draw(rng, 4));
}

GeneratedPredicate gen_predicate(Rng& rng, const GenConfig& cfg, Nat depth) {
  if (depth == 0) {
    auto node = std::make_shared<PredNode>();
    node->kind = draw(rng, 2) == 0 ? PredNode::Kind::yes : PredNode::Kind::no;
    return {std::move(node)};
  }
  return {gen_pred_node(rng, cfg, depth)};
}

// ---------------------------------------------------------------------------

Step StepPattern::build(const Carrier& y) const {
  if (kind == Kind::fill) return Step{n, Carrier::filled(y.take(n), fill)};
  auto prefix = y.take(n + 1);
  if (prefix[n] > 0) --prefix[n];
  return Step{n, Carrier::filled(std::move(prefix), fill)};
}

std::string describe(const ChallengerNode& node) {
  std::ostringstream os;
  auto pattern = [&](const StepPattern& p) {
    os << (p.kind == StepPattern::Kind::fill ? "fill(" : "dec(") << p.n << ',' << p.fill << ')';
  };
  switch (node.kind) {
    case ChallengerNode::Kind::size_leaf: os << node.value; break;
    case ChallengerNode::Kind::step_leaf: pattern(node.pattern); break;
    case ChallengerNode::Kind::result_plus: os << "h+" << node.value; break;
    case ChallengerNode::Kind::query:
      os << "(h ";
      pattern(node.pattern);
      for (const auto& k : node.kids) os << ' ' << describe(*k);
      os << ')';
      break;
  }
  return os.str();
}

namespace {

StepPattern gen_pattern(Rng& rng, const GenConfig& cfg) {
  StepPattern p;
  p.kind = draw(rng, 2) == 0 ? StepPattern::Kind::fill : StepPattern::Kind::decrement;
  p.n = draw(rng, cfg.elem_max + 1);
  p.fill = draw(rng, cfg.elem_max + 1);
  return p;
}

std::shared_ptr<const ChallengerNode> gen_challenger_node(Rng& rng, const GenConfig& cfg, Nat level,
                                                          Nat depth, bool size_leaves) {
  auto node = std::make_shared<ChallengerNode>();
  if (level < depth && draw(rng, 10) < 6) {
    node->kind = ChallengerNode::Kind::query;
    node->pattern = gen_pattern(rng, cfg);
    Nat branches = 2 + draw(rng, 2);
    for (Nat b = 0; b < branches; ++b)
      node->kids.push_back(gen_challenger_node(rng, cfg, level + 1, depth, size_leaves));
    return node;
  }
  if (!size_leaves) {
    node->kind = ChallengerNode::Kind::step_leaf;
    node->pattern = gen_pattern(rng, cfg);
  } else if (level > 0 && draw(rng, 10) < 3) {
    node->kind = ChallengerNode::Kind::result_plus;
    node->value = draw(rng, 2);
    node->cap = cfg.elem_max;
  } else {
    node->kind = ChallengerNode::Kind::size_leaf;
    node->value = draw(rng, cfg.elem_max + 1);
  }
  return node;
}

/// Walks the tree from the root; returns the leaf and the last query result.
std::pair<const ChallengerNode*, Nat> walk(const ChallengerNode& root, const Carrier& y,
                                           const SizeProbe<Sig>& h) {
  const ChallengerNode* node = &root;
  Nat last = 0;
  while (node->kind == ChallengerNode::Kind::query) {
    last = h(node->pattern.build(y));
    node = node->kids[last % node->kids.size()].get();
  }
  return {node, last};
}

}  // namespace

CounterexamplePair<Carrier, Step> GeneratedChallengers::pair() const {
  CounterexamplePair<Carrier, Step> out;
  out.F = [tree = f_tree](const Carrier& y, const SizeProbe<Sig>& h) -> Nat {
    auto [leaf, last] = walk(*tree, y, h);
    if (leaf->kind == ChallengerNode::Kind::result_plus) return std::min(last + leaf->value, leaf->cap);
    return leaf->value;
  };
  out.G = [tree = g_tree](const Carrier& y, const SizeProbe<Sig>& h) -> Step {
    return walk(*tree, y, h).first->pattern.build(y);
  };
  return out;
}

GeneratedChallengers gen_challengers(Rng& rng, const GenConfig& cfg) {
  return gen_challengers(rng, cfg, cfg.f_depth);
}

GeneratedChallengers gen_challengers(Rng& rng, const GenConfig& cfg, Nat depth) {
  GeneratedChallengers out;
  out.f_tree = gen_challenger_node(rng, cfg, 0, depth, true);
  out.g_tree = gen_challenger_node(rng, cfg, 0, depth, false);
  return out;
}

Carrier gen_carrier(Rng& rng, const GenConfig& cfg) {
  std::vector<Nat> prefix(draw(rng, cfg.q_depth + 1));
  for (auto& v : prefix) v = draw(rng, cfg.elem_max + 1);
  return Carrier::filled(std::move(prefix), draw(rng, cfg.elem_max + 1));
}

// ---------------------------------------------------------------------------

LexCase generate_case(const GenConfig& cfg, std::uint64_t sub_seed) {
  Rng rng(sub_seed);
  LexCase c;
  c.q = gen_predicate(rng, cfg);
  c.challengers = gen_challengers(rng, cfg);
  c.x = gen_carrier(rng, cfg);
  return c;
}

GoalReport<Approx> run_case(const GenConfig& cfg, const LexCase& c) {
  auto ops = lex::nat_ops();
  auto sig = lex::signature(ops);
  auto scheme = lex::scheme(ops, cfg.scan_cap);
  auto pair = c.challengers.pair();
  GoalOptions opts;
  opts.prefix_len = cfg.prefix_len;
  opts.trace.enabled = false;
  opts.trace.prefix_len = cfg.prefix_len;
  return check_goal(sig, scheme, c.q.fn(), pair.F, pair.G, c.x, Budget(cfg.fuel), opts);
}

std::string to_jsonl(const CaseRecord& rec) {
  const auto& rep = rec.report;
  Json j;
  j["case_id"] = rec.case_id;
  j["sub_seed"] = rec.sub_seed;
  j["status"] = to_string(rep.status);
  j["r"] = rep.r;
  j["s_prefix"] = approx_json(rep.s_prefix);
  j["gamma_len"] = rep.gamma_len;
  j["q_x_r"] = rep.q_x_r;
  j["q_s"] = rep.q_s;
  j["c_holds"] = rep.c_holds;
  j["rp_ok"] = rep.rp_ok;
  j["budget_spent"] = rep.budget_spent;
  return j.dump();
}

Campaign run_campaign(const GenConfig& cfg) {
  validate(cfg);
  Campaign out;
  out.records.resize(cfg.cases);
  unsigned jobs = cfg.jobs != 0 ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<Nat>(jobs, std::max<Nat>(cfg.cases, 1)));
  std::atomic<Nat> next{0};
  auto worker = [&] {
    detail::run_on_large_stack([&] {
      for (Nat id = next++; id < cfg.cases; id = next++) {
        CaseRecord& rec = out.records[id];
        rec.case_id = id;
        rec.sub_seed = derive_sub_seed(cfg.seed, id);
        rec.report = run_case(cfg, generate_case(cfg, rec.sub_seed));
        rec.wall_steps = rec.report.budget_spent;
      }
    });
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& rec : out.records) {
    switch (rec.report.status) {
      case GoalStatus::ok: ++out.summary.ok; break;
      case GoalStatus::violated: ++out.summary.violated; break;
      case GoalStatus::exhausted: ++out.summary.exhausted; break;
    }
    if (!rec.report.rp_ok) ++out.summary.rp_failures;
  }
  return out;
}

bool record_consistent(const CaseRecord& rec) {
  const auto& r = rec.report;
  if (r.status == GoalStatus::exhausted) return true;
  return r.status == classify_goal(r.q_x_r, r.q_s, r.c_holds);
}

}  // namespace zorn::harness
