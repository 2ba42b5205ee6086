#pragma once

// Realizers for the functional interpretation of the axiomatic Zorn's lemma.
//
// For a truncation scheme e and size challenger F:
//
//   Omega_e F x   = F x~ Omega_{e,F,x~}
//   x~            = e F x Omega_{e,F,x}
//   Omega_{e,F,x} = a |-> Omega_e F (x (+) a)  if a > x  else 0
//
//   Gamma_e F G x = y :: ([] if C(G, y, Omega_{e,F,y}) else Gamma_e F G (y (+) G y Omega_{e,F,y}))
//                   with y = x~
//
// and the realizing terms are r = Omega_e F x, s = last(Gamma_e F G x) and
// t = Omega_{e,F,s}. For every x, F, G they are expected to satisfy
//
//   Q(|x|_r) -> Q(|s|_{F s t}) and C(G, s, t)
//
// whenever the relevant-part property |x|_{Omega_e F x} = |x~|_{Omega_e F x}
// holds for e.

#include <optional>
#include <string>
#include <vector>

#include "zorn/core.hpp"

namespace zorn {

template <class Sig>
using SizeProbe = Probe<typename Sig::step_type, Nat>;

template <class Sig>
using SizeChallenger =
    std::function<Nat(const typename Sig::carrier_type&, const SizeProbe<Sig>&)>;

template <class Sig>
using ExtensionChallenger = std::function<typename Sig::step_type(
    const typename Sig::carrier_type&, const SizeProbe<Sig>&)>;

/// e : F -> x -> p -> x~. Receives the meter so searches can pay fuel.
template <class Sig>
using TruncationScheme = std::function<typename Sig::carrier_type(
    const SizeChallenger<Sig>&, const typename Sig::carrier_type&, const SizeProbe<Sig>&, Meter&)>;

/// Called after every completed Omega_e evaluation with (x, x~, value).
template <class Sig>
using OmegaObserver = std::function<void(const typename Sig::carrier_type&,
                                         const typename Sig::carrier_type&, Nat)>;

/// Omega_e F bound to one meter. Copies are cheap and share the meter.
template <class Sig>
class OmegaE {
  static_assert(std::is_same_v<typename Sig::out_type, Nat>, "size indices are naturals");

 public:
  using Carrier = typename Sig::carrier_type;
  using Step = typename Sig::step_type;

  OmegaE(Meter& meter, const Sig& sig, const TruncationScheme<Sig>& scheme,
         const SizeChallenger<Sig>& F, const OmegaObserver<Sig>* observer = nullptr)
      : meter_(&meter), sig_(&sig), scheme_(&scheme), F_(&F), observer_(observer) {}

  /// Omega_e F x
  Nat operator()(const Carrier& x) const {
    meter_->unfold("Omega_e", detail::renderer(*sig_, x));
    Carrier truncated = truncate(x);
    Nat d = (*F_)(truncated, at(truncated));
    if (observer_ && *observer_) (*observer_)(x, truncated, d);
    return d;
  }

  /// x~ = e F x Omega_{e,F,x}
  Carrier truncate(const Carrier& x) const { return (*scheme_)(*F_, x, at(x), *meter_); }

  /// Omega_{e,F,x}
  SizeProbe<Sig> at(Carrier x) const {
    return [self = *this, x = std::move(x)](const Step& a) -> Nat {
      if (!self.sig_->admits(x, a)) return 0;
      return self(self.sig_->extend(x, a));
    };
  }

  [[nodiscard]] Meter& meter() const { return *meter_; }
  [[nodiscard]] const Sig& sig() const { return *sig_; }
  [[nodiscard]] const SizeChallenger<Sig>& F() const { return *F_; }

 private:
  Meter* meter_;
  const Sig* sig_;
  const TruncationScheme<Sig>* scheme_;
  const SizeChallenger<Sig>* F_;
  const OmegaObserver<Sig>* observer_;
};

// ---------------------------------------------------------------------------
// C(G, y, h) :== G y h > y -> not Q(|y (+) G y h|_{h(G y h)})

/// C evaluated for an already chosen a = G y h.
template <class Sig>
bool cond_C_at(const Sig& sig, const Predicate<typename Sig::approx_type>& Q,
               const typename Sig::carrier_type& y, const typename Sig::step_type& a,
               const SizeProbe<Sig>& h) {
  if (!sig.admits(y, a)) return true;
  return !Q(sig.approx(sig.extend(y, a), h(a)));
}

template <class Sig>
bool cond_C(const Sig& sig, const Predicate<typename Sig::approx_type>& Q,
            const ExtensionChallenger<Sig>& G, const typename Sig::carrier_type& y,
            const SizeProbe<Sig>& h) {
  return cond_C_at(sig, Q, y, G(y, h), h);
}

/// Budgeted C. `h` receives the evaluation meter so it may pay fuel.
template <class Sig>
Outcome<bool> cond_C(const Sig& sig, const Predicate<typename Sig::approx_type>& Q,
                     const ExtensionChallenger<Sig>& G, const typename Sig::carrier_type& y,
                     const std::function<Nat(const typename Sig::step_type&, Meter&)>& h,
                     Budget budget) {
  return run_budgeted(budget, [&](Meter& m) {
    SizeProbe<Sig> bound = [&](const typename Sig::step_type& a) { return h(a, m); };
    return cond_C(sig, Q, G, y, bound);
  });
}

// ---------------------------------------------------------------------------
// Omega_e, x~, Gamma_e

template <class Sig>
Nat omega_e(Meter& meter, const Sig& sig, const TruncationScheme<Sig>& scheme,
            const SizeChallenger<Sig>& F, const typename Sig::carrier_type& x) {
  return OmegaE<Sig>(meter, sig, scheme, F)(x);
}

template <class Sig>
Outcome<Nat> omega_e(const Sig& sig, const TruncationScheme<Sig>& scheme,
                     const SizeChallenger<Sig>& F, const typename Sig::carrier_type& x,
                     Budget budget, TraceOptions trace = {}) {
  return run_budgeted(
      budget, [&](Meter& m) { return omega_e(m, sig, scheme, F, x); }, trace);
}

template <class Sig>
typename Sig::carrier_type contd_e(Meter& meter, const Sig& sig,
                                   const TruncationScheme<Sig>& scheme,
                                   const SizeChallenger<Sig>& F,
                                   const typename Sig::carrier_type& x) {
  return OmegaE<Sig>(meter, sig, scheme, F).truncate(x);
}

template <class Sig>
Outcome<typename Sig::carrier_type> contd_e(const Sig& sig, const TruncationScheme<Sig>& scheme,
                                            const SizeChallenger<Sig>& F,
                                            const typename Sig::carrier_type& x, Budget budget,
                                            TraceOptions trace = {}) {
  return run_budgeted(
      budget, [&](Meter& m) { return contd_e(m, sig, scheme, F, x); }, trace);
}

/// Gamma_e F G x, unrolled into a loop; one unfolding per list element.
/// G y Omega_{e,F,y} is evaluated once per element and reused for both the
/// test C and the next extension.
template <class Sig>
std::vector<typename Sig::carrier_type> gamma_e(const OmegaE<Sig>& omega,
                                                const Predicate<typename Sig::approx_type>& Q,
                                                const ExtensionChallenger<Sig>& G,
                                                const typename Sig::carrier_type& x) {
  const Sig& sig = omega.sig();
  std::vector<typename Sig::carrier_type> chain;
  typename Sig::carrier_type current = x;
  for (;;) {
    omega.meter().unfold("Gamma_e", detail::renderer(sig, current));
    auto y = omega.truncate(current);
    auto h = omega.at(y);
    auto a = G(y, h);
    bool done = cond_C_at(sig, Q, y, a, h);
    chain.push_back(y);
    if (done) return chain;
    current = sig.extend(chain.back(), a);
  }
}

template <class Sig>
std::vector<typename Sig::carrier_type> gamma_e(Meter& meter, const Sig& sig,
                                                const TruncationScheme<Sig>& scheme,
                                                const Predicate<typename Sig::approx_type>& Q,
                                                const SizeChallenger<Sig>& F,
                                                const ExtensionChallenger<Sig>& G,
                                                const typename Sig::carrier_type& x) {
  return gamma_e(OmegaE<Sig>(meter, sig, scheme, F), Q, G, x);
}

template <class Sig>
Outcome<std::vector<typename Sig::carrier_type>> gamma_e(
    const Sig& sig, const TruncationScheme<Sig>& scheme,
    const Predicate<typename Sig::approx_type>& Q, const SizeChallenger<Sig>& F,
    const ExtensionChallenger<Sig>& G, const typename Sig::carrier_type& x, Budget budget,
    TraceOptions trace = {}) {
  return run_budgeted(
      budget, [&](Meter& m) { return gamma_e(m, sig, scheme, Q, F, G, x); }, trace);
}

/// tail(l): last element, zero carrier for the empty list.
template <class Sig>
typename Sig::carrier_type last_or_zero(const Sig& sig,
                                        const std::vector<typename Sig::carrier_type>& l) {
  return l.empty() ? sig.zero_carrier : l.back();
}

// ---------------------------------------------------------------------------
// r, s, t

/// t as a standalone procedure: each call runs under its own budget.
template <class Sig>
using BudgetedProbe = std::function<Outcome<Nat>(const typename Sig::step_type&, Budget)>;

template <class Sig>
struct RealizerTriple {
  Nat r = 0;
  typename Sig::carrier_type s;
  BudgetedProbe<Sig> t;
  Nat gamma_len = 0;
};

/// Owns copies of everything t needs, so it outlives the call that made it.
template <class Sig>
BudgetedProbe<Sig> detached_probe(Sig sig, TruncationScheme<Sig> scheme, SizeChallenger<Sig> F,
                                  typename Sig::carrier_type at) {
  return [sig = std::move(sig), scheme = std::move(scheme), F = std::move(F),
          at = std::move(at)](const typename Sig::step_type& a, Budget budget) {
    return run_budgeted(budget,
                        [&](Meter& m) { return OmegaE<Sig>(m, sig, scheme, F).at(at)(a); });
  };
}

template <class Sig>
Outcome<RealizerTriple<Sig>> realizer_rst(const Sig& sig, const TruncationScheme<Sig>& scheme,
                                          const Predicate<typename Sig::approx_type>& Q,
                                          const SizeChallenger<Sig>& F,
                                          const ExtensionChallenger<Sig>& G,
                                          const typename Sig::carrier_type& x, Budget budget) {
  return run_budgeted(budget, [&](Meter& m) {
    OmegaE<Sig> omega(m, sig, scheme, F);
    RealizerTriple<Sig> out;
    out.r = omega(x);
    auto chain = gamma_e(omega, Q, G, x);
    out.gamma_len = chain.size();
    out.s = last_or_zero(sig, chain);
    out.t = detached_probe(sig, scheme, F, out.s);
    return out;
  });
}

// ---------------------------------------------------------------------------
// Relevant part: |x|_{Omega_e F x} = |x~|_{Omega_e F x}

template <class Sig>
bool check_rp(Meter& meter, const Sig& sig, const TruncationScheme<Sig>& scheme,
              const SizeChallenger<Sig>& F, const typename Sig::carrier_type& x) {
  OmegaE<Sig> omega(meter, sig, scheme, F);
  Nat r = omega(x);
  auto truncated = omega.truncate(x);
  return sig.approx(x, r) == sig.approx(truncated, r);
}

template <class Sig>
Outcome<bool> check_rp(const Sig& sig, const TruncationScheme<Sig>& scheme,
                       const SizeChallenger<Sig>& F, const typename Sig::carrier_type& x,
                       Budget budget) {
  return run_budgeted(budget, [&](Meter& m) { return check_rp(m, sig, scheme, F, x); });
}

// ---------------------------------------------------------------------------
// Goal checker

enum class GoalStatus { ok, violated, exhausted };

const char* to_string(GoalStatus s);

/// violated iff the antecedent holds and the consequent fails.
constexpr GoalStatus classify_goal(bool q_x_r, bool q_s, bool c_holds) {
  return (q_x_r && !(q_s && c_holds)) ? GoalStatus::violated : GoalStatus::ok;
}

struct RpCheck {
  std::string snapshot;
  Nat size = 0;
  bool holds = true;
};

template <class Approx>
struct GoalReport {
  Nat r = 0;
  Approx s_prefix{};
  Nat gamma_len = 0;
  bool q_x_r = false;
  bool q_s = false;
  bool c_holds = false;
  /// The first `rp_record_cap` relevant-part checks, in evaluation order.
  std::vector<RpCheck> rp_checks;
  Nat rp_total = 0;
  bool rp_ok = true;
  Nat budget_spent = 0;
  GoalStatus status = GoalStatus::exhausted;
  std::optional<Exhausted> exhaustion;
};

struct GoalOptions {
  std::size_t prefix_len = 16;
  std::size_t rp_record_cap = 64;
  TraceOptions trace{};
};

template <class Sig>
GoalReport<typename Sig::approx_type> check_goal(const Sig& sig,
                                                 const TruncationScheme<Sig>& scheme,
                                                 const Predicate<typename Sig::approx_type>& Q,
                                                 const SizeChallenger<Sig>& F,
                                                 const ExtensionChallenger<Sig>& G,
                                                 const typename Sig::carrier_type& x,
                                                 Budget budget, const GoalOptions& opts = {}) {
  GoalReport<typename Sig::approx_type> report;
  detail::run_on_large_stack([&] {
    Meter meter(budget, opts.trace);
    OmegaObserver<Sig> record_rp = [&](const auto& at, const auto& truncated, Nat d) {
      bool holds = sig.approx(at, d) == sig.approx(truncated, d);
      ++report.rp_total;
      report.rp_ok = report.rp_ok && holds;
      if (report.rp_checks.size() < opts.rp_record_cap)
        report.rp_checks.push_back(RpCheck{format_approx(sig.approx(at, opts.prefix_len)), d, holds});
    };
    OmegaE<Sig> omega(meter, sig, scheme, F, &record_rp);
    try {
      report.r = omega(x);
      auto chain = gamma_e(omega, Q, G, x);
      report.gamma_len = chain.size();
      auto s = last_or_zero(sig, chain);
      report.s_prefix = sig.approx(s, opts.prefix_len);
      auto t = omega.at(s);
      report.q_x_r = Q(sig.approx(x, report.r));
      report.q_s = Q(sig.approx(s, F(s, t)));
      report.c_holds = cond_C(sig, Q, G, s, t);
      report.status = classify_goal(report.q_x_r, report.q_s, report.c_holds);
    } catch (Exhaustion& e) {
      report.status = GoalStatus::exhausted;
      report.exhaustion = std::move(e.info());
    }
    report.budget_spent = meter.spent();
  });
  return report;
}

// ---------------------------------------------------------------------------
// Structural laws of Gamma_e, re-checked by independent evaluation.

struct GammaLaws {
  bool head = false;         ///< l[0] = x~
  bool chaining = false;     ///< every inner link: C false, next = (l[i] (+) G..)~
  bool last_element = false; ///< C true at the last element
  std::optional<bool> base_identity;  ///< singleton chains: r = F(s, t)

  [[nodiscard]] bool all() const {
    return head && chaining && last_element && base_identity.value_or(true);
  }
};

/// Carriers are compared through approximations of length `compare_len`.
template <class Sig>
Outcome<GammaLaws> verify_gamma_laws(const Sig& sig, const TruncationScheme<Sig>& scheme,
                                     const Predicate<typename Sig::approx_type>& Q,
                                     const SizeChallenger<Sig>& F,
                                     const ExtensionChallenger<Sig>& G,
                                     const typename Sig::carrier_type& x,
                                     const std::vector<typename Sig::carrier_type>& chain,
                                     Budget budget, Nat compare_len = 64) {
  return run_budgeted(budget, [&](Meter& m) {
    auto same = [&](const auto& a, const auto& b) {
      return sig.approx(a, compare_len) == sig.approx(b, compare_len);
    };
    GammaLaws laws;
    if (chain.empty()) return laws;
    OmegaE<Sig> omega(m, sig, scheme, F);
    laws.head = same(chain.front(), omega.truncate(x));
    laws.chaining = true;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      auto h = omega.at(chain[i]);
      if (cond_C(sig, Q, G, chain[i], h)) laws.chaining = false;
      auto next = omega.truncate(sig.extend(chain[i], G(chain[i], omega.at(chain[i]))));
      if (!same(next, chain[i + 1])) laws.chaining = false;
    }
    laws.last_element = cond_C(sig, Q, G, chain.back(), omega.at(chain.back()));
    if (chain.size() == 1) {
      const auto& s = chain.front();
      laws.base_identity = omega(x) == F(s, omega.at(s));
    }
    return laws;
  });
}

}  // namespace zorn
