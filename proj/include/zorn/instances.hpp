#pragma once

// Concrete signatures and demos: subsets of N under union, the Omega^n
// example of controlled recursion, the divergence of simple recursion at
// function type, countable rings and the maximal-ideal run of the goal
// checker.

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "zorn/lex.hpp"
#include "zorn/recursors.hpp"
#include "zorn/seq.hpp"

namespace zorn {

namespace subset {

using Bit = std::uint8_t;
using Set = Seq<Bit>;
using Step = IndexedStep<Bit>;

template <class Out>
using Signature = zorn::Signature<Set, Step, std::vector<Bit>, Out>;

/// Characteristic function of a finite set.
Set chi(std::initializer_list<Nat> members);
Set chi(const std::vector<Nat>& members);

Set set_union(const Set& x, const Set& y);

/// |x|_d = prefix, x (+) (n, y) = x u y, (n, y) > x iff x(n) = 0 and y(n) = 1.
template <class Out>
Signature<Out> signature(Out zero_out = {}) {
  Signature<Out> sig;
  sig.approx = [](const Set& x, Nat d) { return x.take(d); };
  sig.extend = [](const Set& x, const Step& a) { return set_union(x, a.y); };
  sig.admits = [](const Set& x, const Step& a) { return x.at(a.n) == 0 && a.y.at(a.n) == 1; };
  sig.zero_out = std::move(zero_out);
  sig.zero_carrier = Set::constant(0);
  return sig;
}

/// c n x p = lambda i. x(i) if i < n else 1
Set fill_ones_from(const Set& x, Nat n);

template <class Out>
Controller<Signature<Out>> truncation_controller(Nat n) {
  return [n](const Set& x, const Probe<Step, Out>&) { return fill_ones_from(x, n); };
}

/// Omega n f x = f x~ (lambda a. Omega n f (x~ (+) a) if a > x~ else 0),
/// x~ = c n x. Evaluated from its own defining equation, not through Psi.
template <class Out>
Out omega_n(Meter& meter, const Signature<Out>& sig, Nat n,
            const SimpleBody<Signature<Out>>& f, const Set& x) {
  meter.unfold("Omega_n", detail::renderer(sig, x));
  Set truncated = fill_ones_from(x, n);
  Probe<Step, Out> next = [&meter, &sig, &f, n, truncated](const Step& a) -> Out {
    if (!sig.admits(truncated, a)) return sig.zero_out;
    return omega_n(meter, sig, n, f, sig.extend(truncated, a));
  };
  return f(truncated, next);
}

template <class Out>
Outcome<Out> omega_n(const Signature<Out>& sig, Nat n, const SimpleBody<Signature<Out>>& f,
                     const Set& x, Budget budget, TraceOptions trace = {}) {
  return run_budgeted(
      budget, [&](Meter& m) { return omega_n(m, sig, n, f, x); }, trace);
}

}  // namespace subset

namespace demo {

/// f x p := 0 if x(5) = 1 else 1 + p(5, {5}), evaluated at the empty set.
Outcome<Nat> subset_phi(Budget budget, TraceOptions trace = {});

/// f x p := lambda n. (1 + p(n, {n})(n + 1) if n < N else 0), at the empty
/// set, applied to 0.
Outcome<Nat> simple_rec_bounded(Nat bound, Budget budget, TraceOptions trace = {});

/// The unbounded body f x p := lambda n. 1 + p(n, {n})(n + 1) at the empty
/// set, applied to 0. Diverges: every finite budget ends exhausted.
Outcome<Nat> divergence(Budget budget, TraceOptions trace = {});

struct OmegaNComparison {
  Outcome<Nat> direct;
  Outcome<Nat> via_controlled;
};

/// Omega^n with f x p := x(3) + p(0, {0}) on a fixed sample set, by both
/// routes.
OmegaNComparison omega_n_sample(Nat n, Budget budget);

}  // namespace demo

// ---------------------------------------------------------------------------
// Countable rings coded by naturals.

class DomainOverflow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct RingCode {
  std::function<Nat(Nat, Nat)> add;
  std::function<Nat(Nat, Nat)> mul;
  Nat code0 = 0;
  Nat code1 = 0;
  /// Codes at or past this bound raise DomainOverflow.
  Nat size_hint = 0;
};

/// 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ...
Nat zigzag_encode(std::int64_t v);
std::int64_t zigzag_decode(Nat code);

RingCode zigzag_ring_z(Nat size_hint = Nat{1} << 20);

/// Bounded proper-ideal test on a membership prefix u (1 = member) of length
/// d: 0 in, 1 out, closed under + and under multiplication by any ring
/// element on either side, all restricted to codes below d.
bool proper_ideal_q(const RingCode& ring, std::span<const subset::Bit> u);

namespace ideal {

/// Membership with in <| out and zero = in: zero-extension fills with
/// members.
enum class Membership : std::uint8_t { in = 0, out = 1 };

std::ostream& operator<<(std::ostream& os, Membership m);

lex::ElemOps<Membership> membership_ops();

using Sig = lex::Signature<Membership>;
using Carrier = Seq<Membership>;
using Step = lex::Step<Membership>;
using Approx = std::vector<Membership>;
using Challengers = CounterexamplePair<Carrier, Step>;

std::vector<subset::Bit> to_bits(const Approx& u);

/// {0}: member at code 0 only.
Carrier zero_ideal(const RingCode& ring);

Predicate<Approx> proper_ideal_predicate(RingCode ring);

/// The step (code, y with `code` set to in).
Step propose_member(const Carrier& y, Nat code);

/// F := 6, G proposes the element 2.
Challengers constant_challengers();
/// F y h := 1 + h(propose 2), G picks 2 or -2 by the parity of h(propose 2).
Challengers depth1_challengers();
/// F := 12, G proposes 2 and 3 together but leaves their sum 5 and 2+2 out.
Challengers adversarial_challengers();

GoalReport<Approx> maximal_ideal_demo(const RingCode& ring, const SizeChallenger<Sig>& F,
                                      const ExtensionChallenger<Sig>& G, Budget budget,
                                      const GoalOptions& opts = {});

}  // namespace ideal

}  // namespace zorn
