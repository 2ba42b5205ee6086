#include "zorn/instances.hpp"

#include <algorithm>
#include <string>

namespace zorn {

const char* to_string(GoalStatus s) {
  switch (s) {
    case GoalStatus::ok: return "ok";
    case GoalStatus::violated: return "violated";
    case GoalStatus::exhausted: return "exhausted";
  }
  return "exhausted";
}

namespace subset {

Set chi(std::initializer_list<Nat> members) { return chi(std::vector<Nat>(members)); }

Set chi(const std::vector<Nat>& members) {
  std::vector<Nat> sorted(members);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Set::Builder b;
  for (Nat m : sorted) {
    b.push(0, m - b.size());
    b.push(1, 1);
  }
  return std::move(b).finish(Set::Fill{0});
}

namespace {

/// Whether x is constant between consecutive cuts ending at `cut`.
bool constant_on(const Set& x, Nat cut) {
  return cut <= x.prefix_size() || std::holds_alternative<Set::Fill>(x.tail());
}

}  // namespace

Set set_union(const Set& x, const Set& y) {
  Nat len = std::max(x.prefix_size(), y.prefix_size());
  std::vector<Nat> cuts{len};
  for (const auto& r : x.runs()) cuts.push_back(r.end);
  for (const auto& r : y.runs()) cuts.push_back(r.end);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Set::Builder b;
  Nat start = 0;
  for (Nat cut : cuts) {
    if (cut > len) break;
    if (constant_on(x, cut) && constant_on(y, cut)) {
      b.push((x.at(start) | y.at(start)) & 1, cut - start);
    } else {
      for (Nat i = start; i < cut; ++i) b.push((x.at(i) | y.at(i)) & 1, 1);
    }
    start = cut;
  }
  const auto* fx = std::get_if<Set::Fill>(&x.tail());
  const auto* fy = std::get_if<Set::Fill>(&y.tail());
  if (fx && fy) return std::move(b).finish(Set::Fill{static_cast<Bit>((fx->value | fy->value) & 1)});
  return std::move(b).finish(Set::Generator{
      std::make_shared<const std::function<Bit(Nat)>>(
          [x, y, len](Nat j) -> Bit { return (x.at(len + j) | y.at(len + j)) & 1; }),
      len});
}

Set fill_ones_from(const Set& x, Nat n) { return Set::truncate(x, n, 1); }

}  // namespace subset

namespace demo {

namespace {

using subset::Set;
using subset::Step;
using Stream = std::function<Nat(Nat)>;

Outcome<Nat> run_stream_body(Nat bound, bool bounded, Budget budget, TraceOptions trace) {
  auto sig = subset::signature<Stream>([](Nat) -> Nat { return 0; });
  SimpleBody<subset::Signature<Stream>> f = [bound, bounded](const Set&,
                                                             const Probe<Step, Stream>& p) -> Stream {
    return [p, bound, bounded](Nat n) -> Nat {
      if (bounded && n >= bound) return 0;
      return 1 + p(Step{n, subset::chi({n})})(n + 1);
    };
  };
  return run_budgeted(
      budget, [&](Meter& m) { return simple_rec(m, sig, f, subset::chi({}))(0); }, trace);
}

}  // namespace

Outcome<Nat> subset_phi(Budget budget, TraceOptions trace) {
  auto sig = subset::signature<Nat>(0);
  SimpleBody<subset::Signature<Nat>> f = [](const Set& x, const Probe<Step, Nat>& p) -> Nat {
    if (x.at(5) == 1) return 0;
    return 1 + p(Step{5, subset::chi({5})});
  };
  return simple_rec(sig, f, subset::chi({}), budget, trace);
}

Outcome<Nat> simple_rec_bounded(Nat bound, Budget budget, TraceOptions trace) {
  return run_stream_body(bound, true, budget, trace);
}

Outcome<Nat> divergence(Budget budget, TraceOptions trace) {
  return run_stream_body(0, false, budget, trace);
}

OmegaNComparison omega_n_sample(Nat n, Budget budget) {
  auto sig = subset::signature<Nat>(0);
  SimpleBody<subset::Signature<Nat>> f = [](const Set& x, const Probe<Step, Nat>& p) -> Nat {
    return x.at(3) + p(Step{0, subset::chi({0})});
  };
  Set x = subset::chi({1, 3});
  return {subset::omega_n(sig, n, f, x, budget),
          controlled_rec(sig, subset::truncation_controller<Nat>(n), f, x, budget)};
}

}  // namespace demo

// ---------------------------------------------------------------------------

Nat zigzag_encode(std::int64_t v) {
  return v >= 0 ? static_cast<Nat>(v) * 2 : static_cast<Nat>(-(v + 1)) * 2 + 1;
}

std::int64_t zigzag_decode(Nat code) {
  auto half = static_cast<std::int64_t>(code / 2);
  return code % 2 == 0 ? half : -half - 1;
}

RingCode zigzag_ring_z(Nat size_hint) {
  auto checked = [size_hint](std::int64_t v) {
    Nat code = zigzag_encode(v);
    if (code >= size_hint)
      throw DomainOverflow("ring code " + std::to_string(code) + " exceeds size hint " +
                           std::to_string(size_hint));
    return code;
  };
  auto operand = [size_hint](Nat code) {
    if (code >= size_hint)
      throw DomainOverflow("ring operand " + std::to_string(code) + " exceeds size hint");
    return zigzag_decode(code);
  };
  RingCode ring;
  ring.add = [=](Nat a, Nat b) { return checked(operand(a) + operand(b)); };
  ring.mul = [=](Nat a, Nat b) { return checked(operand(a) * operand(b)); };
  ring.code0 = zigzag_encode(0);
  ring.code1 = zigzag_encode(1);
  ring.size_hint = size_hint;
  return ring;
}

bool proper_ideal_q(const RingCode& ring, std::span<const subset::Bit> u) {
  const Nat d = u.size();
  auto member = [&](Nat c) { return u[c] == 1; };
  if (ring.code0 < d && !member(ring.code0)) return false;
  if (ring.code1 < d && member(ring.code1)) return false;
  for (Nat r = 0; r < d; ++r) {
    for (Nat r2 = 0; r2 < d; ++r2) {
      if (member(r) && member(r2)) {
        Nat sum = ring.add(r, r2);
        if (sum < d && !member(sum)) return false;
      }
      if (member(r)) {
        Nat left = ring.mul(r2, r);
        if (left < d && !member(left)) return false;
        Nat right = ring.mul(r, r2);
        if (right < d && !member(right)) return false;
      }
    }
  }
  return true;
}

namespace ideal {

std::ostream& operator<<(std::ostream& os, Membership m) {
  return os << (m == Membership::in ? "in" : "out");
}

lex::ElemOps<Membership> membership_ops() {
  return {[](Membership a, Membership b) { return a == b; },
          [](Membership a, Membership b) { return a == Membership::in && b == Membership::out; },
          Membership::in};
}

std::vector<subset::Bit> to_bits(const Approx& u) {
  std::vector<subset::Bit> bits(u.size());
  std::transform(u.begin(), u.end(), bits.begin(),
                 [](Membership m) -> subset::Bit { return m == Membership::in ? 1 : 0; });
  return bits;
}

Carrier zero_ideal(const RingCode& ring) {
  std::vector<Membership> prefix(ring.code0 + 1, Membership::out);
  prefix[ring.code0] = Membership::in;
  return Carrier::filled(std::move(prefix), Membership::out);
}

Predicate<Approx> proper_ideal_predicate(RingCode ring) {
  return [ring = std::move(ring)](const Approx& u) {
    auto bits = to_bits(u);
    return proper_ideal_q(ring, bits);
  };
}

namespace {

Carrier with_entries(const Carrier& y, std::initializer_list<std::pair<Nat, Membership>> edits) {
  Nat len = 0;
  for (const auto& [pos, _] : edits) len = std::max(len, pos + 1);
  auto prefix = y.take(len);
  for (const auto& [pos, m] : edits) prefix[pos] = m;
  return Carrier::splice(Carrier::filled(std::move(prefix), Membership::out), len, y);
}

}  // namespace

Step propose_member(const Carrier& y, Nat code) {
  std::vector<Membership> prefix = y.take(code + 1);
  prefix[code] = Membership::in;
  return Step{code, Carrier::splice(Carrier::filled(std::move(prefix), Membership::out), code + 1, y)};
}

Challengers constant_challengers() {
  const Nat two = zigzag_encode(2);
  return {[](const Carrier&, const SizeProbe<Sig>&) -> Nat { return 6; },
          [two](const Carrier& y, const SizeProbe<Sig>&) { return propose_member(y, two); }};
}

Challengers depth1_challengers() {
  const Nat two = zigzag_encode(2);
  const Nat minus_two = zigzag_encode(-2);
  return {[two](const Carrier& y, const SizeProbe<Sig>& h) -> Nat {
            return 1 + h(propose_member(y, two));
          },
          [two, minus_two](const Carrier& y, const SizeProbe<Sig>& h) {
            Nat probe = h(propose_member(y, two));
            return propose_member(y, probe % 2 == 0 ? two : minus_two);
          }};
}

Challengers adversarial_challengers() {
  const Nat two = zigzag_encode(2);
  const Nat three = zigzag_encode(3);
  const Nat four = zigzag_encode(4);
  const Nat five = zigzag_encode(5);
  return {[](const Carrier&, const SizeProbe<Sig>&) -> Nat { return 12; },
          [=](const Carrier& y, const SizeProbe<Sig>&) {
            return Step{two, with_entries(y, {{two, Membership::in},
                                              {three, Membership::in},
                                              {four, Membership::out},
                                              {five, Membership::out}})};
          }};
}

GoalReport<Approx> maximal_ideal_demo(const RingCode& ring, const SizeChallenger<Sig>& F,
                                      const ExtensionChallenger<Sig>& G, Budget budget,
                                      const GoalOptions& opts) {
  auto ops = membership_ops();
  auto sig = lex::signature(ops);
  auto e = lex::scheme(ops);
  return check_goal(sig, e, proper_ideal_predicate(ring), F, G, zero_ideal(ring), budget, opts);
}

}  // namespace ideal

}  // namespace zorn
