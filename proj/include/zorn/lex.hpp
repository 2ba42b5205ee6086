#pragma once

// The lexicographic instance over sequences N -> T:
//
//   |x|_n        = <x(0), ..., x(n-1)>
//   x (+) (n, y) = |x|_n @ y
//   (n, y) > x   = y(n) <| x(n)
//
// together with Spector-style truncation: e F x p is x zero-extended at the
// least m for which F answers below m.

#include <functional>
#include <ostream>
#include <vector>

#include "zorn/realizers.hpp"
#include "zorn/seq.hpp"

namespace zorn::lex {

/// Decidable equality, the relation <| and its minimal element.
template <class T>
struct ElemOps {
  std::function<bool(const T&, const T&)> eq;
  std::function<bool(const T&, const T&)> lt;
  T zero{};
};

/// Naturals with < and zero 0.
inline ElemOps<Nat> nat_ops() {
  return {[](Nat a, Nat b) { return a == b; }, [](Nat a, Nat b) { return a < b; }, 0};
}

template <class T>
using Step = IndexedStep<T>;

template <class T>
using Signature = zorn::Signature<Seq<T>, Step<T>, std::vector<T>, Nat>;

template <class T>
Signature<T> signature(const ElemOps<T>& elem) {
  Signature<T> sig;
  sig.approx = [](const Seq<T>& x, Nat n) { return x.take(n); };
  sig.extend = [](const Seq<T>& x, const Step<T>& a) { return Seq<T>::splice(x, a.n, a.y); };
  sig.admits = [lt = elem.lt](const Seq<T>& x, const Step<T>& a) { return lt(a.y.at(a.n), x.at(a.n)); };
  sig.zero_out = 0;
  sig.zero_carrier = Seq<T>::constant(elem.zero);
  return sig;
}

/// x^n = |x|_n @ (lambda i. 0)
template <class T>
Seq<T> ext(const Seq<T>& x, Nat n, const T& zero) {
  return Seq<T>::truncate(x, n, zero);
}

/// eta phi x k: zero if some i <= k has phi(x^i) < i, else x(k). Each probe
/// of phi is one search step and pays one unit of fuel.
template <class T>
T eta(Meter& meter, const std::function<Nat(const Seq<T>&)>& phi, const Seq<T>& x, Nat k,
      const ElemOps<T>& elem) {
  for (Nat i = 0; i <= k; ++i) {
    auto candidate = ext(x, i, elem.zero);
    meter.unfold("eta", [candidate](std::size_t n) { return format_approx(candidate.take(n)); });
    if (phi(candidate) < i) return elem.zero;
  }
  return x.at(k);
}

template <class T>
Outcome<T> eta(const std::function<Nat(const Seq<T>&)>& phi, const Seq<T>& x, Nat k,
               const ElemOps<T>& elem, Budget budget) {
  return run_budgeted(budget, [&](Meter& m) { return eta(m, phi, x, k, elem); });
}

/// p|_y (n, z) = p((n, z)) if z(n) <| y(n) else 0
template <class T>
Probe<Step<T>, Nat> restrict(Probe<Step<T>, Nat> p, Seq<T> y, const ElemOps<T>& elem) {
  return [p = std::move(p), y = std::move(y), lt = elem.lt](const Step<T>& a) -> Nat {
    if (!lt(a.y.at(a.n), y.at(a.n))) return 0;
    return p(a);
  };
}

constexpr Nat kDefaultScanCap = 4096;

/// e F x p = eta (lambda y. F y (p|_y)) x, computed structurally as x^m for
/// the least m with F(x^m, p|_{x^m}) < m. Searching past `scan_cap`
/// candidates exhausts the evaluation.
template <class T>
Seq<T> e_lex(Meter& meter, const SizeChallenger<Signature<T>>& F, const Seq<T>& x,
             const Probe<Step<T>, Nat>& p, const ElemOps<T>& elem, Nat scan_cap = kDefaultScanCap) {
  for (Nat m = 0; m < scan_cap; ++m) {
    auto candidate = ext(x, m, elem.zero);
    meter.unfold("eta", [candidate](std::size_t n) { return format_approx(candidate.take(n)); });
    if (F(candidate, restrict(p, candidate, elem)) < m) return candidate;
  }
  meter.exhaust(ExhaustReason::scan_cap, "eta", format_approx(x.take(meter.trace().prefix_len)));
}

template <class T>
Outcome<Seq<T>> e_lex(const SizeChallenger<Signature<T>>& F, const Seq<T>& x,
                      const Probe<Step<T>, Nat>& p, const ElemOps<T>& elem, Budget budget,
                      Nat scan_cap = kDefaultScanCap) {
  return run_budgeted(budget, [&](Meter& m) { return e_lex(m, F, x, p, elem, scan_cap); });
}

/// e_lex packaged as a truncation scheme.
template <class T>
TruncationScheme<Signature<T>> scheme(ElemOps<T> elem, Nat scan_cap = kDefaultScanCap) {
  return [elem = std::move(elem), scan_cap](const SizeChallenger<Signature<T>>& F, const Seq<T>& x,
                                            const Probe<Step<T>, Nat>& p, Meter& meter) {
    return e_lex(meter, F, x, p, elem, scan_cap);
  };
}

/// Bounded test for "y is lexicographically below x": some n < bound with
/// |y|_n = |x|_n and y(n) <| x(n). False means no witness below the bound.
template <class T>
bool lex_less(const Seq<T>& x, const Seq<T>& y, Nat bound, const ElemOps<T>& elem) {
  for (Nat n = 0; n < bound; ++n) {
    T xn = x.at(n);
    T yn = y.at(n);
    if (elem.lt(yn, xn)) return true;
    if (!elem.eq(xn, yn)) return false;
  }
  return false;
}

/// Least witness position for lex_less, if any below the bound.
template <class T>
std::optional<Nat> lex_witness(const Seq<T>& x, const Seq<T>& y, Nat bound, const ElemOps<T>& elem) {
  for (Nat n = 0; n < bound; ++n) {
    T xn = x.at(n);
    T yn = y.at(n);
    if (elem.lt(yn, xn)) return n;
    if (!elem.eq(xn, yn)) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace zorn::lex
