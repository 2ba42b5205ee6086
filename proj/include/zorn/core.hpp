#pragma once

// Shared vocabulary for every recursor: signatures, fuel accounting, and
// budgeted outcomes.
//
// Evaluation of the recursors is call-by-value over opaque closures. A single
// Meter is threaded (by reference) through every closure a recursor hands to
// user code, so challenger queries pay fuel exactly like direct recursion.
// Running out of fuel unwinds with an Exhaustion exception which the
// budgeted entry points turn into Outcome<V>::Exhausted.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace zorn {

using Nat = std::uint64_t;

/// Remaining permitted recursor unfoldings.
class Budget {
 public:
  constexpr Budget() = default;
  constexpr explicit Budget(Nat remaining) : remaining_(remaining) {}

  [[nodiscard]] constexpr Nat remaining() const { return remaining_; }

  friend constexpr bool operator==(Budget, Budget) = default;

 private:
  Nat remaining_ = 0;
};

/// Decrements by one; std::nullopt signals depletion.
[[nodiscard]] constexpr std::optional<Budget> spend(Budget b) {
  if (b.remaining() == 0) return std::nullopt;
  return Budget(b.remaining() - 1);
}

/// One entry of an exhaustion trace: the recursor that unfolded and a bounded
/// rendering of its carrier argument.
struct Frame {
  std::string recursor;
  std::string prefix;

  friend bool operator==(const Frame&, const Frame&) = default;
};

enum class ExhaustReason { fuel, scan_cap, stack };

const char* to_string(ExhaustReason r);

/// Report attached to a depleted evaluation. `frames` holds the first and last
/// few unfoldings in call order; `elided` counts the ones dropped in between.
struct Exhausted {
  std::vector<Frame> frames;
  Nat unfoldings = 0;
  Nat elided = 0;
  ExhaustReason reason = ExhaustReason::fuel;
};

class Exhaustion : public std::exception {
 public:
  explicit Exhaustion(Exhausted info) : info_(std::move(info)) {}
  const char* what() const noexcept override { return "evaluation budget exhausted"; }
  [[nodiscard]] const Exhausted& info() const { return info_; }
  Exhausted& info() { return info_; }

 private:
  Exhausted info_;
};

template <class V>
class Outcome {
 public:
  Outcome(V v) : state_(std::in_place_index<0>, std::move(v)) {}  // NOLINT
  Outcome(Exhausted e) : state_(std::in_place_index<1>, std::move(e)) {}  // NOLINT

  [[nodiscard]] bool has_value() const { return state_.index() == 0; }
  [[nodiscard]] bool is_exhausted() const { return state_.index() == 1; }
  explicit operator bool() const { return has_value(); }

  const V& value() const& { return std::get<0>(state_); }
  V& value() & { return std::get<0>(state_); }
  V&& value() && { return std::get<0>(std::move(state_)); }
  const V& operator*() const& { return value(); }
  const V* operator->() const { return &value(); }

  [[nodiscard]] const Exhausted& exhausted() const { return std::get<1>(state_); }

 private:
  std::variant<V, Exhausted> state_;
};

struct TraceOptions {
  /// Record every unfolding (head and tail windows). When false only the
  /// frame that hit the limit is rendered.
  bool enabled = true;
  /// Carrier entries shown per frame.
  std::size_t prefix_len = 16;
  std::size_t head = 8;
  std::size_t tail = 8;
};

/// Fuel meter for one evaluation. Not thread-safe; one per evaluation.
class Meter {
 public:
  explicit Meter(Budget budget, TraceOptions trace = {});
  Meter(const Meter&) = delete;
  Meter& operator=(const Meter&) = delete;

  /// Spends one unit for a recursor unfolding. `render(prefix_len)` produces
  /// the frame text; it is only invoked when tracing needs it and must be
  /// copyable (the tail window keeps it until the evaluation ends).
  template <class Render>
  void unfold(const char* recursor, const Render& render) {
    check_stack(recursor, render);
    if (trace_.enabled) record(recursor, std::function<std::string(std::size_t)>(render));
    auto next = spend(budget_);
    if (!next) exhaust(ExhaustReason::fuel, recursor, render(trace_.prefix_len));
    budget_ = *next;
    ++spent_;
  }

  /// Aborts the evaluation with the given reason.
  [[noreturn]] void exhaust(ExhaustReason reason, const char* recursor, std::string prefix);

  [[nodiscard]] Budget remaining() const { return budget_; }
  [[nodiscard]] Nat spent() const { return spent_; }
  [[nodiscard]] const TraceOptions& trace() const { return trace_; }

 private:
  template <class Render>
  void check_stack(const char* recursor, const Render& render) {
    char probe = 0;
    auto here = reinterpret_cast<std::uintptr_t>(&probe);
    auto used = stack_base_ > here ? stack_base_ - here : here - stack_base_;
    if (used > stack_limit_) exhaust(ExhaustReason::stack, recursor, render(trace_.prefix_len));
  }

  void record(const char* recursor, std::function<std::string(std::size_t)> render);

  Budget budget_;
  Nat spent_ = 0;
  Nat attempts_ = 0;
  TraceOptions trace_;
  std::vector<Frame> head_;
  std::deque<std::pair<const char*, std::function<std::string(std::size_t)>>> tail_;
  std::uintptr_t stack_base_ = 0;
  std::size_t stack_limit_ = 0;
};

namespace detail {
/// Runs `fn` on a thread with a large stack unless the caller already is on
/// one. Exceptions propagate to the caller.
void run_on_large_stack(const std::function<void()>& fn);
/// Usable stack depth (bytes) for meters created on the current thread.
std::size_t stack_allowance();
}  // namespace detail

/// Runs `fn(meter)` under a fresh meter and captures exhaustion.
template <class Fn>
auto run_budgeted(Budget budget, Fn&& fn, TraceOptions trace = {})
    -> Outcome<std::invoke_result_t<Fn&, Meter&>> {
  using V = std::invoke_result_t<Fn&, Meter&>;
  std::optional<Outcome<V>> result;
  detail::run_on_large_stack([&] {
    Meter meter(budget, trace);
    try {
      result.emplace(fn(meter));
    } catch (Exhaustion& e) {
      result.emplace(std::move(e.info()));
    }
  });
  return std::move(*result);
}

/// Like run_budgeted, reusing a caller-owned meter (so `spent()` stays
/// observable). Must already be running where deep recursion is safe.
template <class Fn>
auto run_metered(Meter& meter, Fn&& fn) -> Outcome<std::invoke_result_t<Fn&, Meter&>> {
  try {
    return fn(meter);
  } catch (Exhaustion& e) {
    return std::move(e.info());
  }
}

// ---------------------------------------------------------------------------
// Signatures

/// The parameter bundle (|.|, (+), <) of the axiom plus canonical zeros.
/// Size indices are naturals throughout.
template <class Carrier, class Step, class Approx, class Out>
struct Signature {
  using carrier_type = Carrier;
  using step_type = Step;
  using approx_type = Approx;
  using out_type = Out;

  std::function<Approx(const Carrier&, Nat)> approx;
  std::function<Carrier(const Carrier&, const Step&)> extend;
  /// admits(x, a) is the test "a extends x", i.e. a > x.
  std::function<bool(const Carrier&, const Step&)> admits;
  Out zero_out{};
  Carrier zero_carrier{};
};

template <class Carrier, class Step, class Approx, class Out>
Signature<Carrier, Step, Approx, Out> make_signature(
    std::function<Approx(const Carrier&, Nat)> approx,
    std::function<Carrier(const Carrier&, const Step&)> extend,
    std::function<bool(const Carrier&, const Step&)> admits, Out zero_out, Carrier zero_carrier) {
  return {std::move(approx), std::move(extend), std::move(admits), std::move(zero_out),
          std::move(zero_carrier)};
}

template <class Step, class Out>
using Probe = std::function<Out(const Step&)>;

template <class Approx>
using Predicate = std::function<bool(const Approx&)>;

/// The counterexample functionals: F challenges the size, G proposes an
/// extension.
template <class Carrier, class Step>
struct CounterexamplePair {
  std::function<Nat(const Carrier&, const Probe<Step, Nat>&)> F;
  std::function<Step(const Carrier&, const Probe<Step, Nat>&)> G;
};

// ---------------------------------------------------------------------------
// Rendering

template <class T>
void write_elem(std::ostream& os, const T& v) {
  if constexpr (std::is_integral_v<T>)
    os << static_cast<long long>(v);
  else
    os << v;
}

template <class Approx>
std::string format_approx(const Approx& u) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (const auto& v : u) {
    if (!first) os << ',';
    first = false;
    write_elem(os, v);
  }
  os << ']';
  return os.str();
}

/// Human-readable record of the first n approximation entries of x.
template <class Sig>
Frame snapshot(const Sig& sig, const typename Sig::carrier_type& x, Nat n,
               std::string recursor = {}) {
  return Frame{std::move(recursor), format_approx(sig.approx(x, n))};
}

namespace detail {
/// Frame renderer capturing the carrier by value.
template <class Sig>
auto renderer(const Sig& sig, const typename Sig::carrier_type& x) {
  return [sig = &sig, x](std::size_t n) { return format_approx(sig->approx(x, n)); };
}
}  // namespace detail

}  // namespace zorn
