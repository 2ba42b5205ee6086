#pragma once

// Structural representation of infinite sequences N -> T: a finite prefix
// followed by a tail descriptor. Splicing (x|n @ y) copies the relevant
// prefix of y and adopts its tail, so sequences never nest.
//
// The prefix is run-length encoded. Deep recursions keep every intermediate
// carrier alive, and the carriers they build (initial segments, singletons)
// are a handful of runs each.

#include <algorithm>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "zorn/core.hpp"

namespace zorn {

template <class T>
class Seq {
 public:
  /// Every position past the prefix holds `value`.
  struct Fill {
    T value;
  };
  /// Position i past the prefix holds gen(i - origin).
  struct Generator {
    std::shared_ptr<const std::function<T(Nat)>> gen;
    Nat origin = 0;
  };
  using Tail = std::variant<Fill, Generator>;

  /// A maximal block of equal entries ending (exclusively) at `end`.
  struct Run {
    T value;
    Nat end;
  };

  /// Appends runs, merging equal neighbours.
  class Builder {
   public:
    void push(const T& value, Nat count) {
      if (count == 0) return;
      if (!runs_.empty() && runs_.back().value == value) {
        runs_.back().end += count;
      } else {
        runs_.push_back(Run{value, size() + count});
      }
    }
    [[nodiscard]] Nat size() const { return runs_.empty() ? 0 : runs_.back().end; }
    Seq finish(Tail tail) && { return Seq(std::move(runs_), std::move(tail)); }

   private:
    std::vector<Run> runs_;
  };

  Seq() : tail_(Fill{T{}}) {}
  Seq(const std::vector<T>& prefix, Tail tail) : tail_(std::move(tail)) {
    Builder b;
    for (const auto& v : prefix) b.push(v, 1);
    runs_ = std::move(b).finish(Fill{T{}}).runs_;
  }

  static Seq constant(T v) { return Seq(std::vector<Run>{}, Fill{std::move(v)}); }
  static Seq filled(const std::vector<T>& prefix, T fill) { return Seq(prefix, Fill{std::move(fill)}); }
  static Seq generated(const std::vector<T>& prefix, std::function<T(Nat)> gen) {
    Nat origin = prefix.size();
    return Seq(prefix, Generator{std::make_shared<const std::function<T(Nat)>>(std::move(gen)), origin});
  }

  [[nodiscard]] T at(Nat i) const {
    if (i < prefix_size()) {
      auto it = std::upper_bound(runs_.begin(), runs_.end(), i,
                                 [](Nat k, const Run& r) { return k < r.end; });
      return it->value;
    }
    if (const auto* f = std::get_if<Fill>(&tail_)) return f->value;
    const auto& g = std::get<Generator>(tail_);
    return (*g.gen)(i - g.origin);
  }
  T operator()(Nat i) const { return at(i); }

  /// [x(0), ..., x(n-1)]
  [[nodiscard]] std::vector<T> take(Nat n) const {
    std::vector<T> out;
    out.reserve(n);
    Nat start = 0;
    for (const auto& r : runs_) {
      if (start >= n) break;
      out.insert(out.end(), std::min(r.end, n) - start, r.value);
      start = r.end;
    }
    for (Nat i = out.size(); i < n; ++i) out.push_back(at(i));
    return out;
  }

  /// (x|n @ y): x on [0, n), y from n on (absolute positions).
  [[nodiscard]] static Seq splice(const Seq& x, Nat n, const Seq& y) {
    Builder b;
    x.copy_range(b, 0, n);
    y.copy_range(b, n, y.prefix_size());
    return std::move(b).finish(y.tail_);
  }

  /// (x|n @ const v)
  [[nodiscard]] static Seq truncate(const Seq& x, Nat n, T fill) {
    Builder b;
    x.copy_range(b, 0, n);
    return std::move(b).finish(Fill{std::move(fill)});
  }

  /// Appends x(lo), ..., x(hi-1) to `b`, run by run where possible.
  void copy_range(Builder& b, Nat lo, Nat hi) const {
    Nat start = 0;
    for (const auto& r : runs_) {
      if (start >= hi) break;
      Nat from = std::max(start, lo);
      Nat to = std::min(r.end, hi);
      if (from < to) b.push(r.value, to - from);
      start = r.end;
    }
    if (const auto* f = std::get_if<Fill>(&tail_)) {
      Nat from = std::max(prefix_size(), lo);
      if (from < hi) b.push(f->value, hi - from);
      return;
    }
    for (Nat i = std::max(prefix_size(), lo); i < hi; ++i) b.push(at(i), 1);
  }

  [[nodiscard]] Nat prefix_size() const { return runs_.empty() ? 0 : runs_.back().end; }
  [[nodiscard]] std::vector<T> prefix() const { return take(prefix_size()); }
  [[nodiscard]] const std::vector<Run>& runs() const { return runs_; }
  [[nodiscard]] const Tail& tail() const { return tail_; }

 private:
  Seq(std::vector<Run> runs, Tail tail) : runs_(std::move(runs)), tail_(std::move(tail)) {}

  std::vector<Run> runs_;
  Tail tail_;
};

/// A step (n, y): a position and a replacement sequence.
template <class T>
struct IndexedStep {
  Nat n = 0;
  Seq<T> y;
};

}  // namespace zorn
