#include "zorn/core.hpp"

#include <pthread.h>

#include <cstring>
#include <stdexcept>

namespace zorn {

namespace {

constexpr std::size_t kLargeStackBytes = std::size_t{1} << 30;
// Headroom kept free below the allowance for user code between unfoldings.
constexpr std::size_t kStackHeadroom = std::size_t{32} << 20;
constexpr std::size_t kDefaultThreadStack = std::size_t{8} << 20;

thread_local bool t_on_large_stack = false;

struct ThreadTask {
  const std::function<void()>* fn;
  std::exception_ptr error;
};

void* thread_entry(void* arg) {
  auto* task = static_cast<ThreadTask*>(arg);
  t_on_large_stack = true;
  try {
    (*task->fn)();
  } catch (...) {
    task->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

const char* to_string(ExhaustReason r) {
  switch (r) {
    case ExhaustReason::fuel: return "fuel";
    case ExhaustReason::scan_cap: return "scan_cap";
    case ExhaustReason::stack: return "stack";
  }
  return "fuel";
}

namespace detail {

std::size_t stack_allowance() {
  return t_on_large_stack ? kLargeStackBytes - kStackHeadroom : kDefaultThreadStack / 2;
}

void run_on_large_stack(const std::function<void()>& fn) {
  if (t_on_large_stack) {
    fn();
    return;
  }
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  if (int rc = pthread_attr_setstacksize(&attr, kLargeStackBytes); rc != 0) {
    pthread_attr_destroy(&attr);
    throw std::runtime_error(std::string("pthread_attr_setstacksize: ") + std::strerror(rc));
  }
  ThreadTask task{&fn, nullptr};
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, &thread_entry, &task);
  pthread_attr_destroy(&attr);
  if (rc != 0) throw std::runtime_error(std::string("pthread_create: ") + std::strerror(rc));
  pthread_join(thread, nullptr);
  if (task.error) std::rethrow_exception(task.error);
}

}  // namespace detail

Meter::Meter(Budget budget, TraceOptions trace)
    : budget_(budget), trace_(trace), stack_limit_(detail::stack_allowance()) {
  char probe = 0;
  stack_base_ = reinterpret_cast<std::uintptr_t>(&probe);
}

void Meter::record(const char* recursor, std::function<std::string(std::size_t)> render) {
  ++attempts_;
  if (head_.size() < trace_.head) {
    head_.push_back(Frame{recursor, render(trace_.prefix_len)});
    return;
  }
  if (trace_.tail == 0) return;
  if (tail_.size() == trace_.tail) tail_.pop_front();
  tail_.emplace_back(recursor, std::move(render));
}

void Meter::exhaust(ExhaustReason reason, const char* recursor, std::string prefix) {
  Exhausted info;
  info.reason = reason;
  info.unfoldings = spent_;
  if (trace_.enabled && attempts_ > 0) {
    info.frames = head_;
    for (const auto& [name, render] : tail_) info.frames.push_back(Frame{name, render(trace_.prefix_len)});
    info.elided = attempts_ - info.frames.size();
    // The limit may be hit before the frame was recorded (stack, scan cap).
    if (reason != ExhaustReason::fuel || info.frames.empty())
      info.frames.push_back(Frame{recursor, std::move(prefix)});
  } else {
    info.frames.push_back(Frame{recursor, std::move(prefix)});
  }
  throw Exhaustion(std::move(info));
}

}  // namespace zorn
