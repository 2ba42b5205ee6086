#pragma once

// Simple recursion Phi and controlled recursion Psi over (+, <).
//
//   Phi f x   = f x Phi_{f,x}
//   Psi w f x = f x~ Psi_{w,f,x~}     with  x~ = w x Psi_{w,f,x}
//
// where the guarded continuation at x maps a to the recursor at x (+) a when
// a extends x and to the zero output otherwise. Each unfolding spends one
// unit of fuel.

#include <functional>

#include "zorn/core.hpp"

namespace zorn {

template <class Sig>
using SimpleBody = std::function<typename Sig::out_type(
    const typename Sig::carrier_type&,
    const Probe<typename Sig::step_type, typename Sig::out_type>&)>;

template <class Sig>
using Controller = std::function<typename Sig::carrier_type(
    const typename Sig::carrier_type&,
    const Probe<typename Sig::step_type, typename Sig::out_type>&)>;

/// Observer for intermediate truncations: called with (x, x~) after every
/// controller application.
template <class Sig>
using TruncationObserver =
    std::function<void(const typename Sig::carrier_type&, const typename Sig::carrier_type&)>;

template <class Sig>
typename Sig::out_type simple_rec(Meter& meter, const Sig& sig, const SimpleBody<Sig>& f,
                                  const typename Sig::carrier_type& x);

/// Phi_{f,x}
template <class Sig>
Probe<typename Sig::step_type, typename Sig::out_type> simple_continuation(
    Meter& meter, const Sig& sig, const SimpleBody<Sig>& f, typename Sig::carrier_type x) {
  return [&meter, &sig, &f, x = std::move(x)](const typename Sig::step_type& a) {
    if (!sig.admits(x, a)) return sig.zero_out;
    return simple_rec(meter, sig, f, sig.extend(x, a));
  };
}

template <class Sig>
typename Sig::out_type simple_rec(Meter& meter, const Sig& sig, const SimpleBody<Sig>& f,
                                  const typename Sig::carrier_type& x) {
  meter.unfold("Phi", detail::renderer(sig, x));
  return f(x, simple_continuation(meter, sig, f, x));
}

template <class Sig>
Outcome<typename Sig::out_type> simple_rec(const Sig& sig, const SimpleBody<Sig>& f,
                                           const typename Sig::carrier_type& x, Budget budget,
                                           TraceOptions trace = {}) {
  return run_budgeted(
      budget, [&](Meter& m) { return simple_rec(m, sig, f, x); }, trace);
}

template <class Sig>
typename Sig::out_type controlled_rec(Meter& meter, const Sig& sig, const Controller<Sig>& omega,
                                      const SimpleBody<Sig>& f,
                                      const typename Sig::carrier_type& x,
                                      const TruncationObserver<Sig>* observer = nullptr);

/// Psi_{w,f,x}
template <class Sig>
Probe<typename Sig::step_type, typename Sig::out_type> controlled_continuation(
    Meter& meter, const Sig& sig, const Controller<Sig>& omega, const SimpleBody<Sig>& f,
    typename Sig::carrier_type x, const TruncationObserver<Sig>* observer = nullptr) {
  return [&meter, &sig, &omega, &f, observer, x = std::move(x)](const typename Sig::step_type& a) {
    if (!sig.admits(x, a)) return sig.zero_out;
    return controlled_rec(meter, sig, omega, f, sig.extend(x, a), observer);
  };
}

template <class Sig>
typename Sig::out_type controlled_rec(Meter& meter, const Sig& sig, const Controller<Sig>& omega,
                                      const SimpleBody<Sig>& f,
                                      const typename Sig::carrier_type& x,
                                      const TruncationObserver<Sig>* observer) {
  meter.unfold("Psi", detail::renderer(sig, x));
  auto truncated = omega(x, controlled_continuation(meter, sig, omega, f, x, observer));
  if (observer && *observer) (*observer)(x, truncated);
  return f(truncated, controlled_continuation(meter, sig, omega, f, truncated, observer));
}

template <class Sig>
Outcome<typename Sig::out_type> controlled_rec(const Sig& sig, const Controller<Sig>& omega,
                                               const SimpleBody<Sig>& f,
                                               const typename Sig::carrier_type& x, Budget budget,
                                               const TruncationObserver<Sig>& observer = {},
                                               TraceOptions trace = {}) {
  return run_budgeted(
      budget, [&](Meter& m) { return controlled_rec(m, sig, omega, f, x, &observer); }, trace);
}

}  // namespace zorn
