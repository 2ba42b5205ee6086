// Python bindings: demos, campaigns and the lexicographic goal checker with
// Python-supplied Q, F, G.

#include <optional>
#include <string>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zorn/harness.hpp"
#include "zorn/instances.hpp"
#include "zorn/report.hpp"

namespace py = pybind11;
using namespace zorn;

namespace {

using NatSeq = Seq<Nat>;
using LexSig = lex::Signature<Nat>;
using LexStep = lex::Step<Nat>;

/// Thrown across C++ frames when a Python callback raised; the Python error
/// itself waits in the session slot.
struct CallbackFailed {};

/// Per-call state shared by the callback wrappers. Lives on the calling
/// thread and is only touched with the GIL held.
struct Session {
  std::optional<Exhausted> exhausted;
  std::optional<py::error_already_set> error;
};

py::object exhausted_dict(const Exhausted& e) {
  return py::module_::import("json").attr("loads")(exhausted_json(e).dump());
}

template <class V>
py::dict outcome_dict(const Outcome<V>& o) {
  py::dict d;
  if (o.has_value()) {
    d["value"] = o.value();
  } else {
    d["exhausted"] = exhausted_dict(o.exhausted());
  }
  return d;
}

/// Calls a Python callable from a worker thread, parking failures in the
/// session.
template <class R, class... Args>
R call_python(Session& session, const py::function& fn, Args&&... args) {
  py::gil_scoped_acquire gil;
  try {
    return fn(std::forward<Args>(args)...).template cast<R>();
  } catch (py::error_already_set& e) {
    if (session.exhausted) throw Exhaustion(*std::exchange(session.exhausted, std::nullopt));
    session.error.emplace(std::move(e));
    throw CallbackFailed{};
  } catch (py::cast_error& e) {
    PyErr_SetString(PyExc_TypeError, e.what());
    session.error.emplace();
    throw CallbackFailed{};
  }
}

/// Owns a Python object on a thread that mostly runs without the GIL.
class GilHeld {
 public:
  explicit GilHeld(py::object obj) : obj_(std::move(obj)) {}
  GilHeld(const GilHeld&) = delete;
  GilHeld& operator=(const GilHeld&) = delete;
  ~GilHeld() {
    py::gil_scoped_acquire gil;
    obj_ = py::object();
  }
  [[nodiscard]] const py::object& get() const { return obj_; }

 private:
  py::object obj_;
};

/// Exposes a size probe to Python. Exhaustion inside it is parked and a
/// Python exception raised instead; call_python turns it back into
/// Exhaustion once control is in C++ again.
py::cpp_function python_probe(Session& session, const SizeProbe<LexSig>& h) {
  return py::cpp_function([&session, h](Nat n, const NatSeq& y) -> Nat {
    py::gil_scoped_release release;
    try {
      return h(LexStep{n, y});
    } catch (Exhaustion& e) {
      py::gil_scoped_acquire gil;
      session.exhausted = std::move(e.info());
      PyErr_SetString(PyExc_RuntimeError, "evaluation budget exhausted");
      throw py::error_already_set();
    } catch (CallbackFailed&) {
      py::gil_scoped_acquire gil;
      session.error->restore();
      session.error.reset();
      throw py::error_already_set();
    }
  });
}

/// Runs `fn` with the GIL released, then re-raises any parked Python error.
template <class Fn>
auto without_gil(Session& session, Fn&& fn) {
  std::optional<decltype(fn())> out;
  bool failed = false;
  {
    py::gil_scoped_release release;
    try {
      out.emplace(fn());
    } catch (CallbackFailed&) {
      failed = true;
    }
  }
  if (failed) {
    session.error->restore();
    session.error.reset();
    throw py::error_already_set();
  }
  return std::move(*out);
}

py::dict check_goal_py(py::function Q, py::function F, py::function G, const NatSeq& x, Nat fuel,
                       Nat scan_cap, std::size_t prefix_len) {
  Session session;
  auto ops = lex::nat_ops();
  auto sig = lex::signature(ops);
  auto scheme = lex::scheme(ops, scan_cap);
  Predicate<std::vector<Nat>> q = [&](const std::vector<Nat>& u) {
    return call_python<bool>(session, Q, u);
  };
  SizeChallenger<LexSig> f = [&](const NatSeq& y, const SizeProbe<LexSig>& h) {
    GilHeld probe([&] {
      py::gil_scoped_acquire gil;
      return python_probe(session, h);
    }());
    return call_python<Nat>(session, F, y, probe.get());
  };
  ExtensionChallenger<LexSig> g = [&](const NatSeq& y, const SizeProbe<LexSig>& h) {
    GilHeld probe([&] {
      py::gil_scoped_acquire gil;
      return python_probe(session, h);
    }());
    auto [n, z] = call_python<std::pair<Nat, NatSeq>>(session, G, y, probe.get());
    return LexStep{n, z};
  };
  GoalOptions opts;
  opts.prefix_len = prefix_len;
  opts.trace.prefix_len = prefix_len;
  auto rep = without_gil(session, [&] { return check_goal(sig, scheme, q, f, g, x, Budget(fuel), opts); });
  return py::module_::import("json").attr("loads")(goal_report_json(rep).dump());
}

py::dict eta_py(py::function phi, const NatSeq& x, Nat k, Nat fuel) {
  Session session;
  auto ops = lex::nat_ops();
  std::function<Nat(const NatSeq&)> fn = [&](const NatSeq& y) { return call_python<Nat>(session, phi, y); };
  auto out = without_gil(session, [&] { return lex::eta(fn, x, k, ops, Budget(fuel)); });
  return outcome_dict(out);
}

}  // namespace

PYBIND11_MODULE(_zorn, m) {
  m.doc() = "Recursion over chain-bounded partial orders";

  py::class_<NatSeq>(m, "NatSeq")
      .def(py::init([](std::vector<Nat> prefix, Nat fill) { return NatSeq::filled(prefix, fill); }),
           py::arg("prefix"), py::arg("fill") = 0)
      .def("at", &NatSeq::at)
      .def("take", &NatSeq::take)
      .def("__getitem__", &NatSeq::at)
      .def("__repr__", [](const NatSeq& s) {
        std::string fill = "...";
        if (const auto* f = std::get_if<NatSeq::Fill>(&s.tail())) fill = std::to_string(f->value) + "...";
        return "NatSeq(" + format_approx(s.prefix()) + " then " + fill + ")";
      });

  m.def("subset_phi", [](Nat fuel) {
          auto o = [&] { py::gil_scoped_release r; return demo::subset_phi(Budget(fuel)); }();
          return outcome_dict(o);
        }, py::arg("fuel") = 1000);
  m.def("divergence", [](Nat fuel) {
          auto o = [&] { py::gil_scoped_release r; return demo::divergence(Budget(fuel)); }();
          return outcome_dict(o);
        }, py::arg("fuel") = 1000);
  m.def("simple_rec_bounded", [](Nat n, Nat fuel) {
          auto o = [&] { py::gil_scoped_release r; return demo::simple_rec_bounded(n, Budget(fuel)); }();
          return outcome_dict(o);
        }, py::arg("n"), py::arg("fuel") = 1000);
  m.def("omega_n_sample", [](Nat n, Nat fuel) {
          auto cmp = [&] { py::gil_scoped_release r; return demo::omega_n_sample(n, Budget(fuel)); }();
          py::dict d;
          d["direct"] = outcome_dict(cmp.direct);
          d["via_controlled"] = outcome_dict(cmp.via_controlled);
          return d;
        }, py::arg("n"), py::arg("fuel") = 1000);
  m.def("maximal_ideal_demo", [](const std::string& pair, Nat fuel) {
          ideal::Challengers c;
          if (pair == "constant") c = ideal::constant_challengers();
          else if (pair == "depth-1") c = ideal::depth1_challengers();
          else if (pair == "adversarial") c = ideal::adversarial_challengers();
          else throw py::value_error("unknown challenger pair: " + pair);
          auto rep = [&] {
            py::gil_scoped_release r;
            return ideal::maximal_ideal_demo(zigzag_ring_z(), c.F, c.G, Budget(fuel));
          }();
          return py::module_::import("json").attr("loads")(goal_report_json(rep).dump());
        }, py::arg("pair") = "constant", py::arg("fuel") = 100000);

  m.def("run_campaign_jsonl", [](std::uint64_t seed, Nat cases, Nat fuel, Nat q_depth, Nat f_depth,
                                 Nat elem_max, Nat scan_cap, unsigned jobs) {
          harness::GenConfig cfg;
          cfg.seed = seed;
          cfg.cases = cases;
          cfg.fuel = fuel;
          cfg.q_depth = q_depth;
          cfg.f_depth = f_depth;
          cfg.elem_max = elem_max;
          cfg.scan_cap = scan_cap;
          cfg.jobs = jobs;
          harness::validate(cfg);
          std::vector<std::string> lines;
          {
            py::gil_scoped_release r;
            for (const auto& rec : harness::run_campaign(cfg).records) lines.push_back(harness::to_jsonl(rec));
          }
          return lines;
        }, py::arg("seed") = 42, py::arg("cases") = 100, py::arg("fuel") = 1000000,
        py::arg("q_depth") = 4, py::arg("f_depth") = 2, py::arg("elem_max") = 3,
        py::arg("scan_cap") = lex::kDefaultScanCap, py::arg("jobs") = 0);

  m.def("eta", &eta_py, py::arg("phi"), py::arg("x"), py::arg("k"), py::arg("fuel") = 100000);
  m.def("check_goal", &check_goal_py, py::arg("Q"), py::arg("F"), py::arg("G"), py::arg("x"),
        py::arg("fuel") = 100000, py::arg("scan_cap") = lex::kDefaultScanCap, py::arg("prefix_len") = 16);
  m.def("proper_ideal_z", [](const std::vector<subset::Bit>& u) { return proper_ideal_q(zigzag_ring_z(), u); });
}
