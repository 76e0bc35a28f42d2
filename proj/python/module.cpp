#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dessim/engine.hpp"
#include "dessim/error.hpp"
#include "dessim/io.hpp"
#include "dessim/stats.hpp"
#include "dessim/validation.hpp"
#include "dessim/version.hpp"
#include "dessim/workload.hpp"

namespace py = pybind11;
using namespace dessim;

namespace {

// Times cross the boundary as integer microseconds.
std::vector<std::int64_t> schedule_us(const OpenLoopSchedule& s) {
  std::vector<std::int64_t> out;
  out.reserve(s.times.size());
  for (auto t : s.times) out.push_back(t.us());
  return out;
}

TraceFile make_trace(std::string id, const std::vector<std::pair<std::int64_t, int>>& entries) {
  TraceFile t;
  t.id = std::move(id);
  for (auto [us, code] : entries) t.entries.push_back({Duration(us), code});
  validate_trace(t);
  return t;
}

py::dict record_dict(const ResponseRecord& r) {
  py::dict d;
  d["request_id"] = r.request_id;
  d["arrival_us"] = r.arrival.us();
  d["start_us"] = r.start.us();
  d["duration_us"] = r.duration.count();
  d["status_code"] = r.status_code;
  d["replica_id"] = r.replica_id;
  d["cold_start"] = r.cold_start;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trace-driven FaaS simulator and predictive-validation statistics";
  m.attr("__version__") = std::string(kVersion);

  auto base = py::register_exception<Error>(m, "DessimError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError", base.ptr());

  py::class_<TraceEntry>(m, "TraceEntry")
      .def_property_readonly("duration_us", [](const TraceEntry& e) { return e.duration.count(); })
      .def_readonly("status_code", &TraceEntry::status_code)
      .def("__repr__", [](const TraceEntry& e) {
        return "TraceEntry(duration_us=" + std::to_string(e.duration.count()) +
               ", status_code=" + std::to_string(e.status_code) + ")";
      });

  py::class_<TraceFile>(m, "TraceFile")
      .def(py::init(&make_trace), py::arg("id"), py::arg("entries"),
           "entries: list of (duration_us, status_code); the first is the cold start")
      .def_readonly("id", &TraceFile::id)
      .def_readonly("entries", &TraceFile::entries)
      .def("__len__", [](const TraceFile& t) { return t.entries.size(); });

  py::class_<SimulationResult>(m, "SimulationResult")
      .def_readonly("replicas_created", &SimulationResult::replicas_created)
      .def_readonly("cold_start_count", &SimulationResult::cold_start_count)
      .def_property_readonly("records",
                             [](const SimulationResult& r) {
                               py::list out;
                               for (const auto& rec : r.records) out.append(record_dict(rec));
                               return out;
                             })
      .def_property_readonly("durations_ms",
                             [](const SimulationResult& r) {
                               std::vector<double> out;
                               for (const auto& rec : r.records) out.push_back(to_ms(rec.duration));
                               return out;
                             })
      .def_property_readonly("trace_assignment_log", [](const SimulationResult& r) {
        std::vector<std::pair<ReplicaId, std::string>> out;
        for (const auto& a : r.trace_assignment_log) out.emplace_back(a.replica_id, a.trace_id);
        return out;
      });

  m.def(
      "run_simulation",
      [](const std::vector<TraceFile>& traces, std::size_t n_requests, const std::string& arrival,
         double lambda_ms, std::int64_t idle_timeout_us, std::uint64_t seed,
         std::optional<std::vector<std::int64_t>> arrivals_us) {
        SimulationConfig config;
        config.trace_files = traces;
        config.n_requests = n_requests;
        config.arrival_model = {parse_arrival_kind(arrival), lambda_ms};
        config.idle_timeout = Duration(idle_timeout_us);
        config.seed = seed;
        if (arrivals_us) {
          OpenLoopSchedule s;
          for (auto us : *arrivals_us) s.times.push_back(SimTime::from_us(us));
          return run_simulation(config, s);
        }
        return run_simulation(config);
      },
      py::arg("traces"), py::arg("n_requests"), py::arg("arrival") = "poisson",
      py::arg("lambda_ms") = 0.0, py::arg("idle_timeout_us") = kDefaultIdleTimeout.count(),
      py::arg("seed") = 0, py::arg("arrivals_us") = py::none(),
      "Run one simulation. Pass arrivals_us to replay an explicit open-loop schedule.");

  m.def("poisson_interarrivals",
        [](double lambda_ms, std::size_t n, std::uint64_t seed) {
          return schedule_us(poisson_interarrivals(lambda_ms, n, seed));
        },
        py::arg("lambda_ms"), py::arg("n"), py::arg("seed") = 0);
  m.def("exponential_interarrivals",
        [](double mean_ms, std::size_t n, std::uint64_t seed) {
          return schedule_us(exponential_interarrivals(mean_ms, n, seed));
        },
        py::arg("mean_ms"), py::arg("n"), py::arg("seed") = 0);
  m.def("synth_trace", &synth_trace, py::arg("n_entries"), py::arg("cold_duration_ms"),
        py::arg("warm_mean_ms"), py::arg("warm_dispersion"), py::arg("seed") = 0,
        py::arg("id") = "synthetic");

  m.def("read_trace_csv", &read_trace_csv, py::arg("path"));
  m.def("write_trace_csv",
        [](const TraceFile& t, const std::filesystem::path& p) { write_trace_csv(t, p); },
        py::arg("trace"), py::arg("path"));
  m.def("read_results", &read_results, py::arg("path"));
  m.def("write_results",
        [](const SimulationResult& r, const std::filesystem::path& p) { write_results(r, p); },
        py::arg("result"), py::arg("path"));

  m.def("trim_warmup",
        [](const std::vector<double>& v, double f) { return trim_warmup(v, f); },
        py::arg("values"), py::arg("fraction") = kDefaultWarmupFraction);
  m.def("ecdf",
        [](const std::vector<double>& v) {
          const Ecdf e(v);
          return std::make_pair(e.x(), e.p());
        },
        py::arg("sample"), "Returns (x, F) breakpoints of the empirical CDF.");
  m.def("percentile", [](const std::vector<double>& v, double p) { return percentile(v, p); },
        py::arg("sample"), py::arg("p"));
  m.def(
      "moments",
      [](const std::vector<double>& v) {
        const Moments mo = moments(v);
        py::dict d;
        d["n"] = mo.n;
        d["mean"] = mo.mean;
        d["median"] = mo.median;
        d["variance"] = mo.variance;
        d["skewness"] = mo.skewness;
        d["kurtosis"] = mo.kurtosis;
        return d;
      },
      py::arg("sample"));
  m.def(
      "percentile_ci",
      [](const std::vector<std::vector<double>>& runs, double p, double confidence,
         std::uint64_t seed) {
        const auto ci = percentile_ci(runs, p, confidence, seed);
        py::dict d;
        d["lower"] = ci.interval.lower;
        d["upper"] = ci.interval.upper;
        d["method"] = std::string(to_string(ci.method));
        d["per_run"] = ci.per_run;
        return d;
      },
      py::arg("runs"), py::arg("p"), py::arg("confidence") = 0.95, py::arg("bootstrap_seed") = 0);
  m.def(
      "ks_distance",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return ks_distance(Ecdf(a), Ecdf(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "compare",
      [](const std::vector<std::vector<double>>& measured,
         const std::vector<std::vector<double>>& simulated, double confidence, double skew_tol,
         double kurt_rel_tol, double warmup_fraction) {
        ValidationOptions o;
        o.confidence = confidence;
        o.skew_tol = skew_tol;
        o.kurt_rel_tol = kurt_rel_tol;
        o.warmup_fraction = warmup_fraction;
        return serialize_report(compare(measured, simulated, o));
      },
      py::arg("measured"), py::arg("simulated"), py::arg("confidence") = 0.95,
      py::arg("skew_tol") = kDefaultSkewTolerance,
      py::arg("kurt_rel_tol") = kDefaultKurtosisRelTolerance, py::arg("warmup_fraction") = 0.0,
      "Compare run sets (lists of ms samples); returns the report as a JSON string.");
}
