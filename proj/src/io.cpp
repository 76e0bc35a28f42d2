#include "dessim/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "dessim/error.hpp"

namespace dessim {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

namespace {

// Data lines of a CSV document: leading '#' lines skipped, CR stripped, one
// optional trailing newline tolerated. line_no is 1-based in the file.
struct Line {
  std::size_t line_no;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0, line_no = 0;
  bool in_preamble = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;
    if (in_preamble && !line.empty() && line.front() == '#') continue;
    in_preamble = false;
    lines.push_back({line_no, line});
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

[[noreturn]] void format_error(std::string_view where, std::size_t line_no, const std::string& msg) {
  throw FormatError(std::string(where) + ":" + std::to_string(line_no) + ": " + msg);
}

std::int64_t parse_int(std::string_view s, std::string_view where, std::size_t line_no) {
  std::int64_t v = 0;
  if (s.empty() || s.front() == '+') format_error(where, line_no, "bad integer '" + std::string(s) + "'");
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    format_error(where, line_no, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

void append_provenance(std::string& out, const Provenance& provenance) {
  for (const auto& [key, value] : provenance) {
    out += "# ";
    out += key;
    out += ": ";
    for (char c : value) out += (c == '\n' || c == '\r') ? ' ' : c;
    out += '\n';
  }
}

constexpr std::string_view kTraceHeader = "duration_ms,status_code";

}  // namespace

Duration parse_decimal_ms(std::string_view text) {
  const std::string msg = "bad decimal milliseconds '" + std::string(text) + "'";
  const std::size_t dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (whole.empty() || !all_digits(whole) || whole.size() > 12) throw FormatError(msg);
  if (dot != std::string_view::npos && (frac.empty() || frac.size() > 3 || !all_digits(frac))) {
    throw FormatError(msg);
  }
  std::int64_t us = 0;
  for (char c : whole) us = us * 10 + (c - '0');
  us *= 1000;
  std::int64_t scale = 100;
  for (char c : frac) {
    us += (c - '0') * scale;
    scale /= 10;
  }
  return Duration(us);
}

std::string format_decimal_ms(Duration d) {
  const std::int64_t us = d.count();
  if (us < 0) throw ParameterError("negative duration");
  std::string frac = std::to_string(us % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(us / 1000) + "." + frac;
}

TraceFile parse_trace_csv(std::string_view text, std::string id) {
  const auto lines = split_lines(text);
  const std::string& where = id;
  if (lines.empty() || lines.front().text != kTraceHeader) {
    format_error(where, lines.empty() ? 1 : lines.front().line_no,
                 "missing header '" + std::string(kTraceHeader) + "'");
  }
  TraceFile trace;
  trace.id = std::move(id);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto fields = split_fields(line.text);
    if (fields.size() != 2) format_error(trace.id, line.line_no, "expected 2 fields");
    TraceEntry entry;
    try {
      entry.duration = parse_decimal_ms(fields[0]);
    } catch (const FormatError& e) {
      format_error(trace.id, line.line_no, e.what());
    }
    const std::int64_t code = parse_int(fields[1], trace.id, line.line_no);
    if (entry.duration <= Duration::zero()) format_error(trace.id, line.line_no, "duration must be positive");
    if (code < 100 || code > 599) format_error(trace.id, line.line_no, "status code out of range");
    entry.status_code = static_cast<int>(code);
    trace.entries.push_back(entry);
  }
  if (trace.entries.size() < 2) {
    throw FormatError(trace.id + ": trace needs at least 2 entries, has " +
                      std::to_string(trace.entries.size()));
  }
  return trace;
}

TraceFile read_trace_csv(const fs::path& path) {
  return parse_trace_csv(read_text_file(path), path.filename().string());
}

std::string serialize_trace_csv(const TraceFile& trace, const Provenance& provenance) {
  validate_trace(trace);
  std::string out;
  out.reserve(trace.entries.size() * 14 + 64);
  append_provenance(out, provenance);
  out += kTraceHeader;
  out += '\n';
  for (const auto& e : trace.entries) {
    out += format_decimal_ms(e.duration);
    out += ',';
    out += std::to_string(e.status_code);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const TraceFile& trace, const fs::path& path, const Provenance& provenance) {
  write_text_file(path, serialize_trace_csv(trace, provenance));
}

std::vector<TraceFile> read_trace_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("traces directory '" + dir.string() + "' not found");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  if (paths.empty()) throw InputError("no .csv trace files in '" + dir.string() + "'");
  std::vector<TraceFile> traces;
  traces.reserve(paths.size());
  for (const auto& p : paths) traces.push_back(read_trace_csv(p));
  return traces;
}

std::string serialize_results_csv(const SimulationResult& result, const Provenance& provenance) {
  if (result.records.empty()) throw InputError("refusing to write a results file with no records");
  std::string out;
  out.reserve(result.records.size() * 48 + 128);
  append_provenance(out, provenance);
  out += kResultsHeader;
  out += '\n';
  for (const auto& r : result.records) {
    out += std::to_string(r.request_id);
    out += ',';
    out += std::to_string(r.arrival.us());
    out += ',';
    out += std::to_string(r.start.us());
    out += ',';
    out += std::to_string(r.duration.count());
    out += ',';
    out += std::to_string(r.status_code);
    out += ',';
    out += std::to_string(r.replica_id);
    out += r.cold_start ? ",1\n" : ",0\n";
  }
  return out;
}

SimulationResult parse_results_csv(std::string_view text) {
  constexpr std::string_view where = "results";
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front().text != kResultsHeader) {
    format_error(where, lines.empty() ? 1 : lines.front().line_no, "missing results header");
  }
  SimulationResult result;
  std::set<ReplicaId> replicas;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto f = split_fields(line.text);
    if (f.size() != 7) format_error(where, line.line_no, "expected 7 fields");
    ResponseRecord r;
    r.request_id = parse_int(f[0], where, line.line_no);
    r.arrival = SimTime::from_us(parse_int(f[1], where, line.line_no));
    r.start = SimTime::from_us(parse_int(f[2], where, line.line_no));
    r.duration = Duration(parse_int(f[3], where, line.line_no));
    r.status_code = static_cast<int>(parse_int(f[4], where, line.line_no));
    r.replica_id = parse_int(f[5], where, line.line_no);
    if (f[6] == "1") {
      r.cold_start = true;
    } else if (f[6] != "0") {
      format_error(where, line.line_no, "cold_start must be 0 or 1");
    }
    if (r.arrival.us() < 0) format_error(where, line.line_no, "negative arrival");
    if (!result.records.empty() && r.arrival < result.records.back().arrival) {
      format_error(where, line.line_no, "arrival_us not non-decreasing");
    }
    if (r.start < r.arrival) format_error(where, line.line_no, "start before arrival");
    if (r.duration <= Duration::zero()) format_error(where, line.line_no, "duration must be positive");
    replicas.insert(r.replica_id);
    if (r.cold_start) ++result.cold_start_count;
    result.records.push_back(r);
  }
  if (result.records.empty()) throw FormatError("results file has no records");
  result.replicas_created = replicas.size();
  return result;
}

void write_results(const SimulationResult& result, const fs::path& path, const Provenance& provenance) {
  write_text_file(path, serialize_results_csv(result, provenance));
}

SimulationResult read_results(const fs::path& path) {
  try {
    return parse_results_csv(read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<double> read_response_times_ms(const fs::path& path) {
  const std::string text = read_text_file(path);
  const auto lines = split_lines(text);
  if (!lines.empty() && lines.front().text == kTraceHeader) {
    const auto trace = parse_trace_csv(text, path.filename().string());
    std::vector<double> out;
    out.reserve(trace.entries.size());
    for (const auto& e : trace.entries) out.push_back(to_ms(e.duration));
    return out;
  }
  if (!lines.empty() && lines.front().text == kResultsHeader) {
    const auto result = read_results(path);
    std::vector<double> out;
    out.reserve(result.records.size());
    for (const auto& r : result.records) out.push_back(to_ms(r.duration));
    return out;
  }
  throw FormatError(path.string() + ": neither a trace nor a results CSV");
}

// ---- report JSON ----

namespace {

ordered_json interval_json(const PercentileInterval& pi) {
  ordered_json j;
  j["lower_ms"] = pi.interval.lower;
  j["upper_ms"] = pi.interval.upper;
  j["confidence"] = pi.interval.confidence;
  j["method"] = std::string(to_string(pi.method));
  j["per_run_ms"] = pi.per_run;
  j["pooled_ms"] = pi.pooled;
  return j;
}

PercentileInterval interval_from(const json& j, double p) {
  PercentileInterval pi;
  pi.p = p;
  pi.interval.lower = j.at("lower_ms").get<double>();
  pi.interval.upper = j.at("upper_ms").get<double>();
  pi.interval.confidence = j.at("confidence").get<double>();
  pi.method = parse_ci_method(j.at("method").get<std::string>());
  pi.per_run = j.at("per_run_ms").get<std::vector<double>>();
  pi.pooled = j.at("pooled_ms").get<double>();
  return pi;
}

ordered_json source_json(const SourceSummary& s, const std::vector<std::string>& inputs) {
  ordered_json j;
  j["runs"] = s.runs;
  j["run_sizes"] = s.run_sizes;
  j["inputs"] = inputs;
  ordered_json m;
  m["n"] = s.moments.n;
  m["mean_ms"] = s.moments.mean;
  m["median_ms"] = s.moments.median;
  m["variance_ms2"] = s.moments.variance;
  m["skewness"] = s.moments.skewness;
  m["kurtosis"] = s.moments.kurtosis;
  j["moments"] = m;
  j["cullen_frey"] = {{"skewness_squared", s.moments.cullen_frey_x()},
                      {"kurtosis", s.moments.cullen_frey_y()}};
  j["ecdf"] = {{"n", s.ecdf.sample_size()}, {"x_ms", s.ecdf.x()}, {"p", s.ecdf.p()}};
  return j;
}

SourceSummary source_from(const json& j, std::string name, std::vector<std::string>& inputs) {
  SourceSummary s;
  s.name = std::move(name);
  s.runs = j.at("runs").get<std::size_t>();
  s.run_sizes = j.at("run_sizes").get<std::vector<std::size_t>>();
  inputs = j.at("inputs").get<std::vector<std::string>>();
  const auto& m = j.at("moments");
  s.moments.n = m.at("n").get<std::size_t>();
  s.moments.mean = m.at("mean_ms").get<double>();
  s.moments.median = m.at("median_ms").get<double>();
  s.moments.variance = m.at("variance_ms2").get<double>();
  s.moments.skewness = m.at("skewness").get<double>();
  s.moments.kurtosis = m.at("kurtosis").get<double>();
  const auto& e = j.at("ecdf");
  s.ecdf = Ecdf::from_points(e.at("x_ms").get<std::vector<double>>(), e.at("p").get<std::vector<double>>(),
                             e.at("n").get<std::size_t>());
  return s;
}

}  // namespace

ordered_json report_to_json(const ValidationReport& report) {
  ordered_json doc;
  doc["tool"] = {{"name", "faas-dessim"}, {"version", report.tool_version}};

  const auto& o = report.options;
  ordered_json config;
  config["confidence"] = o.confidence;
  config["skew_tol"] = o.skew_tol;
  config["kurt_rel_tol"] = o.kurt_rel_tol;
  config["ks_max"] = o.ks_max ? ordered_json(*o.ks_max) : ordered_json(nullptr);
  config["warmup_fraction"] = o.warmup_fraction;
  config["extra_percentiles"] = o.extra_percentiles;
  config["bootstrap_seed"] = o.bootstrap_seed;
  doc["config"] = config;

  doc["sources"]["measured"] = source_json(report.measured, report.measured_inputs);
  doc["sources"]["simulated"] = source_json(report.simulated, report.simulated_inputs);

  ordered_json rows = ordered_json::array();
  for (const auto& row : report.percentiles) {
    ordered_json r;
    r["percentile"] = row.p;
    r["label"] = percentile_label(row.p);
    r["measured"] = interval_json(row.measured);
    r["simulated"] = interval_json(row.simulated);
    rows.push_back(r);
  }
  doc["percentiles"] = rows;

  doc["mean_difference"] = {{"estimate_ms", report.mean_difference},
                            {"lower_ms", report.mean_difference_ci.lower},
                            {"upper_ms", report.mean_difference_ci.upper},
                            {"confidence", report.mean_difference_ci.confidence}};
  doc["ks_distance"] = report.ks_distance;

  const auto& c = report.checks;
  ordered_json verdict;
  verdict["result"] = std::string(to_string(c.verdict));
  verdict["skewness_diff"] = c.skewness_diff;
  verdict["skewness_ok"] = c.skewness_ok;
  verdict["kurtosis_rel_diff"] = c.kurtosis_rel_diff;
  verdict["kurtosis_ok"] = c.kurtosis_ok;
  verdict["ks_ok"] = c.ks_ok ? ordered_json(*c.ks_ok) : ordered_json(nullptr);
  doc["verdict"] = verdict;
  return doc;
}

ValidationReport report_from_json(const json& doc) {
  try {
    ValidationReport report;
    report.tool_version = doc.at("tool").at("version").get<std::string>();

    const auto& config = doc.at("config");
    auto& o = report.options;
    o.confidence = config.at("confidence").get<double>();
    o.skew_tol = config.at("skew_tol").get<double>();
    o.kurt_rel_tol = config.at("kurt_rel_tol").get<double>();
    if (!config.at("ks_max").is_null()) o.ks_max = config.at("ks_max").get<double>();
    o.warmup_fraction = config.at("warmup_fraction").get<double>();
    o.extra_percentiles = config.at("extra_percentiles").get<std::vector<double>>();
    o.bootstrap_seed = config.at("bootstrap_seed").get<std::uint64_t>();

    const auto& sources = doc.at("sources");
    report.measured = source_from(sources.at("measured"), "measured", report.measured_inputs);
    report.simulated = source_from(sources.at("simulated"), "simulated", report.simulated_inputs);

    for (const auto& r : doc.at("percentiles")) {
      const double p = r.at("percentile").get<double>();
      report.percentiles.push_back({p, interval_from(r.at("measured"), p), interval_from(r.at("simulated"), p)});
    }

    const auto& md = doc.at("mean_difference");
    report.mean_difference = md.at("estimate_ms").get<double>();
    report.mean_difference_ci = {md.at("lower_ms").get<double>(), md.at("upper_ms").get<double>(),
                                 md.at("confidence").get<double>()};
    report.ks_distance = doc.at("ks_distance").get<double>();

    const auto& v = doc.at("verdict");
    auto& c = report.checks;
    c.verdict = parse_verdict(v.at("result").get<std::string>());
    c.skewness_diff = v.at("skewness_diff").get<double>();
    c.skewness_ok = v.at("skewness_ok").get<bool>();
    c.kurtosis_rel_diff = v.at("kurtosis_rel_diff").get<double>();
    c.kurtosis_ok = v.at("kurtosis_ok").get<bool>();
    if (!v.at("ks_ok").is_null()) c.ks_ok = v.at("ks_ok").get<bool>();
    return report;
  } catch (const json::exception& e) {
    throw FormatError(std::string("report json: ") + e.what());
  }
}

std::string serialize_report(const ValidationReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

void write_report(const ValidationReport& report, const fs::path& path) {
  write_text_file(path, serialize_report(report));
}

ValidationReport read_report(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return report_from_json(doc);
}

std::vector<fs::path> emit_plot_data(const ValidationReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  for (const SourceSummary* s : {&report.measured, &report.simulated}) {
    std::string out = "x_ms,F\n";
    for (std::size_t i = 0; i < s->ecdf.x().size(); ++i) {
      out += format_double(s->ecdf.x()[i]);
      out += ',';
      out += format_double(s->ecdf.p()[i]);
      out += '\n';
    }
    const fs::path path = dir / ("ecdf_" + s->name + ".csv");
    write_text_file(path, out);
    written.push_back(path);
  }
  std::string cf = "source,skewness_squared,kurtosis\n";
  for (const SourceSummary* s : {&report.measured, &report.simulated}) {
    cf += s->name + "," + format_double(s->moments.cullen_frey_x()) + "," +
          format_double(s->moments.cullen_frey_y()) + "\n";
  }
  const fs::path path = dir / "cullen_frey.csv";
  write_text_file(path, cf);
  written.push_back(path);
  return written;
}

}  // namespace dessim
