#include "savopt/trace.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace savopt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

double parse_field(const std::string& s, const std::string& path, std::size_t line) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": bad numeric field '" + s + "'");
  }
  return v;
}

Status parse_status(const std::string& s, const std::string& path, std::size_t line) {
  if (s == "ok") return Status::ok;
  if (s == "diverge") return Status::diverge;
  if (s == "error") return Status::error;
  throw std::runtime_error(path + ":" + std::to_string(line) + ": bad status '" + s + "'");
}

}  // namespace

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  out << trace_csv_header() << "\n";
  for (const TraceRecord& t : trace) {
    out << t.k << ',' << format_double(t.f) << ',' << format_double(t.r) << ','
        << format_double(t.r_tilde) << ',' << format_double(t.xi) << ','
        << format_double(t.dt) << ',' << format_double(t.alpha) << ','
        << format_double(t.grad_norm) << ',' << format_double(t.indicator) << ','
        << status_name(t.status) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trace_json(const Trace& trace, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["header"] = {"k", "f", "r", "r_tilde", "xi", "dt", "alpha", "grad_norm", "indicator",
                   "status"};
  auto& records = doc["records"];
  records = nlohmann::json::array();
  auto num = [](double v) -> nlohmann::ordered_json {
    // JSON has no NaN/inf literal; mirror the CSV's textual form.
    if (std::isnan(v) || std::isinf(v)) return format_double(v);
    return v;
  };
  for (const TraceRecord& t : trace) {
    nlohmann::ordered_json rec;
    rec["k"] = t.k;
    rec["f"] = num(t.f);
    rec["r"] = num(t.r);
    rec["r_tilde"] = num(t.r_tilde);
    rec["xi"] = num(t.xi);
    rec["dt"] = num(t.dt);
    rec["alpha"] = num(t.alpha);
    rec["grad_norm"] = num(t.grad_norm);
    rec["indicator"] = num(t.indicator);
    rec["status"] = status_name(t.status);
    records.push_back(std::move(rec));
  }
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Trace parse_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != trace_csv_header()) {
    throw std::runtime_error(path + ":1: unexpected header '" + line + "'");
  }
  Trace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 10 fields, got " +
                               std::to_string(fields.size()));
    }
    TraceRecord t;
    t.k = static_cast<std::int64_t>(parse_field(fields[0], path, lineno));
    t.f = parse_field(fields[1], path, lineno);
    t.r = parse_field(fields[2], path, lineno);
    t.r_tilde = parse_field(fields[3], path, lineno);
    t.xi = parse_field(fields[4], path, lineno);
    t.dt = parse_field(fields[5], path, lineno);
    t.alpha = parse_field(fields[6], path, lineno);
    t.grad_norm = parse_field(fields[7], path, lineno);
    t.indicator = parse_field(fields[8], path, lineno);
    t.status = parse_status(fields[9], path, lineno);
    trace.push_back(t);
  }
  return trace;
}

}  // namespace savopt
