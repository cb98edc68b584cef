#pragma once

#include <limits>
#include <string>
#include <vector>

#include "savopt/common.hpp"

namespace savopt {

/// Per-iteration diagnostics. Fields that a given optimizer does not define
/// stay NaN and serialize as "nan".
struct TraceRecord {
  std::int64_t k = 0;
  double f = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double r_tilde = std::numeric_limits<double>::quiet_NaN();
  double xi = std::numeric_limits<double>::quiet_NaN();
  double dt = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  double indicator = std::numeric_limits<double>::quiet_NaN();
  Status status = Status::ok;

  // In-memory diagnostics, not serialized.
  double g_form = std::numeric_limits<double>::quiet_NaN();  // G(theta_{k+1}, theta_k)
  double f_next = std::numeric_limits<double>::quiet_NaN();
};

using Trace = std::vector<TraceRecord>;

/// Fixed CSV header shared by writer and parser.
inline const char* trace_csv_header() {
  return "k,f,r,r_tilde,xi,dt,alpha,grad_norm,indicator,status";
}

void write_trace_csv(const Trace& trace, const std::string& path);
void write_trace_json(const Trace& trace, const std::string& path);
Trace parse_trace_csv(const std::string& path);

std::string format_double(double v);

}  // namespace savopt
