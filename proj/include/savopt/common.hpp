#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace savopt {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;

enum class Status { ok, diverge, error };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::diverge: return "diverge";
    default: return "error";
  }
}

/// Requested capability is not provided by this objective/problem.
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// A runtime precondition (e.g. f(theta)+C > 0) was violated.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct WolfeNotFound : std::runtime_error {
  explicit WolfeNotFound(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace savopt
