#ifndef LSSW_ERRORS_HPP
#define LSSW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lssw {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain (support, MGF domain, unit interval).
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Iterative scheme exhausted its budget before reaching tolerance.
struct NonConvergence : Error {
  explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

// Construction-time consistency check failed (e.g. density does not normalize).
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// A point or segment left the flat coordinate chart.
struct ChartError : Error {
  double exit_t;
  explicit ChartError(const std::string& msg, double t = -1.0) : Error(msg), exit_t(t) {}
};

// Least-squares membership fit diverged.
struct FitError : Error {
  explicit FitError(const std::string& msg) : Error(msg) {}
};

}  // namespace lssw

#endif
