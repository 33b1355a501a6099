#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace socon {

// Runtime failure (I/O, non-convergence, internal contract breach). CLI maps to exit 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, out-of-range config values. CLI maps to exit 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void set_verbosity(int level);
int verbosity();

// Always printed to stderr; info() only when verbosity >= 1.
void warn(const std::string& msg);
void info(const std::string& msg);

// Resolves a --jobs value: <= 0 means hardware concurrency.
int resolve_jobs(int jobs);

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks; callers
// must write results to per-index slots so the outcome is schedule-independent.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace socon
