#pragma once

#include <stdexcept>
#include <string>

namespace stfm {

// A solver could not continue: non-finite state, or a linear solve that
// stayed singular through the retry cap. The message carries the
// time/interval/phase context added by the caller.
class SolverFailure : public std::runtime_error {
public:
    explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

// Configuration rejected: JSON syntax error, or one message line per
// aggregated semantic violation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stfm
