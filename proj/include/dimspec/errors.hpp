#pragma once

#include <stdexcept>
#include <string>

namespace dimspec {

// Input that violates an operation's documented domain (bad letter, t < 0, ...).
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Caller broke a stated precondition (word not admissible, reducible graph, ...).
struct PreconditionError : std::logic_error {
    explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

// A configured budget (word count, depth, iterations) was exhausted.
// The message names the offending size estimate.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Declarative configuration failed validation; message carries the field path.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A computed quantity violated an internal invariant (K < 1, empty bracket, ...).
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace dimspec
