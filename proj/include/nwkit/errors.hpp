#pragma once

#include <stdexcept>
#include <string>

namespace nwkit {

// Invalid physical input or violated type invariant. Maps to CLI exit 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line number when known.
// Maps to CLI exit 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The least-squares problem cannot identify `parameter`.
class DegenerateFitError : public FitError {
public:
    explicit DegenerateFitError(std::string parameter)
        : FitError("degenerate fit: parameter '" + parameter + "' is unidentifiable"),
          parameter_(std::move(parameter)) {}

    const std::string& parameter() const { return parameter_; }

private:
    std::string parameter_;
};

} // namespace nwkit
