#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace emgus {

/// A function argument or configuration value is outside its valid domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scenario failed validation. Carries every offending field, not only the first.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> fields)
        : std::invalid_argument(join(fields)), fields_(std::move(fields)) {}

    const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
    static std::string join(const std::vector<std::string>& fields) {
        std::string msg = "invalid scenario:";
        for (const auto& f : fields) {
            msg += "\n  - ";
            msg += f;
        }
        return msg;
    }

    std::vector<std::string> fields_;
};

/// Malformed input file (CSV row, JSON document, sidecar mismatch).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File system failure: missing input, unwritable output.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant of the simulation was violated. Indicates a bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace emgus
