#pragma once

#include <stdexcept>
#include <string>

namespace qsd {

// Error taxonomy mirrored by the CLI exit codes:
//   config_error -> 1, numeric_error -> 2, io_error -> 3.

enum class config_errc {
    missing_field,
    unknown_key,
    out_of_range,
    inconsistent_bath,
    unknown_preset,
    bad_value,
};

enum class numeric_errc {
    tolerance_not_met,
    singular_denominator,
    zero_response,
    no_decay,
    zero_initial_coherence,
    degenerate_target,
    non_finite_tensor,
    memory_budget_exceeded,
};

const char* to_string(config_errc c);
const char* to_string(numeric_errc c);

class config_error : public std::runtime_error {
public:
    config_error(config_errc kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
    config_errc kind() const { return kind_; }

private:
    config_errc kind_;
};

class numeric_error : public std::runtime_error {
public:
    numeric_error(numeric_errc kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
    numeric_errc kind() const { return kind_; }

private:
    numeric_errc kind_;
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& detail) : std::runtime_error("io: " + detail) {}
};

}  // namespace qsd
