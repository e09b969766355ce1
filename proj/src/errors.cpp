#include "qsd/errors.hpp"

namespace qsd {

const char* to_string(config_errc c) {
    switch (c) {
        case config_errc::missing_field: return "MissingField";
        case config_errc::unknown_key: return "UnknownKey";
        case config_errc::out_of_range: return "OutOfRange";
        case config_errc::inconsistent_bath: return "InconsistentBath";
        case config_errc::unknown_preset: return "UnknownPreset";
        case config_errc::bad_value: return "BadValue";
    }
    return "ConfigError";
}

const char* to_string(numeric_errc c) {
    switch (c) {
        case numeric_errc::tolerance_not_met: return "ToleranceNotMet";
        case numeric_errc::singular_denominator: return "SingularDenominator";
        case numeric_errc::zero_response: return "ZeroResponse";
        case numeric_errc::no_decay: return "NoDecay";
        case numeric_errc::zero_initial_coherence: return "ZeroInitialCoherence";
        case numeric_errc::degenerate_target: return "DegenerateTarget";
        case numeric_errc::non_finite_tensor: return "NonFiniteTensor";
        case numeric_errc::memory_budget_exceeded: return "MemoryBudgetExceeded";
    }
    return "NumericError";
}

}  // namespace qsd
