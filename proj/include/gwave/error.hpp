#ifndef GWAVE_ERROR_HPP
#define GWAVE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace gwave {

enum class ErrorCode {
    CountMismatch,
    NotUnit,
    NotUnimodular,
    BadOverlap,
    NotABank,
    CutoffTooSmall,
    NoConvergence,
    ZeroWeight,
    Incompatible,
    AlphabetMismatch,
    LevelTooSmall,
    NotCore,
    HypothesisFail,
    GridMismatch,
    GridTooNarrow,
    DimMismatch,
    EmptySet,
    EmptyCode,
    BadIfs,
    BadInput,
    Io,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::CountMismatch: return "COUNT_MISMATCH";
    case ErrorCode::NotUnit: return "NOT_UNIT";
    case ErrorCode::NotUnimodular: return "NOT_UNIMODULAR";
    case ErrorCode::BadOverlap: return "BAD_OVERLAP";
    case ErrorCode::NotABank: return "NOT_A_BANK";
    case ErrorCode::CutoffTooSmall: return "CUTOFF_TOO_SMALL";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::ZeroWeight: return "ZERO_WEIGHT";
    case ErrorCode::Incompatible: return "INCOMPATIBLE";
    case ErrorCode::AlphabetMismatch: return "ALPHABET_MISMATCH";
    case ErrorCode::LevelTooSmall: return "LEVEL_TOO_SMALL";
    case ErrorCode::NotCore: return "NOT_CORE";
    case ErrorCode::HypothesisFail: return "HYPOTHESIS_FAIL";
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::GridTooNarrow: return "GRID_TOO_NARROW";
    case ErrorCode::DimMismatch: return "DIM_MISMATCH";
    case ErrorCode::EmptySet: return "EMPTY_SET";
    case ErrorCode::EmptyCode: return "EMPTY_CODE";
    case ErrorCode::BadIfs: return "BAD_IFS";
    case ErrorCode::BadInput: return "BAD_INPUT";
    case ErrorCode::Io: return "IO";
    }
    return "UNKNOWN";
}

/// Exception carrying one of the library's error codes. The message is
/// prefixed with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace gwave

#endif // GWAVE_ERROR_HPP
