#pragma once

#include <stdexcept>
#include <string>

namespace cbet {

// Shared error vocabulary. The CLI maps ConfigError to exit code 2 and
// every other CbetError to exit code 3.
struct CbetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationFailed : CbetError {
    using CbetError::CbetError;
};

struct ShapeError : CbetError {
    using CbetError::CbetError;
};

struct ContractViolation : CbetError {
    using CbetError::CbetError;
};

struct NumericalError : CbetError {
    using CbetError::CbetError;
};

struct IncompatibleCheckpoint : CbetError {
    using CbetError::CbetError;
};

struct ConfigError : CbetError {
    using CbetError::CbetError;
};

}  // namespace cbet
