#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

/// Exit-code categories used by the CLI (0 = success).
enum class ErrorCategory {
    HypothesisViolated = 2,  ///< input data outside a theorem's hypothesis
    NumericalFailure = 3,    ///< stiffness breakdown, bracket collapse, overflow
    CheckFailure = 4,        ///< an asserted verification failed
    Io = 5,                  ///< file system / serialization problems
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), category_(cat) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct HypothesisError : Error {
    explicit HypothesisError(const std::string& msg)
        : Error(ErrorCategory::HypothesisViolated, msg) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& msg)
        : Error(ErrorCategory::NumericalFailure, msg) {}
};

struct CheckError : Error {
    explicit CheckError(const std::string& msg)
        : Error(ErrorCategory::CheckFailure, msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg)
        : Error(ErrorCategory::Io, msg) {}
};

struct InvalidStateError : Error {
    explicit InvalidStateError(const std::string& msg)
        : Error(ErrorCategory::NumericalFailure, msg) {}
};

}  // namespace dyadic
