#pragma once

#include <stdexcept>
#include <string>

namespace extsrc {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BranchPointProximity : NumericalError {
    using NumericalError::NumericalError;
};

struct UnsupportedPhase : NumericalError {
    using NumericalError::NumericalError;
};

struct PoleAtSource : NumericalError {
    using NumericalError::NumericalError;
};

struct ExtrapolationUnstable : NumericalError {
    using NumericalError::NumericalError;
};

struct InsufficientDecade : NumericalError {
    using NumericalError::NumericalError;
};

struct PathBlocked : NumericalError {
    using NumericalError::NumericalError;
};

struct NonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct CurveNotFound : NumericalError {
    using NumericalError::NumericalError;
};

struct OnRayError : NumericalError {
    using NumericalError::NumericalError;
};

struct OutsideDisk : NumericalError {
    using NumericalError::NumericalError;
};

struct IllConditioned : NumericalError {
    using NumericalError::NumericalError;
};

struct EigenFail : NumericalError {
    using NumericalError::NumericalError;
};

struct NonIntersectViolation : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace extsrc
