#pragma once

#include <stdexcept>

namespace fockmaj {

// Channel or state parameter outside its admissible range
// (transmittance not in [0,1], gain < 1, negative mean photon number, ...).
struct ParameterOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adaptive output cutoff of a kernel grew past the hard cap.
struct CutoffOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands of an operation have irreconcilable dimensions.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A comparison was requested on a state whose untracked tail mass is too
// large for the verdict to be trustworthy.
struct TailTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A passive-only operation received a non-passive state.
struct NonPassiveInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An energy-order statement was requested for a pair whose preorder
// relation does not actually hold.
struct PreorderNotEstablished : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A randomized search finished its trial budget without finding anything.
struct SearchExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fockmaj
