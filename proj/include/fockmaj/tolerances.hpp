#pragma once

namespace fockmaj {

// Numeric tolerances shared across the library.
//   cmp  : entrywise and partial-sum comparisons
//   norm : normalization checks (probabilities + tail mass must sum to 1)
//   tail : largest probability mass a kernel column may leave untracked
struct Tolerances {
    double cmp = 1e-12;
    double norm = 1e-10;
    double tail = 1e-10;
};

inline constexpr Tolerances kDefaultTol{};

} // namespace fockmaj
