#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fockmaj/fock.hpp"
#include "fockmaj/tolerances.hpp"

namespace fockmaj {

enum class CurveMode {
    Sorted,    // entries sorted in non-increasing order (regular majorization)
    FockOrder, // native photon-number order (Fock-majorization)
};

/// Cumulative-sum curve of a distribution. sums[n] is the mass of the
/// first n+1 entries in the chosen order; the last value is 1 - tail_mass
/// up to round-off.
struct PartialSumCurve {
    CurveMode mode = CurveMode::Sorted;
    std::vector<double> sums;
};

PartialSumCurve partial_sums(const FockDistribution& rho, CurveMode mode);

enum class Verdict { Majorizes, MajorizedBy, Equivalent, Incomparable };

std::string to_string(Verdict v);

/// Outcome of comparing curve(a) against curve(b).
///   witness_up   : first index where a's partial sum exceeds b's by more
///                  than eps_cmp
///   witness_down : first index for the opposite direction
///   margin       : largest |difference| over all indices
/// Both witnesses present => Incomparable; only up => Majorizes; only
/// down => MajorizedBy; neither => Equivalent (margin <= eps_cmp).
struct ComparisonOutcome {
    Verdict verdict = Verdict::Equivalent;
    std::optional<std::size_t> witness_up;
    std::optional<std::size_t> witness_down;
    double margin = 0.0;
};

/// Compare two curves index by index; the shorter curve is extended with
/// its final value (a zero-padded distribution produces exactly that).
ComparisonOutcome compare_curves(const PartialSumCurve& a, const PartialSumCurve& b,
                                 double eps_cmp = kDefaultTol.cmp);

/// Largest upward / downward excursions of curve(a) - curve(b).
/// max_up and max_down are both >= 0; a pass of "a majorizes b" means
/// max_down stays at round-off level.
struct CurveGap {
    double max_up = 0.0;
    double max_down = 0.0;
};

CurveGap curve_gaps(const PartialSumCurve& a, const PartialSumCurve& b);

/// Regular majorization: compare sorted partial-sum curves.
/// Throws TailTooLarge when either operand has tail mass above tol.tail.
ComparisonOutcome compare_majorization(const FockDistribution& a, const FockDistribution& b,
                                       const Tolerances& tol = kDefaultTol);

/// Fock-majorization: compare native-order partial-sum curves.
ComparisonOutcome compare_fock_majorization(const FockDistribution& a,
                                            const FockDistribution& b,
                                            const Tolerances& tol = kDefaultTol);

struct EnergyOrderReport {
    double mean_first = 0.0;
    double mean_second = 0.0;
    double gap = 0.0; // mean_second - mean_first
};

/// For a pair with first >=_F second (Fock-majorization), the mean photon
/// number must be ordered the other way: mean(first) <= mean(second).
/// Throws PreorderNotEstablished when the pair is not Fock-ordered that
/// way, and reports the means and their gap otherwise.
EnergyOrderReport check_energy_order(const FockDistribution& majorizing,
                                     const FockDistribution& majorized,
                                     const Tolerances& tol = kDefaultTol);

} // namespace fockmaj
