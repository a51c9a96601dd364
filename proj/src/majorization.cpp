#include "fockmaj/majorization.hpp"

#include <algorithm>
#include <functional>

#include "fockmaj/errors.hpp"

namespace fockmaj {

PartialSumCurve partial_sums(const FockDistribution& rho, CurveMode mode) {
    std::vector<double> p(rho.probs().begin(), rho.probs().end());
    if (mode == CurveMode::Sorted)
        std::sort(p.begin(), p.end(), std::greater<double>());
    double acc = 0.0;
    for (double& v : p) {
        acc += v;
        v = acc;
    }
    return PartialSumCurve{mode, std::move(p)};
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Majorizes: return "majorizes";
    case Verdict::MajorizedBy: return "majorized_by";
    case Verdict::Equivalent: return "equivalent";
    case Verdict::Incomparable: return "incomparable";
    }
    return "unknown";
}

namespace {

double curve_value(const PartialSumCurve& c, std::size_t i) {
    // Past the end the curve is flat: padding a distribution with zero
    // levels extends its cumulative sums by the final value.
    return i < c.sums.size() ? c.sums[i] : c.sums.back();
}

} // namespace

ComparisonOutcome compare_curves(const PartialSumCurve& a, const PartialSumCurve& b,
                                 double eps_cmp) {
    if (a.mode != b.mode)
        throw DimensionMismatch("compare_curves: curves use different orderings");
    if (a.sums.empty() || b.sums.empty())
        throw DimensionMismatch("compare_curves: empty curve");
    const std::size_t n = std::max(a.sums.size(), b.sums.size());
    ComparisonOutcome out;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = curve_value(a, i) - curve_value(b, i);
        out.margin = std::max(out.margin, std::abs(diff));
        if (diff > eps_cmp && !out.witness_up)
            out.witness_up = i;
        if (diff < -eps_cmp && !out.witness_down)
            out.witness_down = i;
    }
    if (out.witness_up && out.witness_down)
        out.verdict = Verdict::Incomparable;
    else if (out.witness_up)
        out.verdict = Verdict::Majorizes;
    else if (out.witness_down)
        out.verdict = Verdict::MajorizedBy;
    else
        out.verdict = Verdict::Equivalent;
    return out;
}

CurveGap curve_gaps(const PartialSumCurve& a, const PartialSumCurve& b) {
    if (a.mode != b.mode)
        throw DimensionMismatch("curve_gaps: curves use different orderings");
    if (a.sums.empty() || b.sums.empty())
        throw DimensionMismatch("curve_gaps: empty curve");
    const std::size_t n = std::max(a.sums.size(), b.sums.size());
    CurveGap gap;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = curve_value(a, i) - curve_value(b, i);
        gap.max_up = std::max(gap.max_up, diff);
        gap.max_down = std::max(gap.max_down, -diff);
    }
    return gap;
}

namespace {

ComparisonOutcome compare_impl(const FockDistribution& a, const FockDistribution& b,
                               CurveMode mode, const Tolerances& tol) {
    if (a.tail_mass() > tol.tail || b.tail_mass() > tol.tail)
        throw TailTooLarge("compare: operand tail mass exceeds the tail bound");
    return compare_curves(partial_sums(a, mode), partial_sums(b, mode), tol.cmp);
}

} // namespace

ComparisonOutcome compare_majorization(const FockDistribution& a, const FockDistribution& b,
                                       const Tolerances& tol) {
    return compare_impl(a, b, CurveMode::Sorted, tol);
}

ComparisonOutcome compare_fock_majorization(const FockDistribution& a,
                                            const FockDistribution& b,
                                            const Tolerances& tol) {
    return compare_impl(a, b, CurveMode::FockOrder, tol);
}

EnergyOrderReport check_energy_order(const FockDistribution& majorizing,
                                     const FockDistribution& majorized,
                                     const Tolerances& tol) {
    const ComparisonOutcome oc = compare_fock_majorization(majorizing, majorized, tol);
    if (oc.verdict != Verdict::Majorizes && oc.verdict != Verdict::Equivalent)
        throw PreorderNotEstablished(
            "check_energy_order: first operand does not Fock-majorize the second (" +
            to_string(oc.verdict) + ")");
    EnergyOrderReport rep;
    rep.mean_first = mean_photon_number(majorizing);
    rep.mean_second = mean_photon_number(majorized);
    rep.gap = rep.mean_second - rep.mean_first;
    // The mean is a linear functional of the partial-sum curve, so the
    // established order forces this; failure would be a library bug.
    const double slack =
        tol.cmp * static_cast<double>(std::max(majorizing.size(), majorized.size()));
    if (rep.gap < -slack)
        throw std::logic_error("check_energy_order: Fock order contradicts the means");
    return rep;
}

} // namespace fockmaj
