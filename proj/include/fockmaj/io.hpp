#pragma once

#include <string>

#include "fockmaj/channels.hpp"
#include "fockmaj/fock.hpp"
#include "fockmaj/majorization.hpp"
#include "fockmaj/tolerances.hpp"
#include "fockmaj/verifiers.hpp"

namespace fockmaj::io {

/// Shortest decimal form that parses back to exactly the same double
/// (std::to_chars). All JSON/CSV emitters below go through this, which is
/// what makes reports byte-stable across runs.
std::string format_double(double x);

std::string to_json(const FockDistribution& rho);
std::string to_json(const ComparisonOutcome& outcome);
std::string to_json(const ChannelKernel& kernel);
std::string to_json(const ScanReport& report);
std::string to_json(const std::vector<ScanReport>& reports);

std::string to_csv(const FockDistribution& rho);
std::string to_csv(const PartialSumCurve& curve);
std::string to_csv(const ChannelKernel& kernel);

FockDistribution distribution_from_json(const std::string& text,
                                        const Tolerances& tol = kDefaultTol);
/// "index,probability" rows (index column optional); tail mass is
/// reconstructed as max(0, 1 - sum).
FockDistribution distribution_from_csv(const std::string& text,
                                       const Tolerances& tol = kDefaultTol);

ChannelKernel kernel_from_json(const std::string& text);
/// Comma-separated rows; column tails reconstructed as max(0, 1 - colsum).
ChannelKernel kernel_from_csv(const std::string& text);

/// Parses the "index,cumulative" CSV written by to_csv(PartialSumCurve).
/// The curve mode is not stored in the CSV; the caller chooses it.
PartialSumCurve curve_from_csv(const std::string& text,
                               CurveMode mode = CurveMode::FockOrder);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace fockmaj::io
