#pragma once

#include <cstddef>
#include <utility>

#include "fockmaj/fock.hpp"
#include "fockmaj/rng.hpp"
#include "fockmaj/tolerances.hpp"

namespace fockmaj {

/// Random diagonal state on levels 0..cutoff: a uniformly chosen support
/// size d in [1, cutoff+1], then d normalized Exp(1) draws (flat Dirichlet
/// on the d-simplex), remaining levels zero. Not sorted.
FockDistribution sample_diagonal(Rng& rng, std::size_t cutoff);

/// Same construction with the draws sorted in non-increasing order, which
/// makes the state passive.
FockDistribution sample_passive(Rng& rng, std::size_t cutoff);

/// Pair (rho, sigma) with rho Fock-majorizing sigma by construction:
/// sigma is a random diagonal state and rho is sigma after a random number
/// of mass transfers, each moving a random fraction of some level j down
/// to a lower level i < j.
std::pair<FockDistribution, FockDistribution>
sample_fock_comparable_pair(Rng& rng, std::size_t cutoff);

/// Pair of passive states with rho majorizing sigma (regular sense):
/// built like the Fock-comparable pair from a passive sigma, then rho is
/// passively rearranged. Downward transfers only sharpen the sorted
/// curve, so the order survives the rearrangement.
std::pair<FockDistribution, FockDistribution>
sample_passive_comparable_pair(Rng& rng, std::size_t cutoff);

/// Rejection-sample a passive state with entropy >= min_entropy_nats.
/// Throws SearchExhausted after max_attempts rejections and
/// ParameterOutOfRange when the bound exceeds ln(cutoff+1), the largest
/// entropy any state at this cutoff can have. attempts_out, when given,
/// receives the number of draws consumed.
FockDistribution sample_passive_with_min_entropy(Rng& rng, std::size_t cutoff,
                                                 double min_entropy_nats,
                                                 std::size_t max_attempts = 100000,
                                                 std::size_t* attempts_out = nullptr);

/// Thermal state truncated at the cutoff and renormalized to unit mass
/// (zero tail). Useful where exact normalization matters more than exact
/// geometric populations, e.g. low-cutoff comparison searches.
FockDistribution truncated_thermal(double mean_photons, std::size_t cutoff,
                                   const Tolerances& tol = kDefaultTol);

} // namespace fockmaj
