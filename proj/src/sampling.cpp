#include "fockmaj/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fockmaj/errors.hpp"

namespace fockmaj {

double Rng::exponential() { return -std::log1p(-uniform()); }

namespace {

std::vector<double> dirichlet_block(Rng& rng, std::size_t cutoff, bool sorted) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.below(cutoff + 1));
    std::vector<double> p(cutoff + 1, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        p[i] = rng.exponential();
        sum += p[i];
    }
    if (sum <= 0.0) {
        // All draws rounded to zero (astronomically unlikely); fall back
        // to a point mass so normalization still holds.
        p[0] = 1.0;
        sum = 1.0;
    }
    if (sorted)
        std::sort(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(d),
                  std::greater<double>());
    for (std::size_t i = 0; i < d; ++i)
        p[i] /= sum;
    return p;
}

void random_downward_transfers(Rng& rng, std::vector<double>& p, std::size_t cutoff) {
    if (cutoff == 0)
        return;
    const std::size_t moves = 1 + static_cast<std::size_t>(rng.below(2 * (cutoff + 1)));
    for (std::size_t m = 0; m < moves; ++m) {
        const std::size_t j = 1 + static_cast<std::size_t>(rng.below(cutoff));
        const std::size_t i = static_cast<std::size_t>(rng.below(j));
        const double delta = rng.uniform() * p[j];
        p[j] -= delta;
        p[i] += delta;
    }
}

} // namespace

FockDistribution sample_diagonal(Rng& rng, std::size_t cutoff) {
    return FockDistribution(dirichlet_block(rng, cutoff, false));
}

FockDistribution sample_passive(Rng& rng, std::size_t cutoff) {
    return FockDistribution(dirichlet_block(rng, cutoff, true));
}

std::pair<FockDistribution, FockDistribution>
sample_fock_comparable_pair(Rng& rng, std::size_t cutoff) {
    FockDistribution sigma = sample_diagonal(rng, cutoff);
    std::vector<double> r(sigma.probs().begin(), sigma.probs().end());
    random_downward_transfers(rng, r, cutoff);
    return {FockDistribution(std::move(r), sigma.tail_mass()), std::move(sigma)};
}

std::pair<FockDistribution, FockDistribution>
sample_passive_comparable_pair(Rng& rng, std::size_t cutoff) {
    FockDistribution sigma = sample_passive(rng, cutoff);
    std::vector<double> r(sigma.probs().begin(), sigma.probs().end());
    random_downward_transfers(rng, r, cutoff);
    FockDistribution rho =
        passive_rearrangement(FockDistribution(std::move(r), sigma.tail_mass()));
    return {std::move(rho), std::move(sigma)};
}

FockDistribution sample_passive_with_min_entropy(Rng& rng, std::size_t cutoff,
                                                 double min_entropy_nats,
                                                 std::size_t max_attempts,
                                                 std::size_t* attempts_out) {
    if (!(min_entropy_nats >= 0.0) || !std::isfinite(min_entropy_nats))
        throw ParameterOutOfRange("sample_passive_with_min_entropy: bound must be >= 0");
    const double ceiling = std::log(static_cast<double>(cutoff + 1));
    if (min_entropy_nats > ceiling)
        throw ParameterOutOfRange(
            "sample_passive_with_min_entropy: bound above ln(cutoff+1)");
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        FockDistribution rho = sample_passive(rng, cutoff);
        if (von_neumann_entropy(rho) >= min_entropy_nats) {
            if (attempts_out)
                *attempts_out = attempt;
            return rho;
        }
    }
    throw SearchExhausted(
        "sample_passive_with_min_entropy: no state above the entropy bound");
}

FockDistribution truncated_thermal(double mean_photons, std::size_t cutoff,
                                   const Tolerances& tol) {
    FockDistribution full = thermal_distribution(ThermalSpec{mean_photons}, cutoff, tol);
    std::vector<double> p(full.probs().begin(), full.probs().end());
    double sum = 0.0;
    for (double v : p)
        sum += v;
    for (double& v : p)
        v /= sum;
    return FockDistribution(std::move(p), 0.0, tol);
}

} // namespace fockmaj
