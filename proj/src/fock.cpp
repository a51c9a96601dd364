#include "fockmaj/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "fockmaj/errors.hpp"

namespace fockmaj {

FockDistribution::FockDistribution(std::vector<double> probs, double tail_mass,
                                   const Tolerances& tol)
    : probs_(std::move(probs)), tail_mass_(tail_mass) {
    if (probs_.empty())
        throw std::invalid_argument("FockDistribution: no probabilities given");
    if (!(tail_mass_ >= 0.0) || !std::isfinite(tail_mass_))
        throw std::invalid_argument("FockDistribution: tail mass must be finite and >= 0");
    for (double& p : probs_) {
        if (!std::isfinite(p))
            throw std::invalid_argument("FockDistribution: non-finite probability");
        if (p < -tol.cmp) {
            std::ostringstream msg;
            msg << "FockDistribution: probability " << p << " below -eps_cmp";
            throw std::invalid_argument(msg.str());
        }
        if (p < 0.0) {
            clamped_mass_ -= p;
            p = 0.0;
        }
    }
    const double total = std::accumulate(probs_.begin(), probs_.end(), tail_mass_);
    if (std::abs(total - 1.0) > tol.norm) {
        std::ostringstream msg;
        msg << "FockDistribution: probabilities + tail sum to " << total
            << ", off by more than eps_norm";
        throw std::invalid_argument(msg.str());
    }
}

FockDistribution FockDistribution::fock(std::size_t k, std::size_t cutoff) {
    if (k > cutoff)
        throw DimensionMismatch("fock: level above the requested cutoff");
    std::vector<double> p(cutoff + 1, 0.0);
    p[k] = 1.0;
    return FockDistribution(std::move(p));
}

FockDistribution FockDistribution::zero_padded(std::size_t new_cutoff) const {
    if (new_cutoff < cutoff())
        throw DimensionMismatch("zero_padded: new cutoff below current one");
    std::vector<double> p(probs_.begin(), probs_.end());
    p.resize(new_cutoff + 1, 0.0);
    return FockDistribution(std::move(p), tail_mass_);
}

bool is_passive(const FockDistribution& rho, const Tolerances& tol) {
    const auto p = rho.probs();
    for (std::size_t n = 0; n + 1 < p.size(); ++n)
        if (p[n + 1] > p[n] + tol.cmp)
            return false;
    return true;
}

FockDistribution passive_rearrangement(const FockDistribution& rho, const Tolerances& tol) {
    std::vector<double> p(rho.probs().begin(), rho.probs().end());
    std::sort(p.begin(), p.end(), std::greater<double>());
    return FockDistribution(std::move(p), rho.tail_mass(), tol);
}

PassiveDecomposition passive_decomposition(const FockDistribution& rho,
                                           const Tolerances& tol) {
    if (!is_passive(rho, tol))
        throw NonPassiveInput("passive_decomposition: populations increase somewhere");
    const auto p = rho.probs();
    PassiveDecomposition dec;
    dec.weights.resize(p.size());
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double next = n + 1 < p.size() ? p[n + 1] : 0.0;
        // Passivity holds up to eps_cmp, so tiny negative gaps are noise.
        dec.weights[n] = std::max(p[n] - next, 0.0);
    }
    return dec;
}

FockDistribution decomposition_state(const PassiveDecomposition& dec, const Tolerances& tol) {
    if (dec.weights.empty())
        throw std::invalid_argument("decomposition_state: no weights");
    std::vector<double> p(dec.weights.size());
    double suffix = 0.0;
    for (std::size_t n = dec.weights.size(); n-- > 0;) {
        suffix += dec.weights[n];
        p[n] = suffix;
    }
    double total = 0.0;
    for (double v : p)
        total += v;
    return FockDistribution(std::move(p), std::max(1.0 - total, 0.0), tol);
}

double mean_photon_number(const FockDistribution& rho) {
    const auto p = rho.probs();
    double mean = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n)
        mean += static_cast<double>(n) * p[n];
    return mean;
}

double von_neumann_entropy(const FockDistribution& rho) {
    double s = 0.0;
    for (double p : rho.probs())
        if (p > 0.0)
            s -= p * std::log(p);
    return s;
}

FockDistribution thermal_distribution(const ThermalSpec& spec, std::size_t cutoff,
                                      const Tolerances& tol) {
    const double nbar = spec.mean_photons;
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
        throw ParameterOutOfRange("thermal_distribution: mean photon number must be >= 0");
    const double q = nbar / (nbar + 1.0);
    std::vector<double> p(cutoff + 1);
    p[0] = 1.0 / (nbar + 1.0);
    for (std::size_t n = 1; n <= cutoff; ++n)
        p[n] = p[n - 1] * q;
    // Geometric remainder: q^(cutoff+1) = q * p_cutoff * (nbar + 1).
    const double tail = q * p[cutoff] * (nbar + 1.0);
    return FockDistribution(std::move(p), tail, tol);
}

double thermal_entropy(double mean_photons) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw ParameterOutOfRange("thermal_entropy: mean photon number must be >= 0");
    if (mean_photons == 0.0)
        return 0.0;
    return (mean_photons + 1.0) * std::log(mean_photons + 1.0) -
           mean_photons * std::log(mean_photons);
}

double mean_photons_for_entropy(double entropy_nats) {
    if (!(entropy_nats >= 0.0) || !std::isfinite(entropy_nats))
        throw ParameterOutOfRange("mean_photons_for_entropy: entropy must be >= 0");
    if (entropy_nats == 0.0)
        return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (thermal_entropy(hi) < entropy_nats) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            throw ParameterOutOfRange("mean_photons_for_entropy: entropy out of range");
    }
    // Bisect to the floating-point floor; thermal_entropy is strictly
    // increasing, so this pins the preimage to one ulp.
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (thermal_entropy(mid) < entropy_nats)
            lo = mid;
        else
            hi = mid;
    }
    return std::abs(thermal_entropy(lo) - entropy_nats) <=
                   std::abs(thermal_entropy(hi) - entropy_nats)
               ? lo
               : hi;
}

} // namespace fockmaj
