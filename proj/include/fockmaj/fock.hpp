#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fockmaj/tolerances.hpp"

namespace fockmaj {

/// Photon-number probability vector of a Fock-diagonal state, truncated at
/// a finite cutoff. Index n holds the population of the n-photon level.
/// Probability weight living above the cutoff is carried explicitly in
/// tail_mass() instead of being silently dropped.
///
/// Construction enforces: at least one entry, every entry >= -eps_cmp
/// (tiny negatives are clamped to zero), tail_mass >= 0, and
/// sum(probs) + tail_mass == 1 within eps_norm.
class FockDistribution {
public:
    explicit FockDistribution(std::vector<double> probs, double tail_mass = 0.0,
                              const Tolerances& tol = kDefaultTol);

    /// Number state |k> represented on levels 0..cutoff.
    static FockDistribution fock(std::size_t k, std::size_t cutoff);
    static FockDistribution fock(std::size_t k) { return fock(k, k); }
    static FockDistribution vacuum(std::size_t cutoff = 0) { return fock(0, cutoff); }

    std::size_t size() const { return probs_.size(); }
    std::size_t cutoff() const { return probs_.size() - 1; }
    std::span<const double> probs() const { return probs_; }
    /// Population of level n; zero above the cutoff.
    double prob(std::size_t n) const { return n < probs_.size() ? probs_[n] : 0.0; }
    double tail_mass() const { return tail_mass_; }
    /// Total round-off mass removed by clamping negative entries at construction.
    double clamped_mass() const { return clamped_mass_; }

    /// Same state embedded in a larger truncation (tail mass unchanged).
    FockDistribution zero_padded(std::size_t new_cutoff) const;

private:
    std::vector<double> probs_;
    double tail_mass_ = 0.0;
    double clamped_mass_ = 0.0;
};

/// Thermal (geometric) state parameterized by its mean photon number.
struct ThermalSpec {
    double mean_photons = 0.0;
};

/// Weights e_n of the mixture sum_n e_n P_n that reproduces a passive
/// state, where P_n projects onto levels 0..n. The weights satisfy
/// e_n = p_n - p_{n+1} >= 0 and sum_n e_n (n+1) = sum_n p_n.
struct PassiveDecomposition {
    std::vector<double> weights;
};

/// True when the populations are non-increasing in the photon number,
/// up to eps_cmp per step.
bool is_passive(const FockDistribution& rho, const Tolerances& tol = kDefaultTol);

/// Populations sorted in non-increasing order; the passive state with the
/// same spectrum. Idempotent, entropy- and normalization-preserving.
FockDistribution passive_rearrangement(const FockDistribution& rho,
                                       const Tolerances& tol = kDefaultTol);

/// Decompose a passive state into the projector mixture described above.
/// Throws NonPassiveInput otherwise.
PassiveDecomposition passive_decomposition(const FockDistribution& rho,
                                           const Tolerances& tol = kDefaultTol);

/// Rebuild the state sum_n e_n P_n from decomposition weights.
FockDistribution decomposition_state(const PassiveDecomposition& dec,
                                     const Tolerances& tol = kDefaultTol);

/// sum_n n p_n over the tracked levels. A lower bound on the true mean
/// when tail mass is nonzero.
double mean_photon_number(const FockDistribution& rho);

/// Shannon entropy -sum p ln p of the tracked populations, in nats.
double von_neumann_entropy(const FockDistribution& rho);

FockDistribution thermal_distribution(const ThermalSpec& spec, std::size_t cutoff,
                                      const Tolerances& tol = kDefaultTol);

/// Entropy of a thermal state with the given mean photon number:
/// (n+1) ln(n+1) - n ln n, in nats. Strictly increasing from 0.
double thermal_entropy(double mean_photons);

/// Inverse of thermal_entropy, solved by bisection to ~1e-15 relative
/// accuracy in the entropy.
double mean_photons_for_entropy(double entropy_nats);

} // namespace fockmaj
