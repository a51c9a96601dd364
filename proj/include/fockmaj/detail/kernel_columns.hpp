#pragma once

#include <cstddef>
#include <vector>

// Per-column kernel math shared by the OpenMP builders and the serial
// reference implementation, so the two produce bitwise-identical kernels.

namespace fockmaj::detail {

// Binomial pmf C(k, n) p^n (1-p)^(k-n). Exact coefficient arithmetic for
// k <= 40 (products stay under 2^53), log-gamma form above.
double binomial_pmf(std::size_t k, std::size_t n, double p);

// Pure-loss column for input level k: values[n] = C(k,n) eta^n (1-eta)^(k-n),
// n = 0..k. The column is exactly normalized up to round-off; tail is zero.
std::vector<double> loss_column(double eta, std::size_t k);

struct AmpColumn {
    // values[n] = C(n+k, n) t^n (1-t)^(k+1), to be placed at output row n+k.
    std::vector<double> values;
    // Mass of the dropped terms beyond values.size(), summed until it
    // converges; always < the tail_eps the column was built with.
    double tail = 0.0;
};

// Amplifier column for input level k with t = 1 - 1/G. Grows until the
// remaining mass is provably below tail_eps, then sums the rest into
// `tail`. Throws CutoffOverflow if row k + values.size() would exceed
// max_rows.
AmpColumn amplifier_column(double gain, std::size_t k, double tail_eps,
                           std::size_t max_rows);

} // namespace fockmaj::detail
