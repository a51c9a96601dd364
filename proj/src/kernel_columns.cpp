#include "fockmaj/detail/kernel_columns.hpp"

#include <algorithm>
#include <cmath>

#include "fockmaj/errors.hpp"

namespace fockmaj::detail {

double binomial_pmf(std::size_t k, std::size_t n, double p) {
    if (n > k)
        return 0.0;
    if (p <= 0.0)
        return n == 0 ? 1.0 : 0.0;
    if (p >= 1.0)
        return n == k ? 1.0 : 0.0;
    if (k <= 40) {
        // C(k, n) by the symmetric multiplicative rule; every prefix
        // product is an integer below 2^53, so the coefficient is exact.
        const std::size_t m = std::min(n, k - n);
        double c = 1.0;
        for (std::size_t i = 1; i <= m; ++i) {
            c *= static_cast<double>(k - m + i);
            c /= static_cast<double>(i);
        }
        return c * std::pow(p, static_cast<double>(n)) *
               std::pow(1.0 - p, static_cast<double>(k - n));
    }
    const double lg = std::lgamma(static_cast<double>(k) + 1.0) -
                      std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(k - n) + 1.0);
    return std::exp(lg + static_cast<double>(n) * std::log(p) +
                    static_cast<double>(k - n) * std::log1p(-p));
}

std::vector<double> loss_column(double eta, std::size_t k) {
    std::vector<double> col(k + 1);
    for (std::size_t n = 0; n <= k; ++n)
        col[n] = binomial_pmf(k, n, eta);
    return col;
}

AmpColumn amplifier_column(double gain, std::size_t k, double tail_eps,
                           std::size_t max_rows) {
    AmpColumn out;
    if (k >= max_rows)
        throw CutoffOverflow("amplifier_column: input level already exceeds the hard cap");
    if (gain == 1.0) {
        out.values = {1.0};
        return out;
    }
    const double t = 1.0 - 1.0 / gain;
    // s_0 = (1-t)^(k+1), s_{n+1} = s_n * t * (n+k+1) / (n+1).
    // The term ratio decreases toward t < 1, so once it drops below 1 the
    // remaining mass is bounded by the next term times a geometric factor.
    double s = std::pow(1.0 / gain, static_cast<double>(k + 1));
    std::size_t n = 0;
    while (true) {
        if (k + n >= max_rows)
            throw CutoffOverflow("amplifier_column: output cutoff exceeds the hard cap");
        out.values.push_back(s);
        const double next =
            s * t * static_cast<double>(n + k + 1) / static_cast<double>(n + 1);
        const double next_ratio =
            t * static_cast<double>(n + k + 2) / static_cast<double>(n + 2);
        if (next_ratio < 1.0 && next / (1.0 - next_ratio) < tail_eps) {
            s = next;
            ++n;
            break;
        }
        s = next;
        ++n;
    }
    // Sum the dropped terms until they stop mattering; the bound above
    // guarantees the total stays below tail_eps.
    double tail = 0.0;
    for (std::size_t guard = 0; guard < 1000000; ++guard) {
        tail += s;
        const double ratio =
            t * static_cast<double>(n + k + 1) / static_cast<double>(n + 1);
        s *= ratio;
        ++n;
        if (ratio < 1.0 && s / (1.0 - ratio) <= tail * 1e-15)
            break;
    }
    out.tail = tail;
    return out;
}

} // namespace fockmaj::detail
