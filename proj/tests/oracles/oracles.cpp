#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace oracle {

std::vector<double> loss_column_beam_splitter(double eta, std::size_t k) {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("loss_column_beam_splitter: eta outside [0,1]");
    const double sa = std::sqrt(eta);
    const double sb = std::sqrt(1.0 - eta);
    // amp[j] is the amplitude of |j, m-j> after m applications of the
    // combined creation operator, renormalized by sqrt(m) each step so the
    // state stays normalized throughout.
    std::vector<double> amp{1.0};
    for (std::size_t m = 1; m <= k; ++m) {
        std::vector<double> next(m + 1, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            next[j + 1] += sa * std::sqrt(static_cast<double>(j + 1)) * amp[j];
            next[j] += sb * std::sqrt(static_cast<double>(m - j)) * amp[j];
        }
        const double norm = std::sqrt(static_cast<double>(m));
        for (double& a : next)
            a /= norm;
        amp = std::move(next);
    }
    std::vector<double> probs(k + 1);
    for (std::size_t n = 0; n <= k; ++n)
        probs[n] = amp[n] * amp[n];
    return probs;
}

std::vector<double> amplifier_column_squeezer(double gain, std::size_t k,
                                              std::size_t rows) {
    if (!(gain >= 1.0) || !std::isfinite(gain))
        throw std::invalid_argument("amplifier_column_squeezer: gain must be >= 1");
    if (rows == 0)
        return {};
    const double t = 1.0 - 1.0 / gain;
    std::vector<double> probs(rows, 0.0);
    if (t == 0.0) {
        probs[0] = 1.0;
        return probs;
    }
    const double r = std::atanh(std::sqrt(t));
    // Basis v_n = |k+n, n>. The squeezing generator a+b+ - ab is real
    // antisymmetric tridiagonal with c_n = sqrt((k+n+1)(n+1)); the gauge
    // diag(i^n) turns it into a real symmetric tridiagonal matrix S, so
    // exp(r A) e_0 comes out of one real eigensolve. The truncation wall
    // sits far enough out that reflected amplitude cannot reach the
    // requested rows at the 1e-13 level.
    const std::size_t wall =
        static_cast<std::size_t>(62.0 / std::log(1.0 / t)) + 8;
    const std::size_t dim = k + std::max(2 * rows, wall);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n + 1 < dim; ++n) {
        const double c = std::sqrt(static_cast<double>(k + n + 1) *
                                   static_cast<double>(n + 1));
        s(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n)) = c;
        s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n + 1)) = c;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("amplifier_column_squeezer: eigensolve failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    for (std::size_t n = 0; n < rows && n < dim; ++n) {
        std::complex<double> a(0.0, 0.0);
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(dim); ++j)
            a += v(static_cast<Eigen::Index>(n), j) *
                 std::polar(1.0, r * lam(j)) * v(0, j);
        probs[n] = std::norm(a);
    }
    return probs;
}

Rational rational_from_double(double x, std::int64_t max_denominator) {
    if (!std::isfinite(x))
        throw std::invalid_argument("rational_from_double: not finite");
    const bool neg = x < 0.0;
    double y = std::abs(x);
    // Continued-fraction convergents p/q of y.
    std::int64_t p_prev = 0, q_prev = 1, p = 1, q = 0;
    double frac = y;
    for (int iter = 0; iter < 64; ++iter) {
        const double fl = std::floor(frac);
        if (fl > 9e17)
            break;
        const auto a = static_cast<std::int64_t>(fl);
        const std::int64_t p_next = a * p + p_prev;
        const std::int64_t q_next = a * q + q_prev;
        if (q_next > max_denominator)
            break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        const double approx = static_cast<double>(p) / static_cast<double>(q);
        if (std::abs(y - approx) <= 1e-15 * std::max(1.0, y))
            return Rational(neg ? -p : p, q);
        const double rem = frac - fl;
        if (rem <= 0.0)
            break;
        frac = 1.0 / rem;
    }
    throw std::invalid_argument(
        "rational_from_double: no small-denominator rational within 1e-15");
}

Rational exact_rational_of(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("exact_rational_of: not finite");
    return Rational(x); // exact: doubles are dyadic rationals
}

Rational binomial_exact(std::size_t k, std::size_t n) {
    if (n > k)
        return 0;
    boost::multiprecision::cpp_int c = 1;
    const std::size_t m = std::min(n, k - n);
    for (std::size_t i = 1; i <= m; ++i) {
        c *= static_cast<unsigned long>(k - m + i);
        c /= static_cast<unsigned long>(i);
    }
    return Rational(c);
}

namespace {

Rational rpow(const Rational& base, std::size_t e) {
    Rational out = 1;
    for (std::size_t i = 0; i < e; ++i)
        out *= base;
    return out;
}

} // namespace

Rational loss_entry_exact(const Rational& eta, std::size_t n, std::size_t k) {
    if (n > k)
        return 0;
    return binomial_exact(k, n) * rpow(eta, n) * rpow(1 - eta, k - n);
}

Rational amplifier_entry_exact(const Rational& gain, std::size_t row, std::size_t k) {
    if (row < k)
        return 0;
    const Rational t = 1 - Rational(1) / gain;
    return binomial_exact(row, k) * rpow(t, row - k) * rpow(1 - t, k + 1);
}

bool loss_identity_exact(const Rational& eta, std::size_t k, std::size_t n_max) {
    Rational lhs = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        lhs += loss_entry_exact(eta, n, k) - loss_entry_exact(eta, n, k + 1);
        if (lhs != eta * loss_entry_exact(eta, n, k))
            return false;
    }
    return true;
}

bool amplifier_identity_exact(const Rational& gain, std::size_t k, std::size_t n_max) {
    Rational lhs = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        lhs += amplifier_entry_exact(gain, n + k, k) -
               amplifier_entry_exact(gain, n + k + 1, k + 1);
        if (lhs != (gain - 1) * amplifier_entry_exact(gain, n + k + 1, k + 1))
            return false;
    }
    return true;
}

} // namespace oracle
