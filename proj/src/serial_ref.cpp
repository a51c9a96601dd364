#include "fockmaj/serial_ref.hpp"

#include <algorithm>

#include "fockmaj/detail/kernel_columns.hpp"
#include "fockmaj/errors.hpp"

// Mirrors the OpenMP builders loop for loop. Per-column and per-element
// arithmetic lives in detail::, so any divergence here is an ordering bug
// in the parallel code, which is exactly what the comparison tests hunt.

namespace fockmaj::serial {

ChannelKernel loss_kernel(double transmittance, std::size_t input_cutoff,
                          const KernelBuildOptions& opts) {
    if (!(transmittance >= 0.0 && transmittance <= 1.0))
        throw ParameterOutOfRange("loss: transmittance must lie in [0, 1]");
    if (!(opts.tail_eps > 0.0) || opts.max_output_dim == 0)
        throw ParameterOutOfRange("kernel build: bad options");
    if (input_cutoff >= opts.max_output_dim)
        throw CutoffOverflow("loss_kernel: input cutoff exceeds the hard cap");
    const std::size_t dim = input_cutoff + 1;
    Matrix m(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const std::vector<double> col = detail::loss_column(transmittance, k);
        for (std::size_t n = 0; n <= k; ++n)
            m.at(n, k) = col[n];
    }
    ChannelSpec spec = ChannelSpec::loss(transmittance);
    std::string label = spec.describe();
    return ChannelKernel(std::move(m), std::vector<double>(dim, 0.0), std::move(label),
                         std::move(spec));
}

ChannelKernel amplifier_kernel(double gain, std::size_t input_cutoff,
                               const KernelBuildOptions& opts) {
    if (!(gain >= 1.0))
        throw ParameterOutOfRange("amplifier: gain must be >= 1");
    if (!(opts.tail_eps > 0.0) || opts.max_output_dim == 0)
        throw ParameterOutOfRange("kernel build: bad options");
    std::vector<detail::AmpColumn> cols(input_cutoff + 1);
    std::size_t rows = 0;
    for (std::size_t k = 0; k <= input_cutoff; ++k) {
        cols[k] = detail::amplifier_column(gain, k, opts.tail_eps, opts.max_output_dim);
        rows = std::max(rows, k + cols[k].values.size());
    }
    Matrix m(rows, input_cutoff + 1);
    std::vector<double> tails(input_cutoff + 1);
    for (std::size_t k = 0; k <= input_cutoff; ++k) {
        for (std::size_t n = 0; n < cols[k].values.size(); ++n)
            m.at(n + k, k) = cols[k].values[n];
        tails[k] = cols[k].tail;
    }
    ChannelSpec spec = ChannelSpec::amplifier(gain);
    std::string label = spec.describe();
    return ChannelKernel(std::move(m), std::move(tails), std::move(label),
                         std::move(spec));
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols != rhs.rows)
        throw DimensionMismatch("matmul: inner dimensions differ");
    Matrix out(lhs.rows, rhs.cols);
    for (std::size_t r = 0; r < lhs.rows; ++r) {
        for (std::size_t k = 0; k < lhs.cols; ++k) {
            const double v = lhs.at(r, k);
            if (v == 0.0)
                continue;
            for (std::size_t j = 0; j < rhs.cols; ++j)
                out.at(r, j) += v * rhs.at(k, j);
        }
    }
    return out;
}

ChannelKernel realize(const ChannelSpec& spec, std::size_t input_cutoff,
                      const KernelBuildOptions& opts) {
    if (const auto* l = std::get_if<PureLoss>(&spec.node()))
        return serial::loss_kernel(l->transmittance, input_cutoff, opts);
    if (const auto* a = std::get_if<Amplifier>(&spec.node()))
        return serial::amplifier_kernel(a->gain, input_cutoff, opts);

    const std::vector<ChannelSpec> leaves = spec.flatten();
    if (leaves.size() == 1) {
        ChannelKernel k = serial::realize(leaves[0], input_cutoff, opts);
        return ChannelKernel(k.matrix(), k.column_tails(), spec.describe(), spec);
    }
    KernelBuildOptions stage_opts = opts;
    std::size_t amps = 0;
    for (const ChannelSpec& leaf : leaves)
        amps += leaf.is_amplifier() ? 1 : 0;
    if (amps > 0)
        stage_opts.tail_eps =
            std::min(1e-15, opts.tail_eps / static_cast<double>(amps));

    ChannelKernel kernel = serial::realize(leaves[0], input_cutoff, stage_opts);
    for (std::size_t i = 1; i < leaves.size(); ++i) {
        ChannelKernel next =
            serial::realize(leaves[i], kernel.output_dim() - 1, stage_opts);
        Matrix m = serial::matmul(next.matrix(), kernel.matrix());
        std::vector<double> tails(kernel.input_dim());
        for (std::size_t k = 0; k < kernel.input_dim(); ++k) {
            double t = kernel.column_tails()[k];
            for (std::size_t j = 0; j < next.input_dim(); ++j)
                t += next.column_tails()[j] * kernel.entry(j, k);
            tails[k] = t;
        }
        kernel = ChannelKernel(std::move(m), std::move(tails), spec.describe(), spec);
    }
    return kernel;
}

FockDistribution apply(const ChannelKernel& kernel, const FockDistribution& rho,
                       const Tolerances& tol) {
    if (rho.size() > kernel.input_dim())
        throw DimensionMismatch("apply: state has more levels than the kernel accepts");
    const auto p = rho.probs();
    std::vector<double> out(kernel.output_dim(), 0.0);
    for (std::size_t n = 0; n < out.size(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k)
            acc += kernel.entry(n, k) * p[k];
        out[n] = acc;
    }
    double tail = rho.tail_mass();
    for (std::size_t k = 0; k < p.size(); ++k)
        tail += kernel.column_tails()[k] * p[k];
    return FockDistribution(std::move(out), tail, tol);
}

} // namespace fockmaj::serial
