#include "fockmaj/channels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "fockmaj/detail/error_collector.hpp"
#include "fockmaj/detail/kernel_columns.hpp"
#include "fockmaj/errors.hpp"

namespace fockmaj {

namespace {

std::string param_string(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void check_loss_param(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ParameterOutOfRange("loss: transmittance must lie in [0, 1]");
}

void check_amp_param(double gain) {
    if (!(gain >= 1.0) || !std::isfinite(gain))
        throw ParameterOutOfRange("amplifier: gain must be finite and >= 1");
}

} // namespace

ChannelSpec ChannelSpec::loss(double transmittance) {
    check_loss_param(transmittance);
    return ChannelSpec(PureLoss{transmittance});
}

ChannelSpec ChannelSpec::amplifier(double gain) {
    check_amp_param(gain);
    return ChannelSpec(Amplifier{gain});
}

ChannelSpec ChannelSpec::composite(std::vector<ChannelSpec> stages) {
    if (stages.empty())
        throw ParameterOutOfRange("composite: needs at least one stage");
    return ChannelSpec(Composite{std::move(stages)});
}

std::vector<ChannelSpec> ChannelSpec::flatten() const {
    if (!is_composite())
        return {*this};
    std::vector<ChannelSpec> leaves;
    for (const ChannelSpec& stage : std::get<Composite>(node_))
        for (ChannelSpec& leaf : stage.flatten())
            leaves.push_back(std::move(leaf));
    return leaves;
}

std::string ChannelSpec::describe() const {
    if (const auto* l = std::get_if<PureLoss>(&node_))
        return "loss(" + param_string(l->transmittance) + ")";
    if (const auto* a = std::get_if<Amplifier>(&node_))
        return "amp(" + param_string(a->gain) + ")";
    const std::vector<ChannelSpec> leaves = flatten();
    std::string out;
    for (std::size_t i = leaves.size(); i-- > 0;) {
        out += leaves[i].describe();
        if (i != 0)
            out += " o ";
    }
    return out;
}

ChannelKernel::ChannelKernel(Matrix matrix, std::vector<double> column_tails,
                             std::string label, std::optional<ChannelSpec> spec)
    : matrix_(std::move(matrix)), column_tails_(std::move(column_tails)),
      label_(std::move(label)), spec_(std::move(spec)) {
    if (matrix_.rows == 0 || matrix_.cols == 0)
        throw DimensionMismatch("ChannelKernel: empty matrix");
    if (column_tails_.size() != matrix_.cols)
        throw DimensionMismatch("ChannelKernel: one tail per column required");
    for (double t : column_tails_)
        if (!(t >= 0.0) || !std::isfinite(t))
            throw ParameterOutOfRange("ChannelKernel: column tails must be finite and >= 0");
}

namespace {

void check_build_options(const KernelBuildOptions& opts) {
    if (!(opts.tail_eps > 0.0))
        throw ParameterOutOfRange("kernel build: tail_eps must be positive");
    if (opts.max_output_dim == 0)
        throw ParameterOutOfRange("kernel build: max_output_dim must be positive");
}

Matrix loss_matrix(double eta, std::size_t input_cutoff) {
    const std::size_t dim = input_cutoff + 1;
    Matrix m(dim, dim);
    detail::ErrorCollector errs;
    const std::int64_t cols = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t kk = 0; kk < cols; ++kk)
        errs.guard([&m, eta, kk] {
            const std::size_t k = static_cast<std::size_t>(kk);
            const std::vector<double> col = detail::loss_column(eta, k);
            for (std::size_t n = 0; n <= k; ++n)
                m.at(n, k) = col[n];
        });
    errs.rethrow();
    return m;
}

struct AmpColumns {
    std::vector<detail::AmpColumn> cols;
    std::size_t rows = 0;
};

AmpColumns amplifier_columns(double gain, std::size_t input_cutoff,
                             const KernelBuildOptions& opts) {
    AmpColumns out;
    out.cols.resize(input_cutoff + 1);
    detail::ErrorCollector errs;
    const std::int64_t cols = static_cast<std::int64_t>(input_cutoff + 1);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t kk = 0; kk < cols; ++kk)
        errs.guard([&out, gain, &opts, kk] {
            const std::size_t k = static_cast<std::size_t>(kk);
            out.cols[k] = detail::amplifier_column(gain, k, opts.tail_eps,
                                                   opts.max_output_dim);
        });
    errs.rethrow();
    for (std::size_t k = 0; k < out.cols.size(); ++k)
        out.rows = std::max(out.rows, k + out.cols[k].values.size());
    return out;
}

ChannelKernel assemble_amplifier(double gain, std::size_t input_cutoff,
                                 const KernelBuildOptions& opts, std::string label,
                                 std::optional<ChannelSpec> spec) {
    AmpColumns built = amplifier_columns(gain, input_cutoff, opts);
    Matrix m(built.rows, input_cutoff + 1);
    std::vector<double> tails(input_cutoff + 1);
    for (std::size_t k = 0; k <= input_cutoff; ++k) {
        const detail::AmpColumn& col = built.cols[k];
        for (std::size_t n = 0; n < col.values.size(); ++n)
            m.at(n + k, k) = col.values[n];
        tails[k] = col.tail;
    }
    return ChannelKernel(std::move(m), std::move(tails), std::move(label),
                         std::move(spec));
}

// Product kernel next(prev(.)). The tail of a product column collects the
// mass prev already dropped plus next's truncation weighted by whatever
// mass reaches each of next's input levels.
ChannelKernel multiply_kernels(const ChannelKernel& next, const ChannelKernel& prev,
                               std::string label, std::optional<ChannelSpec> spec) {
    if (next.input_dim() != prev.output_dim())
        throw DimensionMismatch("multiply_kernels: stage dimensions do not line up");
    Matrix m = matmul(next.matrix(), prev.matrix());
    std::vector<double> tails(prev.input_dim());
    for (std::size_t k = 0; k < prev.input_dim(); ++k) {
        double t = prev.column_tails()[k];
        for (std::size_t j = 0; j < next.input_dim(); ++j)
            t += next.column_tails()[j] * prev.entry(j, k);
        tails[k] = t;
    }
    return ChannelKernel(std::move(m), std::move(tails), std::move(label),
                         std::move(spec));
}

std::size_t count_amplifiers(const std::vector<ChannelSpec>& leaves) {
    std::size_t n = 0;
    for (const ChannelSpec& leaf : leaves)
        n += leaf.is_amplifier() ? 1 : 0;
    return n;
}

} // namespace

ChannelKernel loss_kernel(double transmittance, std::size_t input_cutoff,
                          const KernelBuildOptions& opts) {
    check_loss_param(transmittance);
    check_build_options(opts);
    if (input_cutoff >= opts.max_output_dim)
        throw CutoffOverflow("loss_kernel: input cutoff exceeds the hard cap");
    ChannelSpec spec = ChannelSpec::loss(transmittance);
    std::string label = spec.describe();
    return ChannelKernel(loss_matrix(transmittance, input_cutoff),
                         std::vector<double>(input_cutoff + 1, 0.0), std::move(label),
                         std::move(spec));
}

ChannelKernel amplifier_kernel(double gain, std::size_t input_cutoff,
                               const KernelBuildOptions& opts) {
    check_amp_param(gain);
    check_build_options(opts);
    ChannelSpec spec = ChannelSpec::amplifier(gain);
    std::string label = spec.describe();
    return assemble_amplifier(gain, input_cutoff, opts, std::move(label),
                              std::move(spec));
}

ChannelKernel realize(const ChannelSpec& spec, std::size_t input_cutoff,
                      const KernelBuildOptions& opts) {
    check_build_options(opts);
    if (const auto* l = std::get_if<PureLoss>(&spec.node()))
        return loss_kernel(l->transmittance, input_cutoff, opts);
    if (const auto* a = std::get_if<Amplifier>(&spec.node()))
        return amplifier_kernel(a->gain, input_cutoff, opts);

    const std::vector<ChannelSpec> leaves = spec.flatten();
    if (leaves.size() == 1) {
        ChannelKernel k = realize(leaves[0], input_cutoff, opts);
        return ChannelKernel(k.matrix(), k.column_tails(), spec.describe(), spec);
    }
    // Stage truncation error compounds through the product, and partial-sum
    // checks downstream run at eps_cmp resolution, so each amplifier stage
    // gets a budget far below both tail_eps and eps_cmp.
    KernelBuildOptions stage_opts = opts;
    const std::size_t amps = count_amplifiers(leaves);
    if (amps > 0)
        stage_opts.tail_eps =
            std::min(1e-15, opts.tail_eps / static_cast<double>(amps));

    ChannelKernel kernel = realize(leaves[0], input_cutoff, stage_opts);
    for (std::size_t i = 1; i < leaves.size(); ++i) {
        ChannelKernel next = realize(leaves[i], kernel.output_dim() - 1, stage_opts);
        kernel = multiply_kernels(next, kernel, spec.describe(), spec);
    }
    return kernel;
}

ChannelKernel compose(const std::vector<ChannelSpec>& stages, std::size_t input_cutoff,
                      const KernelBuildOptions& opts) {
    return realize(ChannelSpec::composite(stages), input_cutoff, opts);
}

Matrix dual_kernel(const ChannelKernel& kernel) { return transpose(kernel.matrix()); }

FockDistribution apply(const ChannelKernel& kernel, const FockDistribution& rho,
                       const Tolerances& tol) {
    if (rho.size() > kernel.input_dim())
        throw DimensionMismatch("apply: state has more levels than the kernel accepts");
    const std::size_t rows = kernel.output_dim();
    std::vector<double> out(rows, 0.0);
    const std::int64_t rows64 = static_cast<std::int64_t>(rows);
    const auto p = rho.probs();
#pragma omp parallel for schedule(static)
    for (std::int64_t nn = 0; nn < rows64; ++nn) {
        const std::size_t n = static_cast<std::size_t>(nn);
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

FockDistribution kernel_column(const ChannelKernel& kernel, std::size_t k,
                               const Tolerances& tol) {
    if (k >= kernel.input_dim())
        throw DimensionMismatch("kernel_column: column index out of range");
    std::vector<double> col(kernel.output_dim());
    for (std::size_t n = 0; n < col.size(); ++n)
        col[n] = kernel.entry(n, k);
    return FockDistribution(std::move(col), kernel.column_tails()[k], tol);
}

} // namespace fockmaj
