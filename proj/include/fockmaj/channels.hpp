#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fockmaj/fock.hpp"
#include "fockmaj/matrix.hpp"
#include "fockmaj/tolerances.hpp"

namespace fockmaj {

struct PureLoss {
    double transmittance; // eta in [0, 1]
};

struct Amplifier {
    double gain; // G >= 1
};

/// Description of a phase-insensitive Gaussian channel acting on
/// Fock-diagonal states: a pure-loss stage, a quantum-limited amplifier
/// stage, or an ordered composite of such specs. Stages of a composite
/// are applied in list order (stages()[0] acts first).
class ChannelSpec {
public:
    using Composite = std::vector<ChannelSpec>;
    using Node = std::variant<PureLoss, Amplifier, Composite>;

    static ChannelSpec loss(double transmittance);
    static ChannelSpec amplifier(double gain);
    static ChannelSpec composite(std::vector<ChannelSpec> stages);

    const Node& node() const { return node_; }
    bool is_loss() const { return std::holds_alternative<PureLoss>(node_); }
    bool is_amplifier() const { return std::holds_alternative<Amplifier>(node_); }
    bool is_composite() const { return std::holds_alternative<Composite>(node_); }

    /// Leaf stages in application order, composites flattened recursively.
    std::vector<ChannelSpec> flatten() const;

    /// Human-readable label, e.g. "amp(2) o loss(0.5)" for a composite
    /// that applies the loss first ("o" composes right to left).
    std::string describe() const;

private:
    explicit ChannelSpec(Node n) : node_(std::move(n)) {}
    Node node_;
};

/// Column-stochastic transition matrix of a channel restricted to the
/// photon-number basis. entry(n, k) is the probability of output level n
/// given input level k. Each column sums to 1 - column_tails()[k], where
/// the tail is the mass pushed above the stored rows (always below the
/// tail bound the kernel was built with).
class ChannelKernel {
public:
    ChannelKernel(Matrix matrix, std::vector<double> column_tails, std::string label,
                  std::optional<ChannelSpec> spec = std::nullopt);

    std::size_t output_dim() const { return matrix_.rows; }
    std::size_t input_dim() const { return matrix_.cols; }
    double entry(std::size_t n, std::size_t k) const { return matrix_.at(n, k); }
    const Matrix& matrix() const { return matrix_; }
    const std::vector<double>& column_tails() const { return column_tails_; }
    const std::string& label() const { return label_; }
    /// Structured description when the kernel came from a ChannelSpec.
    const std::optional<ChannelSpec>& spec() const { return spec_; }

private:
    Matrix matrix_;
    std::vector<double> column_tails_;
    std::string label_;
    std::optional<ChannelSpec> spec_;
};

struct KernelBuildOptions {
    /// Per-column bound on the untracked output mass.
    double tail_eps = kDefaultTol.tail;
    /// Hard cap on the adaptively grown output dimension; exceeding it
    /// throws CutoffOverflow.
    std::size_t max_output_dim = 4096;
};

/// Pure-loss kernel on inputs |0..input_cutoff>. Lower triangular:
/// entry(n, k) = C(k, n) eta^n (1-eta)^(k-n), exact zero tail.
ChannelKernel loss_kernel(double transmittance, std::size_t input_cutoff,
                          const KernelBuildOptions& opts = {});

/// Quantum-limited amplifier kernel. Column k holds
/// entry(n+k, k) = C(n+k, n) t^n (1-t)^(k+1) with t = 1 - 1/G; rows grow
/// until every column's remaining mass is below opts.tail_eps.
ChannelKernel amplifier_kernel(double gain, std::size_t input_cutoff,
                               const KernelBuildOptions& opts = {});

/// Kernel of an arbitrary spec. Composites are realized stage by stage
/// and multiplied together; amplifier stages inside a composite use a
/// tail budget far below opts.tail_eps so that accumulated truncation
/// stays orders of magnitude under the comparison tolerance.
ChannelKernel realize(const ChannelSpec& spec, std::size_t input_cutoff,
                      const KernelBuildOptions& opts = {});

/// Convenience: realize the composite of `stages` applied in list order.
ChannelKernel compose(const std::vector<ChannelSpec>& stages, std::size_t input_cutoff,
                      const KernelBuildOptions& opts = {});

/// Transpose of the kernel matrix. Rows of the kernel become the
/// "columns" this map acts with; it is generally not column-stochastic,
/// so it is returned as a plain matrix rather than a ChannelKernel.
Matrix dual_kernel(const ChannelKernel& kernel);

/// Push a distribution through the kernel. Requires rho.size() <=
/// input_dim(); the output tail combines the input tail with the mass the
/// kernel itself truncates.
FockDistribution apply(const ChannelKernel& kernel, const FockDistribution& rho,
                       const Tolerances& tol = kDefaultTol);

/// Column k of the kernel viewed as the output state for input |k>.
FockDistribution kernel_column(const ChannelKernel& kernel, std::size_t k,
                               const Tolerances& tol = kDefaultTol);

} // namespace fockmaj
