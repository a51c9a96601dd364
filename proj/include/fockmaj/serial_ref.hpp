#pragma once

// Serial reference implementations of the OpenMP-parallel kernel paths.
// Kept deliberately simple (plain loops, no pragmas) so the parallel code
// can be validated against them; results must match bitwise.

#include "fockmaj/channels.hpp"
#include "fockmaj/fock.hpp"
#include "fockmaj/matrix.hpp"

namespace fockmaj::serial {

ChannelKernel loss_kernel(double transmittance, std::size_t input_cutoff,
                          const KernelBuildOptions& opts = {});

ChannelKernel amplifier_kernel(double gain, std::size_t input_cutoff,
                               const KernelBuildOptions& opts = {});

ChannelKernel realize(const ChannelSpec& spec, std::size_t input_cutoff,
                      const KernelBuildOptions& opts = {});

Matrix matmul(const Matrix& lhs, const Matrix& rhs);

FockDistribution apply(const ChannelKernel& kernel, const FockDistribution& rho,
                       const Tolerances& tol = kDefaultTol);

} // namespace fockmaj::serial
