#include "doctest.h"

#include <cstring>

#include "fockmaj/channels.hpp"
#include "fockmaj/fock.hpp"
#include "fockmaj/matrix.hpp"
#include "fockmaj/serial_ref.hpp"

using namespace fockmaj;

// The OpenMP builds must be bitwise identical to the serial reference:
// every element is produced by the same sequence of operations, threads
// only decide who computes which slot.

namespace {

bool same_bits(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols &&
           std::memcmp(a.data.data(), b.data.data(),
                       a.data.size() * sizeof(double)) == 0;
}

bool same_kernel(const ChannelKernel& a, const ChannelKernel& b) {
    return same_bits(a.matrix(), b.matrix()) && a.column_tails() == b.column_tails();
}

} // namespace

TEST_CASE("kernel builders match the serial reference bitwise") {
    for (const double eta : {0.0, 0.17, 0.5, 0.93, 1.0})
        CHECK(same_kernel(loss_kernel(eta, 48), serial::loss_kernel(eta, 48)));
    for (const double gain : {1.0, 1.25, 2.0, 3.7})
        CHECK(same_kernel(amplifier_kernel(gain, 32), serial::amplifier_kernel(gain, 32)));
}

TEST_CASE("composite realization matches the serial reference bitwise") {
    const auto spec = ChannelSpec::composite(
        {ChannelSpec::loss(0.6), ChannelSpec::amplifier(1.8), ChannelSpec::loss(0.9)});
    CHECK(same_kernel(realize(spec, 24), serial::realize(spec, 24)));
}

TEST_CASE("matmul matches the serial reference bitwise") {
    const auto a = amplifier_kernel(1.5, 20).matrix();
    const auto b = loss_kernel(0.7, 20).matrix();
    CHECK(same_bits(matmul(a, b), serial::matmul(a, b)));
}

TEST_CASE("apply matches the serial reference bitwise") {
    const auto ker = amplifier_kernel(2.0, 40);
    const auto th = thermal_distribution(ThermalSpec{1.2}, 40);
    const auto p = apply(ker, th);
    const auto s = serial::apply(ker, th);
    REQUIRE(p.size() == s.size());
    for (std::size_t n = 0; n < p.size(); ++n)
        CHECK(p.prob(n) == s.prob(n));
    CHECK(p.tail_mass() == s.tail_mass());
}
