#include "doctest.h"

#include <cmath>

#include "fockmaj/channels.hpp"
#include "fockmaj/errors.hpp"
#include "fockmaj/fock.hpp"

using namespace fockmaj;

namespace {
const KernelBuildOptions kTight{1e-15, 4096};
}

TEST_CASE("spec construction and labels") {
    CHECK_THROWS_AS(ChannelSpec::loss(-0.1), ParameterOutOfRange);
    CHECK_THROWS_AS(ChannelSpec::loss(1.2), ParameterOutOfRange);
    CHECK_THROWS_AS(ChannelSpec::amplifier(0.99), ParameterOutOfRange);
    CHECK_THROWS_AS(ChannelSpec::composite({}), ParameterOutOfRange);

    const auto spec =
        ChannelSpec::composite({ChannelSpec::loss(0.5), ChannelSpec::amplifier(2.0)});
    CHECK(spec.is_composite());
    // applied loss-first; "o" composes right to left
    CHECK(spec.describe() == "amp(2) o loss(0.5)");
    const auto leaves = spec.flatten();
    REQUIRE(leaves.size() == 2);
    CHECK(leaves[0].is_loss());
    CHECK(leaves[1].is_amplifier());

    // nested composites flatten in application order
    const auto nested = ChannelSpec::composite(
        {spec, ChannelSpec::loss(0.9)});
    CHECK(nested.flatten().size() == 3);
    CHECK(nested.describe() == "loss(0.9) o amp(2) o loss(0.5)");
}

TEST_CASE("loss kernel entries") {
    const auto ker = loss_kernel(0.5, 3);
    CHECK(ker.input_dim() == 4);
    CHECK(ker.output_dim() == 4);
    CHECK(ker.label() == "loss(0.5)");
    // column 1: (0.5, 0.5); column 2: (0.25, 0.5, 0.25)
    CHECK(ker.entry(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ker.entry(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ker.entry(0, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ker.entry(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ker.entry(2, 2) == doctest::Approx(0.25).epsilon(1e-15));
    // strictly lower triangular part above the diagonal is empty
    CHECK(ker.entry(3, 1) == 0.0);
    CHECK(ker.entry(2, 1) == 0.0);
    for (double t : ker.column_tails())
        CHECK(t == 0.0);

    // eta = 1 is the identity, eta = 0 sends everything to vacuum
    const auto id = loss_kernel(1.0, 2);
    const auto vac = loss_kernel(0.0, 2);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(id.entry(k, k) == 1.0);
        CHECK(vac.entry(0, k) == 1.0);
    }
}

TEST_CASE("amplifier kernel entries and adaptive rows") {
    const auto ker = amplifier_kernel(2.0, 2, kTight);
    CHECK(ker.label() == "amp(2)");
    // column 0 is thermal with nbar = G-1 = 1
    CHECK(ker.entry(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ker.entry(1, 0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ker.entry(2, 0) == doctest::Approx(0.125).epsilon(1e-14));
    // column 1 rows 1..3: (n+1) t^n (1-t)^2 at t = 1/2
    CHECK(ker.entry(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ker.entry(2, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ker.entry(3, 1) == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(ker.entry(0, 1) == 0.0); // an amplifier never removes photons
    CHECK(ker.entry(1, 2) == 0.0);

    // columns sum to 1 - tail with tail below the budget
    for (std::size_t k = 0; k < ker.input_dim(); ++k) {
        double sum = 0.0;
        for (std::size_t n = 0; n < ker.output_dim(); ++n)
            sum += ker.entry(n, k);
        CHECK(ker.column_tails()[k] < 1e-15);
        CHECK(sum + ker.column_tails()[k] == doctest::Approx(1.0).epsilon(1e-13));
    }

    // gain 1 is the identity with no growth
    const auto id = amplifier_kernel(1.0, 3);
    CHECK(id.output_dim() == 4);
    CHECK(id.entry(2, 2) == 1.0);

    // the hard cap trips when the budget needs too many rows
    CHECK_THROWS_AS(amplifier_kernel(100.0, 4, KernelBuildOptions{1e-10, 256}),
                    CutoffOverflow);
}

TEST_CASE("composition algebra") {
    SUBCASE("two losses compose to the product transmittance") {
        const auto two = compose({ChannelSpec::loss(0.8), ChannelSpec::loss(0.5)}, 12);
        const auto one = loss_kernel(0.4, 12);
        for (std::size_t k = 0; k <= 12; ++k)
            for (std::size_t n = 0; n <= 12; ++n)
                CHECK(two.entry(n, k) ==
                      doctest::Approx(one.entry(n, k)).epsilon(2e-13));
    }
    SUBCASE("identity stages collapse") {
        const auto ker =
            compose({ChannelSpec::loss(1.0), ChannelSpec::amplifier(1.0)}, 5);
        for (std::size_t k = 0; k <= 5; ++k)
            CHECK(ker.entry(k, k) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("loss then amplifier on vacuum gives a thermal column") {
        // amp(G) maps |0> to thermal nbar = G-1; the loss in front is idle
        const auto ker =
            compose({ChannelSpec::loss(0.7), ChannelSpec::amplifier(2.0)}, 3);
        for (std::size_t n = 0; n < 8; ++n)
            CHECK(ker.entry(n, 0) ==
                  doctest::Approx(std::pow(0.5, n + 1)).epsilon(1e-12));
    }
    SUBCASE("realize flattens single-stage composites") {
        const auto ker = realize(ChannelSpec::composite({ChannelSpec::loss(0.3)}), 4);
        CHECK(ker.label() == "loss(0.3)");
        CHECK(ker.spec().has_value());
        CHECK(ker.spec()->is_composite());
    }
}

TEST_CASE("apply maps moments as the channel dictates") {
    const auto rho = FockDistribution::fock(3, 3);

    SUBCASE("loss scales the mean by eta") {
        const auto out = apply(loss_kernel(0.6, 3), rho);
        CHECK(mean_photon_number(out) == doctest::Approx(1.8).epsilon(1e-13));
        CHECK(out.tail_mass() == 0.0);
    }
    SUBCASE("amplifier sends mean k to G k + G - 1") {
        const auto out = apply(amplifier_kernel(1.5, 3, kTight), rho);
        CHECK(mean_photon_number(out) == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(out.tail_mass() < 1e-12);
    }
    SUBCASE("thermal states are loss fixed points") {
        const auto th = thermal_distribution(ThermalSpec{2.0}, 160);
        const auto out = apply(loss_kernel(0.5, 160), th);
        const auto want = thermal_distribution(ThermalSpec{1.0}, 160);
        for (std::size_t n = 0; n <= 30; ++n)
            CHECK(out.prob(n) == doctest::Approx(want.prob(n)).epsilon(1e-11));
    }
    SUBCASE("input larger than the kernel is rejected") {
        CHECK_THROWS_AS(apply(loss_kernel(0.5, 2), rho), DimensionMismatch);
    }
}

TEST_CASE("kernel columns as states") {
    const auto ker = amplifier_kernel(2.0, 3, kTight);
    const auto col = kernel_column(ker, 1);
    const auto via_apply = apply(ker, FockDistribution::fock(1, 3));
    for (std::size_t n = 0; n < col.size(); ++n)
        CHECK(col.prob(n) == via_apply.prob(n));
    CHECK_THROWS_AS(kernel_column(ker, 9), DimensionMismatch);
}

TEST_CASE("dual kernel is the transpose") {
    const auto ker = loss_kernel(0.3, 4);
    const auto dual = dual_kernel(ker);
    CHECK(dual.rows == ker.input_dim());
    CHECK(dual.cols == ker.output_dim());
    for (std::size_t n = 0; n < dual.rows; ++n)
        for (std::size_t k = 0; k < dual.cols; ++k)
            CHECK(dual.at(n, k) == ker.entry(k, n));
}
