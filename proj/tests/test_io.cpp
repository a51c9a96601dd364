#include "doctest.h"

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "fockmaj/channels.hpp"
#include "fockmaj/io.hpp"
#include "fockmaj/majorization.hpp"
#include "fockmaj/sampling.hpp"
#include "fockmaj/verifiers.hpp"

using namespace fockmaj;

namespace {

double reparse(const std::string& s) {
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

} // namespace

TEST_CASE("format_double round-trips exactly") {
    for (const double x : {0.1, 1.0 / 3.0, 1e-300, 0.0, 1.0, -2.5e-10, 0.9999999999999999,
                           5e-324, 1.7976931348623157e308}) {
        CHECK(reparse(io::format_double(x)) == x);
        CHECK(reparse(io::format_double(-x)) == -x);
    }
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("distribution json round-trip") {
    const auto th = thermal_distribution(ThermalSpec{0.7}, 6);
    const auto back = io::distribution_from_json(io::to_json(th));
    REQUIRE(back.size() == th.size());
    for (std::size_t n = 0; n < th.size(); ++n)
        CHECK(back.prob(n) == th.prob(n)); // exact through shortest-form text
    CHECK(back.tail_mass() == th.tail_mass());

    CHECK_THROWS_AS(io::distribution_from_json("{\"no_probs\":[]}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::distribution_from_json("not json at all"),
                    std::invalid_argument);
}

TEST_CASE("distribution csv round-trip reconstructs the tail") {
    const auto th = thermal_distribution(ThermalSpec{0.9}, 5);
    const auto back = io::distribution_from_csv(io::to_csv(th));
    for (std::size_t n = 0; n < th.size(); ++n)
        CHECK(back.prob(n) == th.prob(n));
    CHECK(back.tail_mass() == doctest::Approx(th.tail_mass()).epsilon(1e-13));

    // headerless, no index column
    const auto bare = io::distribution_from_csv("0.5\n0.25\n0.25\n");
    CHECK(bare.size() == 3);
    CHECK(bare.prob(1) == 0.25);
}

TEST_CASE("curve csv round-trip") {
    const auto curve =
        partial_sums(FockDistribution({0.5, 0.3, 0.2}), CurveMode::FockOrder);
    const auto back = io::curve_from_csv(io::to_csv(curve), CurveMode::FockOrder);
    REQUIRE(back.sums.size() == curve.sums.size());
    for (std::size_t i = 0; i < curve.sums.size(); ++i)
        CHECK(back.sums[i] == curve.sums[i]);
}

TEST_CASE("kernel serialization keeps the spec when there is one") {
    const auto ker = realize(ChannelSpec::amplifier(1.5), 3, {1e-12, 4096});
    const auto back = io::kernel_from_json(io::to_json(ker));
    CHECK(back.output_dim() == ker.output_dim());
    CHECK(back.input_dim() == ker.input_dim());
    REQUIRE(back.spec().has_value());
    CHECK(back.spec()->is_amplifier());
    CHECK(back.label() == ker.label());
    for (std::size_t n = 0; n < ker.output_dim(); ++n)
        for (std::size_t k = 0; k < ker.input_dim(); ++k)
            CHECK(back.entry(n, k) == ker.entry(n, k));
    for (std::size_t k = 0; k < ker.input_dim(); ++k)
        CHECK(back.column_tails()[k] == ker.column_tails()[k]);

    // hand-built kernels round-trip as custom
    const auto swap = make_column_swap_kernel(4);
    const auto back2 = io::kernel_from_json(io::to_json(swap));
    CHECK_FALSE(back2.spec().has_value());
    CHECK(back2.label() == swap.label());
    CHECK(back2.entry(0, 1) == 1.0);

    const auto csv = io::kernel_from_csv(io::to_csv(ker));
    CHECK(csv.input_dim() == ker.input_dim());
    // reconstructed tails only match up to the float error of the column sum
    for (std::size_t k = 0; k < ker.input_dim(); ++k)
        CHECK(std::abs(csv.column_tails()[k] - ker.column_tails()[k]) <= 1e-13);
}

TEST_CASE("report json key order is pinned") {
    ScanReport rep;
    rep.name = "demo";
    rep.channel = "loss(0.5)";
    rep.trials = 3;
    rep.violations = 1;
    rep.worst_margin = 0.25;
    rep.metrics = {{"alpha", 1.5}};
    rep.flags = {"some-flag"};
    Witness w;
    w.label = "w0";
    w.values = {{"index", 2.0}};
    w.states = {{"state", FockDistribution({1.0})}};
    rep.witnesses.push_back(w);

    const std::string j = io::to_json(rep);
    const char* order[] = {"\"name\"",   "\"channel\"", "\"trials\"",
                           "\"violations\"", "\"worst_margin\"", "\"metrics\"",
                           "\"flags\"",  "\"config\"",  "\"cutoff\"",
                           "\"eps_cmp\"", "\"eps_norm\"", "\"tail_eps\"",
                           "\"seed\"",   "\"witnesses\""};
    std::size_t pos = 0;
    for (const char* key : order) {
        const auto found = j.find(key, pos);
        REQUIRE_MESSAGE(found != std::string::npos, key);
        pos = found;
    }
    // parses as valid json via the reader
    CHECK_NOTHROW(io::distribution_from_json(
        io::to_json(FockDistribution({0.5, 0.5}))));
}

TEST_CASE("comparison outcome json") {
    const auto oc = compare_fock_majorization(FockDistribution({0.5, 0.0, 0.5}),
                                              FockDistribution({0.4, 0.3, 0.3}));
    const std::string j = io::to_json(oc);
    CHECK(j.find("\"verdict\":\"incomparable\"") != std::string::npos);
    CHECK(j.find("\"witness_up\":0") != std::string::npos);
    CHECK(j.find("\"witness_down\":1") != std::string::npos);

    const auto eq = compare_fock_majorization(FockDistribution({1.0}),
                                              FockDistribution({1.0}));
    const std::string je = io::to_json(eq);
    CHECK(je.find("\"witness_up\":null") != std::string::npos);
    CHECK(je.find("\"witness_down\":null") != std::string::npos);
}

TEST_CASE("file io") {
    const std::string path = "/tmp/fockmaj_io_test.json";
    io::write_file(path, "{\"probs\":[1],\"tail_mass\":0}");
    const auto rho = io::distribution_from_json(io::read_file(path));
    CHECK(rho.prob(0) == 1.0);
    std::remove(path.c_str());
    CHECK_THROWS_AS(io::read_file("/nonexistent/definitely/missing.json"),
                    std::invalid_argument);
}
