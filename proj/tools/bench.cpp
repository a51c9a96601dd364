// Timing comparison between the OpenMP kernels and the serial reference.
// Not a test: results are printed for a human, nothing is asserted.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fockmaj/channels.hpp"
#include "fockmaj/fock.hpp"
#include "fockmaj/serial_ref.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
    fn(); // warm-up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i)
        fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double parallel_ms, double serial_ms) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, parallel_ms, serial_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main() {
    using namespace fockmaj;

    const std::size_t cutoff = 512;
    const KernelBuildOptions opts;
    const int reps = 5;

    std::printf("%-28s %13s %13s %9s\n", "case", "parallel", "serial", "speedup");

    {
        const auto spec = ChannelSpec::loss(0.35);
        row("loss kernel, cutoff 512",
            time_ms([&] { realize(spec, cutoff, opts); }, reps),
            time_ms([&] { serial::realize(spec, cutoff, opts); }, reps));
    }
    {
        const auto spec = ChannelSpec::amplifier(2.0);
        row("amplifier kernel, cutoff 512",
            time_ms([&] { realize(spec, cutoff, opts); }, reps),
            time_ms([&] { serial::realize(spec, cutoff, opts); }, reps));
    }
    {
        const auto spec = ChannelSpec::composite(
            {ChannelSpec::loss(0.6), ChannelSpec::amplifier(1.8),
             ChannelSpec::loss(0.9), ChannelSpec::amplifier(1.3)});
        row("4-stage compose, cutoff 256",
            time_ms([&] { realize(spec, 256, opts); }, reps),
            time_ms([&] { serial::realize(spec, 256, opts); }, reps));
    }
    {
        const auto ker = realize(ChannelSpec::amplifier(1.7), cutoff, opts);
        const auto rho = thermal_distribution(ThermalSpec{3.0}, cutoff);
        row("apply, cutoff 512",
            time_ms([&] { apply(ker, rho); }, reps * 10),
            time_ms([&] { serial::apply(ker, rho); }, reps * 10));
    }
    return 0;
}
