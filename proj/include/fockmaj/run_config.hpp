#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "fockmaj/errors.hpp"
#include "fockmaj/tolerances.hpp"
#include "fockmaj/verifiers.hpp"

namespace fockmaj {

/// Settings shared by every CLI subcommand. Flags override values from a
/// key=value config file, which override these defaults.
struct RunConfig {
    std::size_t cutoff = 64;
    double tail_eps = kDefaultTol.tail;
    double eps_cmp = kDefaultTol.cmp;
    double eps_norm = kDefaultTol.norm;
    std::uint64_t seed = 0;
    std::string format = "json"; // json | csv | table
    bool entropy_bits = false;

    Tolerances tolerances() const { return Tolerances{eps_cmp, eps_norm, tail_eps}; }

    ScanConfig scan_config() const { return ScanConfig{cutoff, tolerances(), seed}; }

    void validate() const {
        if (format != "json" && format != "csv" && format != "table")
            throw ParameterOutOfRange("format must be json, csv or table");
        if (!(tail_eps > 0.0) || !(eps_cmp > 0.0) || !(eps_norm > 0.0))
            throw ParameterOutOfRange("tolerances must be positive");
    }
};

} // namespace fockmaj
