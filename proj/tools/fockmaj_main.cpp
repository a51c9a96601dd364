#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fockmaj/channels.hpp"
#include "fockmaj/errors.hpp"
#include "fockmaj/fock.hpp"
#include "fockmaj/io.hpp"
#include "fockmaj/majorization.hpp"
#include "fockmaj/run_config.hpp"
#include "fockmaj/verifiers.hpp"

namespace {

using namespace fockmaj;

constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDimension = 3;
constexpr int kExitTail = 4;
constexpr int kExitExhausted = 5;

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + ": " + s);
    }
}

std::size_t parse_size(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + ": " + s);
    }
}

// State specs: fock:K | thermal:NBAR | probs:P0,P1,... | @file.json | @file.csv
FockDistribution parse_state_spec(const std::string& spec, const RunConfig& run) {
    const Tolerances tol = run.tolerances();
    if (!spec.empty() && spec[0] == '@') {
        const std::string path = spec.substr(1);
        const std::string text = io::read_file(path);
        const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
        return csv ? io::distribution_from_csv(text, tol)
                   : io::distribution_from_json(text, tol);
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("unrecognized state spec: " + spec);
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "fock") {
        const std::size_t k = parse_size(rest, "fock level");
        return FockDistribution::fock(k, std::max(k, run.cutoff));
    }
    if (kind == "thermal") {
        const double nbar = parse_double(rest, "thermal mean photon number");
        return thermal_distribution(ThermalSpec{nbar}, run.cutoff, tol);
    }
    if (kind == "probs") {
        std::vector<double> p;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = rest.find(',', start);
            const std::string field = comma == std::string::npos
                                          ? rest.substr(start)
                                          : rest.substr(start, comma - start);
            p.push_back(parse_double(field, "probability"));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        return FockDistribution(std::move(p), 0.0, tol);
    }
    throw std::invalid_argument("unrecognized state spec: " + spec);
}

// CLI11 collects --loss/--amp values per option, losing their relative
// order. The order decides the channel, so it is recovered from argv.
std::vector<ChannelSpec> stages_from_argv(const std::vector<std::string>& argv,
                                          std::size_t expect) {
    std::vector<ChannelSpec> stages;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        const std::string& t = argv[i];
        const auto take = [&](const char* flag) -> std::optional<double> {
            const std::string f(flag);
            if (t == f) {
                if (i + 1 >= argv.size())
                    throw std::invalid_argument(f + " needs a value");
                return parse_double(argv[++i], flag);
            }
            if (t.size() > f.size() + 1 && t.compare(0, f.size(), f) == 0 &&
                t[f.size()] == '=')
                return parse_double(t.substr(f.size() + 1), flag);
            return std::nullopt;
        };
        if (const auto v = take("--loss"))
            stages.push_back(ChannelSpec::loss(*v));
        else if (const auto v = take("--amp"))
            stages.push_back(ChannelSpec::amplifier(*v));
    }
    if (stages.size() != expect)
        throw std::invalid_argument("channel flag scan mismatch; use --loss/--amp");
    return stages;
}

ChannelSpec spec_from_stages(const std::vector<ChannelSpec>& stages) {
    if (stages.empty())
        throw std::invalid_argument("no channel given; pass --loss and/or --amp");
    if (stages.size() == 1)
        return stages[0];
    return ChannelSpec::composite(stages);
}

KernelBuildOptions build_options(const RunConfig& run) {
    return KernelBuildOptions{run.tail_eps, 4096};
}

void emit(const std::string& text) { std::fwrite(text.data(), 1, text.size(), stdout); }

void emit_line(const std::string& text) {
    emit(text);
    emit("\n");
}

std::string report_table(const ScanReport& rep) {
    std::string out;
    out += "suite: " + rep.name + "\n";
    out += "channel: " + rep.channel + "\n";
    out += "trials: " + std::to_string(rep.trials) + "\n";
    out += "violations: " + std::to_string(rep.violations) + "\n";
    out += "worst_margin: " + io::format_double(rep.worst_margin) + "\n";
    for (const auto& [name, v] : rep.metrics)
        out += "  " + name + ": " + io::format_double(v) + "\n";
    for (const std::string& f : rep.flags)
        out += "  flag: " + f + "\n";
    for (const Witness& w : rep.witnesses)
        out += "  witness: " + w.label + "\n";
    return out;
}

void write_witness_states(const ScanReport& rep, const std::string& dir) {
    for (std::size_t wi = 0; wi < rep.witnesses.size(); ++wi)
        for (const auto& [name, state] : rep.witnesses[wi].states)
            io::write_file(dir + "/" + rep.name + "_w" + std::to_string(wi) + "_" +
                               name + ".json",
                           io::to_json(state));
}

void print_reports(const std::vector<ScanReport>& reports, bool as_array,
                   const RunConfig& run, const std::string& witness_dir) {
    if (!witness_dir.empty())
        for (const ScanReport& rep : reports)
            write_witness_states(rep, witness_dir);
    if (run.format == "table") {
        for (const ScanReport& rep : reports)
            emit(report_table(rep));
        return;
    }
    if (run.format == "csv") {
        std::string out = "name,channel,trials,violations,worst_margin\n";
        for (const ScanReport& rep : reports)
            out += rep.name + "," + rep.channel + "," + std::to_string(rep.trials) +
                   "," + std::to_string(rep.violations) + "," +
                   io::format_double(rep.worst_margin) + "\n";
        emit(out);
        return;
    }
    if (as_array)
        emit_line(io::to_json(reports));
    else
        emit_line(io::to_json(reports.front()));
}

struct EvolveArgs {
    std::string state;
};

int run_evolve(const RunConfig& run, const std::vector<ChannelSpec>& stages,
               const EvolveArgs& args) {
    const Tolerances tol = run.tolerances();
    const FockDistribution input = parse_state_spec(args.state, run);
    std::optional<FockDistribution> evolved;
    std::string channel_label = "identity";
    if (!stages.empty()) {
        const ChannelSpec spec = spec_from_stages(stages);
        const ChannelKernel ker = realize(spec, input.cutoff(), build_options(run));
        evolved = apply(ker, input, tol);
        channel_label = ker.label();
    }
    const FockDistribution& out = evolved ? *evolved : input;
    double entropy = von_neumann_entropy(out);
    const char* unit = "nats";
    if (run.entropy_bits) {
        entropy /= std::log(2.0);
        unit = "bits";
    }
    const double mean = mean_photon_number(out);

    if (run.format == "csv") {
        emit(io::to_csv(out));
        return 0;
    }
    if (run.format == "table") {
        std::string t = "channel: " + channel_label + "\n";
        t += "level,probability\n";
        for (std::size_t n = 0; n < out.size(); ++n)
            t += std::to_string(n) + "," + io::format_double(out.prob(n)) + "\n";
        t += "tail_mass: " + io::format_double(out.tail_mass()) + "\n";
        t += "entropy: " + io::format_double(entropy) + " " + unit + "\n";
        t += "mean_photons: " + io::format_double(mean) + "\n";
        emit(t);
        return 0;
    }
    std::string j = "{\"channel\":\"" + channel_label + "\",\"state\":" +
                    io::to_json(out) + ",\"entropy\":" + io::format_double(entropy) +
                    ",\"entropy_unit\":\"" + unit +
                    "\",\"mean_photons\":" + io::format_double(mean) + "}";
    emit_line(j);
    return 0;
}

struct CompareArgs {
    std::string first;
    std::string second;
    std::string mode = "fock";
    std::string curves_prefix;
};

int run_compare(const RunConfig& run, const CompareArgs& args) {
    const Tolerances tol = run.tolerances();
    FockDistribution a = parse_state_spec(args.first, run);
    FockDistribution b = parse_state_spec(args.second, run);
    const std::size_t common = std::max(a.cutoff(), b.cutoff());
    a = a.zero_padded(common);
    b = b.zero_padded(common);
    const CurveMode mode = [&] {
        if (args.mode == "fock")
            return CurveMode::FockOrder;
        if (args.mode == "regular")
            return CurveMode::Sorted;
        throw std::invalid_argument("mode must be fock or regular");
    }();
    const ComparisonOutcome oc = mode == CurveMode::FockOrder
                                     ? compare_fock_majorization(a, b, tol)
                                     : compare_majorization(a, b, tol);
    if (!args.curves_prefix.empty()) {
        io::write_file(args.curves_prefix + "_first.csv",
                       io::to_csv(partial_sums(a, mode)));
        io::write_file(args.curves_prefix + "_second.csv",
                       io::to_csv(partial_sums(b, mode)));
    }
    if (run.format == "table") {
        std::string t = "verdict: " + to_string(oc.verdict) + "\n";
        t += "witness_up: " +
             (oc.witness_up ? std::to_string(*oc.witness_up) : std::string("none")) +
             "\n";
        t += "witness_down: " +
             (oc.witness_down ? std::to_string(*oc.witness_down) : std::string("none")) +
             "\n";
        t += "margin: " + io::format_double(oc.margin) + "\n";
        emit(t);
        return 0;
    }
    if (run.format == "csv") {
        std::string out = "verdict,witness_up,witness_down,margin\n";
        out += to_string(oc.verdict) + ",";
        out += (oc.witness_up ? std::to_string(*oc.witness_up) : std::string()) + ",";
        out += (oc.witness_down ? std::to_string(*oc.witness_down) : std::string()) +
               ",";
        out += io::format_double(oc.margin) + "\n";
        emit(out);
        return 0;
    }
    emit_line(io::to_json(oc));
    return 0;
}

struct VerifyArgs {
    std::string suite;
    std::size_t k_max = 40;
    std::size_t n_max = 0; // 0 = up to the kernel's output cutoff
    std::size_t samples = 1000;
    std::size_t pairs = 1000;
    bool demo_broken_kernel = false;
    std::string witness_dir;
};

int run_verify(const RunConfig& run, const std::vector<ChannelSpec>& stages,
               const VerifyArgs& args) {
    const ScanConfig cfg = run.scan_config();
    std::vector<ScanReport> reports;
    bool as_array = false;
    if (args.demo_broken_kernel && args.suite != "dual")
        throw std::invalid_argument("--demo-broken-kernel only applies to the dual suite");

    if (args.suite == "dual" && args.demo_broken_kernel) {
        const ChannelKernel broken = make_column_swap_kernel(run.cutoff + 1);
        reports.push_back(verify_dual_ladder_criterion(broken, args.k_max, args.n_max,
                                                       args.samples, cfg));
    } else {
        const ChannelSpec spec = spec_from_stages(stages);
        if (args.suite == "ladder") {
            reports.push_back(verify_ladder(spec, args.k_max, args.n_max, cfg));
        } else if (args.suite == "passive") {
            reports.push_back(verify_passive_preservation(spec, args.samples, cfg));
        } else if (args.suite == "dual") {
            reports.push_back(verify_dual_ladder_criterion(spec, args.k_max, args.n_max,
                                                           args.samples, cfg));
        } else if (args.suite == "fock-preserve") {
            reports.push_back(verify_fock_preservation(spec, args.pairs, cfg));
        } else if (args.suite == "passive-major") {
            reports.push_back(
                verify_majorization_preservation_passive(spec, args.pairs, cfg));
        } else if (args.suite == "dominance") {
            reports.push_back(verify_passive_output_dominance(spec, args.samples, cfg));
        } else if (args.suite == "all") {
            reports = verify_all(spec, args.k_max, args.n_max, args.samples, args.pairs,
                                 cfg);
            as_array = true;
        } else {
            throw std::invalid_argument("unknown verify suite: " + args.suite);
        }
    }
    print_reports(reports, as_array, run, args.witness_dir);
    std::size_t total = 0;
    for (const ScanReport& rep : reports)
        total += rep.violations;
    return total > 0 ? kExitViolations : 0;
}

struct ConjectureArgs {
    double entropy = 0.0;
    std::size_t samples = 500;
    double candidate_tol = 1e-9;
    std::string witness_dir;
};

int run_scan_conjecture(const RunConfig& run, const std::vector<ChannelSpec>& stages,
                        const ConjectureArgs& args) {
    const ChannelSpec spec = spec_from_stages(stages);
    const ScanReport rep = scan_broadcast_conjecture(spec, args.entropy, args.samples,
                                                     run.scan_config(),
                                                     args.candidate_tol);
    print_reports({rep}, false, run, args.witness_dir);
    return 0;
}

struct IncomparableArgs {
    std::string mode = "fock";
    std::size_t trials = 1000;
    std::string witness_dir;
};

int run_scan_incomparable(const RunConfig& run, const IncomparableArgs& args) {
    const CurveMode mode = [&] {
        if (args.mode == "fock")
            return CurveMode::FockOrder;
        if (args.mode == "regular")
            return CurveMode::Sorted;
        throw std::invalid_argument("mode must be fock or regular");
    }();
    const ScanReport rep = find_incomparable_pairs(mode, args.trials, run.scan_config());
    print_reports({rep}, false, run, args.witness_dir);
    return 0;
}

struct KernelArgs {
    std::size_t dim = 0; // 0 = use the global cutoff
    std::string output;
};

int run_kernel(const RunConfig& run, const std::vector<ChannelSpec>& stages,
               const KernelArgs& args) {
    const ChannelSpec spec = spec_from_stages(stages);
    const std::size_t dim = args.dim == 0 ? run.cutoff : args.dim;
    const ChannelKernel ker = realize(spec, dim, build_options(run));
    const std::string text =
        run.format == "json" ? io::to_json(ker) + "\n" : io::to_csv(ker);
    if (args.output.empty())
        emit(text);
    else
        io::write_file(args.output, text);
    return 0;
}

int dispatch(int argc, char** argv) {
    const std::vector<std::string> raw_args(argv + 1, argv + argc);

    RunConfig run;
    CLI::App app{"Fock-diagonal states, bosonic Gaussian channel kernels, and "
                 "majorization verification scans"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file with the global options below");
    app.add_option("--cutoff", run.cutoff, "Photon-number truncation for states")
        ->capture_default_str();
    app.add_option("--tail-eps", run.tail_eps, "Kernel column tail bound")
        ->capture_default_str();
    app.add_option("--eps-cmp", run.eps_cmp, "Partial-sum comparison tolerance")
        ->capture_default_str();
    app.add_option("--eps-norm", run.eps_norm, "Normalization tolerance")
        ->capture_default_str();
    app.add_option("--seed", run.seed, "Base seed for sampling scans")
        ->capture_default_str();
    app.add_option("--format", run.format, "Output format: json | csv | table")
        ->capture_default_str();
    app.add_flag("--bits", run.entropy_bits, "Report entropy in bits instead of nats");

    // Channel flags are registered per subcommand so CLI11 validates and
    // counts them; their order is recovered from raw argv afterwards.
    std::vector<double> loss_vals, amp_vals;
    const auto add_channel_opts = [&](CLI::App* sub) {
        sub->add_option("--loss", loss_vals,
                        "Pure-loss stage with this transmittance (repeatable)")
            ->allow_extra_args(false)
            ->configurable(false);
        sub->add_option("--amp", amp_vals,
                        "Amplifier stage with this gain (repeatable)")
            ->allow_extra_args(false)
            ->configurable(false);
    };

    EvolveArgs evolve_args;
    CLI::App* evolve = app.add_subcommand("evolve", "Push a state through a channel");
    evolve->fallthrough();
    evolve->add_option("state", evolve_args.state,
                       "fock:K | thermal:NBAR | probs:P0,P1,... | @file")
        ->required();
    add_channel_opts(evolve);

    CompareArgs compare_args;
    CLI::App* compare = app.add_subcommand("compare", "Compare two states");
    compare->fallthrough();
    compare->add_option("first", compare_args.first, "First state spec")->required();
    compare->add_option("second", compare_args.second, "Second state spec")->required();
    compare->add_option("--mode", compare_args.mode, "fock | regular")
        ->capture_default_str();
    compare->add_option("--curves", compare_args.curves_prefix,
                        "Write both partial-sum curves to PREFIX_first.csv / "
                        "PREFIX_second.csv");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "Check the majorization statements against a channel");
    verify->fallthrough();
    verify
        ->add_option("suite", verify_args.suite,
                     "ladder | passive | dual | fock-preserve | passive-major | "
                     "dominance | all")
        ->required();
    verify->add_option("--kmax", verify_args.k_max, "Number of ladder pairs")
        ->capture_default_str();
    verify->add_option("--nmax", verify_args.n_max,
                       "Highest output level checked (0 = all rows)")
        ->capture_default_str();
    verify->add_option("--samples", verify_args.samples, "Sampled states per suite")
        ->capture_default_str();
    verify->add_option("--pairs", verify_args.pairs, "Sampled pairs per suite")
        ->capture_default_str();
    verify->add_flag("--demo-broken-kernel", verify_args.demo_broken_kernel,
                     "Run the dual suite against a column-swapped identity kernel");
    verify->add_option("--witness-dir", verify_args.witness_dir,
                       "Write witness states as JSON files into this directory");
    add_channel_opts(verify);

    CLI::App* scan = app.add_subcommand("scan", "Randomized searches");
    scan->fallthrough();
    scan->require_subcommand(1);

    ConjectureArgs conj_args;
    CLI::App* conj = scan->add_subcommand(
        "conjecture", "Entropy-margin scan against the thermal reference");
    conj->fallthrough();
    conj->add_option("--entropy", conj_args.entropy,
                     "Target entropy in nats (defines the thermal reference)")
        ->required();
    conj->add_option("--samples", conj_args.samples, "Accepted samples")
        ->capture_default_str();
    conj->add_option("--candidate-tol", conj_args.candidate_tol,
                     "Margin below -tol is flagged as a candidate")
        ->capture_default_str();
    conj->add_option("--witness-dir", conj_args.witness_dir,
                     "Write witness states into this directory");
    add_channel_opts(conj);

    IncomparableArgs inc_args;
    CLI::App* inc = scan->add_subcommand("incomparable",
                                         "Search for incomparable state pairs");
    inc->fallthrough();
    inc->add_option("--mode", inc_args.mode, "fock | regular")->capture_default_str();
    inc->add_option("--trials", inc_args.trials, "Random trials")->capture_default_str();
    inc->add_option("--witness-dir", inc_args.witness_dir,
                    "Write witness states into this directory");

    KernelArgs kernel_args;
    CLI::App* kernel = app.add_subcommand("kernel", "Print a channel kernel matrix");
    kernel->fallthrough();
    kernel->add_option("--dim", kernel_args.dim,
                       "Input cutoff for the kernel (0 = global cutoff)")
        ->capture_default_str();
    kernel->add_option("-o,--output", kernel_args.output,
                       "Write to this file instead of stdout");
    add_channel_opts(kernel);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    run.validate();

    const std::vector<ChannelSpec> stages =
        stages_from_argv(raw_args, loss_vals.size() + amp_vals.size());

    if (*evolve)
        return run_evolve(run, stages, evolve_args);
    if (*compare)
        return run_compare(run, compare_args);
    if (*verify)
        return run_verify(run, stages, verify_args);
    if (*conj)
        return run_scan_conjecture(run, stages, conj_args);
    if (*inc)
        return run_scan_incomparable(run, inc_args);
    if (*kernel)
        return run_kernel(run, stages, kernel_args);
    throw std::invalid_argument("no subcommand selected");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CutoffOverflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const TailTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTail;
    } catch (const SearchExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 10;
    }
}
