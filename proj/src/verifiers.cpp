#include "fockmaj/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "fockmaj/detail/error_collector.hpp"
#include "fockmaj/errors.hpp"
#include "fockmaj/rng.hpp"
#include "fockmaj/sampling.hpp"

namespace fockmaj {
namespace {

constexpr std::size_t kMaxStoredWitnesses = 32;
constexpr std::size_t kHardRowCap = 4096;

// Per-suite RNG stream ids; every sample i of suite S draws from an
// independent generator seeded by (seed, S, i), so reports are identical
// for any thread count and any subset of suites run.
constexpr std::uint64_t kStreamPassive = 2;
constexpr std::uint64_t kStreamDual = 3;
constexpr std::uint64_t kStreamFock = 4;
constexpr std::uint64_t kStreamPassiveMajor = 5;
constexpr std::uint64_t kStreamDominance = 6;
constexpr std::uint64_t kStreamConjecture = 7;
constexpr std::uint64_t kStreamIncomparable = 8;

// Verification kernels are built with a much tighter column-tail budget
// than cfg.tol.tail: entries zeroed by truncation perturb prefix sums by
// up to the budget, and the checks below resolve differences at
// cfg.tol.cmp (1e-12 by default), so the budget must sit well under it.
KernelBuildOptions build_options(const ScanConfig& cfg) {
    return KernelBuildOptions{std::min(1e-15, cfg.tol.tail), kHardRowCap};
}

void add_metric(ScanReport& rep, const char* name, double value) {
    rep.metrics.emplace_back(name, value);
}

void push_witness(ScanReport& rep, Witness w) {
    if (rep.witnesses.size() < kMaxStoredWitnesses)
        rep.witnesses.push_back(std::move(w));
    else if (std::find(rep.flags.begin(), rep.flags.end(), "witness-cap-reached") ==
             rep.flags.end())
        rep.flags.push_back("witness-cap-reached");
}

bool order_ok(Verdict v) {
    return v == Verdict::Majorizes || v == Verdict::Equivalent;
}

// Largest upward step p[n+1] - p[n]; zero for a passive state.
double passivity_defect(const FockDistribution& rho) {
    const auto p = rho.probs();
    double defect = 0.0;
    for (std::size_t n = 0; n + 1 < p.size(); ++n)
        defect = std::max(defect, p[n + 1] - p[n]);
    return std::max(defect, 0.0);
}

// P(n, k) = sum_{m<=n} kernel(m, k): cumulative output curves of every
// input level, the backbone of the interpolation argument.
Matrix column_prefix_matrix(const ChannelKernel& ker) {
    Matrix P(ker.output_dim(), ker.input_dim());
    const std::int64_t cols = static_cast<std::int64_t>(ker.input_dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t kk = 0; kk < cols; ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        double acc = 0.0;
        for (std::size_t n = 0; n < ker.output_dim(); ++n) {
            acc += ker.entry(n, k);
            P.at(n, k) = acc;
        }
    }
    return P;
}

std::vector<double> padded_probs(const FockDistribution& rho, std::size_t len) {
    std::vector<double> p(len, 0.0);
    std::copy(rho.probs().begin(), rho.probs().end(), p.begin());
    return p;
}

std::vector<double> prefix_sums(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        out[i] = acc;
    }
    return out;
}

// Minimum over all descent steps of the interpolation slack
//   slack_n^(k) = (R_k - S_k) P(n, k+1) + sum_{i>k} (r_i - s_i) P(n, i),
// accumulated as a running suffix while k walks downward. Equal to
// alpha_n^(k+1) - beta_n^(k+1) from the trace, at O(N * rows) cost.
double min_recurrence_slack(const Matrix& P, const std::vector<double>& r,
                            const std::vector<double>& s) {
    const std::size_t len = r.size();
    if (len != s.size() || len == 0 || len > P.cols)
        throw DimensionMismatch("min_recurrence_slack: bad operand sizes");
    if (len == 1)
        return 0.0;
    const std::vector<double> R = prefix_sums(r);
    const std::vector<double> S = prefix_sums(s);
    std::vector<double> suffix(P.rows, 0.0);
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = len - 1; k-- > 0;) {
        const double dr = r[k + 1] - s[k + 1];
        const double drs = R[k] - S[k];
        for (std::size_t n = 0; n < P.rows; ++n) {
            suffix[n] += dr * P.at(n, k + 1);
            min_slack = std::min(min_slack, drs * P.at(n, k + 1) + suffix[n]);
        }
    }
    return min_slack;
}

} // namespace

RecurrenceTrace fock_preservation_trace(const ChannelKernel& kernel,
                                        const FockDistribution& rho,
                                        const FockDistribution& sigma,
                                        const Tolerances& tol) {
    const std::size_t len = std::max(rho.size(), sigma.size());
    if (len > kernel.input_dim())
        throw DimensionMismatch("fock_preservation_trace: state exceeds kernel input");
    const ComparisonOutcome input_order = compare_fock_majorization(rho, sigma, tol);
    if (!order_ok(input_order.verdict))
        throw PreorderNotEstablished(
            "fock_preservation_trace: inputs are not Fock-ordered");

    const std::vector<double> r = padded_probs(rho, len);
    const std::vector<double> s = padded_probs(sigma, len);
    const std::vector<double> R = prefix_sums(r);
    const std::vector<double> S = prefix_sums(s);
    const Matrix P = column_prefix_matrix(kernel);
    const std::size_t rows = P.rows;
    const std::size_t N = len - 1;

    RecurrenceTrace trace;
    trace.alpha.assign(len, std::vector<double>(rows, 0.0));
    trace.beta.assign(len, std::vector<double>(rows, 0.0));
    for (std::size_t k = 0; k <= N; ++k) {
        for (std::size_t n = 0; n < rows; ++n) {
            double a = R[k] * P.at(n, k);
            double b = S[k] * P.at(n, k);
            for (std::size_t i = k + 1; i <= N; ++i) {
                a += r[i] * P.at(n, i);
                b += s[i] * P.at(n, i);
            }
            trace.alpha[k][n] = a;
            trace.beta[k][n] = b;
        }
    }
    if (N == 0) {
        trace.min_slack = 0.0;
        return trace;
    }
    trace.slack.assign(N, std::vector<double>(rows, 0.0));
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < N; ++k) {
        const double drs = R[k] - S[k];
        for (std::size_t n = 0; n < rows; ++n) {
            const double sl = trace.alpha[k][n] - trace.beta[k][n] -
                              drs * (P.at(n, k) - P.at(n, k + 1));
            trace.slack[k][n] = sl;
            min_slack = std::min(min_slack, sl);
        }
    }
    trace.min_slack = min_slack;
    return trace;
}

ScanReport verify_ladder(const ChannelSpec& spec, std::size_t k_max, std::size_t n_max,
                         const ScanConfig& cfg) {
    if (k_max == 0)
        throw ParameterOutOfRange("verify_ladder: k_max must be >= 1");
    const ChannelKernel ker = realize(spec, k_max, build_options(cfg));
    const std::size_t rows = ker.output_dim();
    const std::size_t nmax = n_max == 0 ? rows - 1 : std::min(n_max, rows - 1);

    // Identity checks only make sense for a bare stage; composites are
    // covered by the ladder comparisons alone.
    const std::vector<ChannelSpec> leaves = spec.flatten();
    const ChannelSpec leaf = leaves.size() == 1 ? leaves[0] : spec;
    const PureLoss* loss_leaf =
        leaves.size() == 1 ? std::get_if<PureLoss>(&leaf.node()) : nullptr;
    const Amplifier* amp_leaf =
        leaves.size() == 1 ? std::get_if<Amplifier>(&leaf.node()) : nullptr;

    struct KRes {
        double dip = 0.0;
        double ident_resid = 0.0;
        std::size_t ident_checks = 0;
        bool fock_bad = false;
        bool sorted_bad = false;
        bool ident_bad = false;
        std::vector<Witness> wit;
    };
    std::vector<KRes> res(k_max);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t kk = 0; kk < static_cast<std::int64_t>(k_max); ++kk)
        errs.guard([&, kk] {
            const std::size_t k = static_cast<std::size_t>(kk);
            KRes& out = res[k];
            const FockDistribution a = kernel_column(ker, k, cfg.tol);
            const FockDistribution b = kernel_column(ker, k + 1, cfg.tol);

            const PartialSumCurve fa = partial_sums(a, CurveMode::FockOrder);
            const PartialSumCurve fb = partial_sums(b, CurveMode::FockOrder);
            const ComparisonOutcome ocf = compare_curves(fa, fb, cfg.tol.cmp);
            const CurveGap gf = curve_gaps(fa, fb);
            out.dip = std::max(out.dip, gf.max_down);
            if (!order_ok(ocf.verdict)) {
                out.fock_bad = true;
                Witness w;
                w.label = "fock ladder order broken at k=" + std::to_string(k);
                w.values = {{"k", static_cast<double>(k)}, {"dip", gf.max_down}};
                w.states = {{"output_k", a}, {"output_k_plus_1", b}};
                out.wit.push_back(std::move(w));
            }

            const PartialSumCurve sa = partial_sums(a, CurveMode::Sorted);
            const PartialSumCurve sb = partial_sums(b, CurveMode::Sorted);
            const ComparisonOutcome ocs = compare_curves(sa, sb, cfg.tol.cmp);
            const CurveGap gs = curve_gaps(sa, sb);
            out.dip = std::max(out.dip, gs.max_down);
            if (!order_ok(ocs.verdict)) {
                out.sorted_bad = true;
                Witness w;
                w.label = "sorted ladder order broken at k=" + std::to_string(k);
                w.values = {{"k", static_cast<double>(k)}, {"dip", gs.max_down}};
                w.states = {{"output_k", a}, {"output_k_plus_1", b}};
                out.wit.push_back(std::move(w));
            }

            double first_bad_resid = 0.0;
            std::size_t first_bad_n = 0;
            bool have_bad = false;
            if (loss_leaf) {
                const double eta = loss_leaf->transmittance;
                double pa = 0.0, pb = 0.0;
                for (std::size_t n = 0; n <= nmax; ++n) {
                    pa += ker.entry(n, k);
                    pb += ker.entry(n, k + 1);
                    const double resid = (pa - pb) - eta * ker.entry(n, k);
                    ++out.ident_checks;
                    out.ident_resid = std::max(out.ident_resid, std::abs(resid));
                    if (std::abs(resid) > cfg.tol.cmp && !have_bad) {
                        have_bad = true;
                        first_bad_resid = resid;
                        first_bad_n = n;
                    }
                }
            } else if (amp_leaf) {
                const double gm1 = amp_leaf->gain - 1.0;
                double pa = 0.0, pb = 0.0;
                for (std::size_t n = 0; n + k + 1 < rows && n <= nmax; ++n) {
                    pa += ker.entry(n + k, k);
                    pb += ker.entry(n + k + 1, k + 1);
                    const double resid = (pa - pb) - gm1 * ker.entry(n + k + 1, k + 1);
                    ++out.ident_checks;
                    out.ident_resid = std::max(out.ident_resid, std::abs(resid));
                    if (std::abs(resid) > cfg.tol.cmp && !have_bad) {
                        have_bad = true;
                        first_bad_resid = resid;
                        first_bad_n = n;
                    }
                }
            }
            if (have_bad) {
                out.ident_bad = true;
                Witness w;
                w.label = "cumulative step identity broken at k=" + std::to_string(k);
                w.values = {{"k", static_cast<double>(k)},
                            {"n", static_cast<double>(first_bad_n)},
                            {"residual", first_bad_resid}};
                out.wit.push_back(std::move(w));
            }
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = "ladder";
    rep.channel = ker.label();
    rep.config = cfg;
    rep.trials = k_max;
    double worst_ident = 0.0;
    std::size_t ident_checks = 0;
    for (const KRes& r : res) {
        rep.violations += static_cast<std::size_t>(r.fock_bad) +
                          static_cast<std::size_t>(r.sorted_bad) +
                          static_cast<std::size_t>(r.ident_bad);
        rep.worst_margin = std::max({rep.worst_margin, r.dip, r.ident_resid});
        worst_ident = std::max(worst_ident, r.ident_resid);
        ident_checks += r.ident_checks;
        for (const Witness& w : r.wit)
            push_witness(rep, w);
    }
    add_metric(rep, "ladder_pairs", static_cast<double>(k_max));
    add_metric(rep, "n_max", static_cast<double>(nmax));
    add_metric(rep, "output_rows", static_cast<double>(rows));
    add_metric(rep, "identity_checks", static_cast<double>(ident_checks));
    add_metric(rep, "max_identity_residual", worst_ident);
    return rep;
}

ScanReport verify_passive_preservation(const ChannelSpec& spec, std::size_t sample_count,
                                       const ScanConfig& cfg) {
    const ChannelKernel ker = realize(spec, cfg.cutoff, build_options(cfg));
    struct SRes {
        double defect = 0.0;
        std::vector<Witness> wit;
    };
    std::vector<SRes> res(sample_count);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(sample_count); ++ii)
        errs.guard([&, ii] {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng(derive_seed(cfg.seed, kStreamPassive, i));
            const FockDistribution rho = sample_passive(rng, cfg.cutoff);
            const FockDistribution out = apply(ker, rho, cfg.tol);
            res[i].defect = passivity_defect(out);
            if (res[i].defect > cfg.tol.cmp) {
                Witness w;
                w.label = "non-passive output at sample " + std::to_string(i);
                w.values = {{"sample", static_cast<double>(i)},
                            {"defect", res[i].defect}};
                w.states = {{"input", rho}, {"output", out}};
                res[i].wit.push_back(std::move(w));
            }
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = "passive";
    rep.channel = ker.label();
    rep.config = cfg;
    rep.trials = sample_count;
    double worst = 0.0;
    for (const SRes& r : res) {
        worst = std::max(worst, r.defect);
        rep.violations += r.wit.size();
        for (const Witness& w : r.wit)
            push_witness(rep, w);
    }
    rep.worst_margin = worst;
    add_metric(rep, "max_passivity_defect", worst);
    return rep;
}

namespace {

ScanReport dual_ladder_core(const ChannelKernel& ker, std::size_t k_max,
                            std::size_t n_max, std::size_t sample_count,
                            const ScanConfig& cfg) {
    const std::size_t rows = ker.output_dim();
    const std::size_t cols = ker.input_dim();
    const std::size_t pairs = rows >= 2 ? std::min(k_max, rows - 1) : 0;
    const std::size_t nmax = n_max == 0 ? cols - 1 : std::min(n_max, cols - 1);

    struct DRes {
        double dip = 0.0;
        std::size_t first_n = 0;
        bool bad = false;
    };
    std::vector<DRes> dres(pairs);
    const std::int64_t pairs64 = static_cast<std::int64_t>(pairs);
#pragma omp parallel for schedule(static)
    for (std::int64_t kk = 0; kk < pairs64; ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        double pa = 0.0, pb = 0.0;
        DRes& d = dres[k];
        for (std::size_t n = 0; n <= nmax; ++n) {
            pa += ker.entry(k, n);
            pb += ker.entry(k + 1, n);
            const double gap = pb - pa;
            if (gap > d.dip) {
                if (!d.bad && gap > cfg.tol.cmp) {
                    d.bad = true;
                    d.first_n = n;
                }
                d.dip = gap;
            }
        }
    }

    struct ERes {
        double defect = 0.0;
        std::vector<Witness> wit;
    };
    std::vector<ERes> eres(sample_count);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(sample_count); ++ii)
        errs.guard([&, ii] {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng(derive_seed(cfg.seed, kStreamDual, i));
            const FockDistribution rho = sample_passive(rng, cols - 1);
            const FockDistribution out = apply(ker, rho, cfg.tol);
            eres[i].defect = passivity_defect(out);
            if (eres[i].defect > cfg.tol.cmp) {
                Witness w;
                w.label = "non-passive output at sample " + std::to_string(i);
                w.values = {{"sample", static_cast<double>(i)},
                            {"defect", eres[i].defect}};
                w.states = {{"input", rho}, {"output", out}};
                eres[i].wit.push_back(std::move(w));
            }
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = "dual";
    rep.channel = ker.label();
    rep.config = cfg;
    rep.trials = pairs + sample_count;
    std::size_t dual_bad = 0;
    double max_dip = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
        max_dip = std::max(max_dip, dres[k].dip);
        if (dres[k].bad) {
            ++dual_bad;
            Witness w;
            w.label = "dual ladder step decreases at k=" + std::to_string(k);
            w.values = {{"k", static_cast<double>(k)},
                        {"n", static_cast<double>(dres[k].first_n)},
                        {"gap", dres[k].dip}};
            push_witness(rep, w);
        }
    }
    std::size_t emp_bad = 0;
    double max_defect = 0.0;
    for (const ERes& r : eres) {
        max_defect = std::max(max_defect, r.defect);
        emp_bad += r.wit.size();
        for (const Witness& w : r.wit)
            push_witness(rep, w);
    }
    rep.violations = dual_bad + emp_bad;
    rep.worst_margin = std::max(max_dip, max_defect);
    const bool consistent = (dual_bad == 0) == (emp_bad == 0);
    if (!consistent)
        rep.flags.push_back("iff-sides-disagree");
    add_metric(rep, "dual_pairs", static_cast<double>(pairs));
    add_metric(rep, "dual_violations", static_cast<double>(dual_bad));
    add_metric(rep, "max_dual_dip", max_dip);
    add_metric(rep, "empirical_samples", static_cast<double>(sample_count));
    add_metric(rep, "empirical_violations", static_cast<double>(emp_bad));
    add_metric(rep, "max_passivity_defect", max_defect);
    add_metric(rep, "iff_consistent", consistent ? 1.0 : 0.0);
    return rep;
}

} // namespace

ScanReport verify_dual_ladder_criterion(const ChannelSpec& spec, std::size_t k_max,
                                        std::size_t n_max, std::size_t sample_count,
                                        const ScanConfig& cfg) {
    const ChannelKernel ker = realize(spec, cfg.cutoff, build_options(cfg));
    return dual_ladder_core(ker, k_max, n_max, sample_count, cfg);
}

ScanReport verify_dual_ladder_criterion(const ChannelKernel& kernel, std::size_t k_max,
                                        std::size_t n_max, std::size_t sample_count,
                                        const ScanConfig& cfg) {
    return dual_ladder_core(kernel, k_max, n_max, sample_count, cfg);
}

ChannelKernel make_column_swap_kernel(std::size_t dim) {
    if (dim < 2)
        throw ParameterOutOfRange("make_column_swap_kernel: dim must be >= 2");
    Matrix m(dim, dim);
    for (std::size_t i = 2; i < dim; ++i)
        m.at(i, i) = 1.0;
    m.at(1, 0) = 1.0;
    m.at(0, 1) = 1.0;
    return ChannelKernel(std::move(m), std::vector<double>(dim, 0.0),
                         "column-swap(" + std::to_string(dim) + ")");
}

ScanReport verify_fock_preservation(const ChannelSpec& spec, std::size_t pair_count,
                                    const ScanConfig& cfg) {
    const ChannelKernel ker = realize(spec, cfg.cutoff, build_options(cfg));
    const Matrix P = column_prefix_matrix(ker);
    struct FRes {
        double dip = 0.0;
        double slack = 0.0;
        bool input_bad = false;
        std::vector<Witness> wit;
    };
    std::vector<FRes> res(pair_count);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(pair_count); ++ii)
        errs.guard([&, ii] {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng(derive_seed(cfg.seed, kStreamFock, i));
            auto [rho, sigma] = sample_fock_comparable_pair(rng, cfg.cutoff);
            FRes& out = res[i];
            out.input_bad =
                !order_ok(compare_fock_majorization(rho, sigma, cfg.tol).verdict);

            const FockDistribution out_r = apply(ker, rho, cfg.tol);
            const FockDistribution out_s = apply(ker, sigma, cfg.tol);
            const PartialSumCurve ca = partial_sums(out_r, CurveMode::FockOrder);
            const PartialSumCurve cb = partial_sums(out_s, CurveMode::FockOrder);
            const ComparisonOutcome oc = compare_curves(ca, cb, cfg.tol.cmp);
            out.dip = curve_gaps(ca, cb).max_down;
            out.slack = min_recurrence_slack(P, padded_probs(rho, cfg.cutoff + 1),
                                             padded_probs(sigma, cfg.cutoff + 1));
            if (!order_ok(oc.verdict) || out.slack < -cfg.tol.cmp) {
                Witness w;
                w.label = "fock order lost at pair " + std::to_string(i);
                w.values = {{"pair", static_cast<double>(i)},
                            {"dip", out.dip},
                            {"min_slack", out.slack}};
                w.states = {{"input_rho", rho},
                            {"input_sigma", sigma},
                            {"output_rho", out_r},
                            {"output_sigma", out_s}};
                out.wit.push_back(std::move(w));
            }
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = "fock-preserve";
    rep.channel = ker.label();
    rep.config = cfg;
    rep.trials = pair_count;
    double min_slack = std::numeric_limits<double>::infinity();
    double max_dip = 0.0;
    std::size_t input_bad = 0;
    for (const FRes& r : res) {
        min_slack = std::min(min_slack, r.slack);
        max_dip = std::max(max_dip, r.dip);
        input_bad += r.input_bad ? 1 : 0;
        rep.violations += r.wit.size();
        for (const Witness& w : r.wit)
            push_witness(rep, w);
    }
    if (pair_count == 0)
        min_slack = 0.0;
    rep.worst_margin = std::max(max_dip, std::max(0.0, -min_slack));
    add_metric(rep, "min_recurrence_slack", min_slack);
    add_metric(rep, "max_output_dip", max_dip);
    add_metric(rep, "input_order_failures", static_cast<double>(input_bad));
    return rep;
}

ScanReport verify_majorization_preservation_passive(const ChannelSpec& spec,
                                                    std::size_t pair_count,
                                                    const ScanConfig& cfg) {
    const ChannelKernel ker = realize(spec, cfg.cutoff, build_options(cfg));
    struct MRes {
        double dip = 0.0;
        double defect = 0.0;
        bool input_bad = false;
        std::vector<Witness> wit;
    };
    std::vector<MRes> res(pair_count);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(pair_count); ++ii)
        errs.guard([&, ii] {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng(derive_seed(cfg.seed, kStreamPassiveMajor, i));
            auto [rho, sigma] = sample_passive_comparable_pair(rng, cfg.cutoff);
            MRes& out = res[i];
            out.input_bad =
                !order_ok(compare_majorization(rho, sigma, cfg.tol).verdict);

            const FockDistribution out_r = apply(ker, rho, cfg.tol);
            const FockDistribution out_s = apply(ker, sigma, cfg.tol);
            const PartialSumCurve ca = partial_sums(out_r, CurveMode::Sorted);
            const PartialSumCurve cb = partial_sums(out_s, CurveMode::Sorted);
            const ComparisonOutcome oc = compare_curves(ca, cb, cfg.tol.cmp);
            out.dip = curve_gaps(ca, cb).max_down;
            out.defect =
                std::max(passivity_defect(out_r), passivity_defect(out_s));
            if (!order_ok(oc.verdict) || out.defect > cfg.tol.cmp) {
                Witness w;
                w.label = "majorization lost at pair " + std::to_string(i);
                w.values = {{"pair", static_cast<double>(i)},
                            {"dip", out.dip},
                            {"passivity_defect", out.defect}};
                w.states = {{"input_rho", rho},
                            {"input_sigma", sigma},
                            {"output_rho", out_r},
                            {"output_sigma", out_s}};
                out.wit.push_back(std::move(w));
            }
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = "passive-major";
    rep.channel = ker.label();
    rep.config = cfg;
    rep.trials = pair_count;
    double max_dip = 0.0, max_defect = 0.0;
    std::size_t input_bad = 0;
    for (const MRes& r : res) {
        max_dip = std::max(max_dip, r.dip);
        max_defect = std::max(max_defect, r.defect);
        input_bad += r.input_bad ? 1 : 0;
        rep.violations += r.wit.size();
        for (const Witness& w : r.wit)
            push_witness(rep, w);
    }
    rep.worst_margin = std::max(max_dip, max_defect);
    add_metric(rep, "max_output_dip", max_dip);
    add_metric(rep, "max_passivity_defect", max_defect);
    add_metric(rep, "input_order_failures", static_cast<double>(input_bad));
    return rep;
}

ScanReport verify_passive_output_dominance(const ChannelSpec& spec,
                                           std::size_t sample_count,
                                           const ScanConfig& cfg) {
    const ChannelKernel ker = realize(spec, cfg.cutoff, build_options(cfg));
    struct DRes {
        double dip = 0.0;
        std::vector<Witness> wit;
    };
    std::vector<DRes> res(sample_count);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(sample_count); ++ii)
        errs.guard([&, ii] {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng(derive_seed(cfg.seed, kStreamDominance, i));
            const FockDistribution rho = sample_diagonal(rng, cfg.cutoff);
            const FockDistribution rearranged = passive_rearrangement(rho, cfg.tol);
            const FockDistribution out_p = apply(ker, rearranged, cfg.tol);
            const FockDistribution out = apply(ker, rho, cfg.tol);
            const PartialSumCurve ca = partial_sums(out_p, CurveMode::Sorted);
            const PartialSumCurve cb = partial_sums(out, CurveMode::Sorted);
            const ComparisonOutcome oc = compare_curves(ca, cb, cfg.tol.cmp);
            res[i].dip = curve_gaps(ca, cb).max_down;
            if (!order_ok(oc.verdict)) {
                Witness w;
                w.label = "rearranged output fails to dominate at sample " +
                          std::to_string(i);
                w.values = {{"sample", static_cast<double>(i)}, {"dip", res[i].dip}};
                w.states = {{"input", rho},
                            {"output", out},
                            {"output_rearranged", out_p}};
                res[i].wit.push_back(std::move(w));
            }
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = "dominance";
    rep.channel = ker.label();
    rep.config = cfg;
    rep.trials = sample_count;
    double max_dip = 0.0;
    for (const DRes& r : res) {
        max_dip = std::max(max_dip, r.dip);
        rep.violations += r.wit.size();
        for (const Witness& w : r.wit)
            push_witness(rep, w);
    }
    rep.worst_margin = max_dip;
    add_metric(rep, "max_output_dip", max_dip);
    return rep;
}

void record_conjecture_margin(ScanReport& report, double margin,
                              const FockDistribution& state, std::size_t sample_index,
                              double candidate_tol) {
    auto it = std::find_if(report.metrics.begin(), report.metrics.end(),
                           [](const auto& m) { return m.first == "min_margin"; });
    if (it == report.metrics.end())
        report.metrics.emplace_back("min_margin", margin);
    else
        it->second = std::min(it->second, margin);
    report.worst_margin = std::max(report.worst_margin, std::max(0.0, -margin));
    if (margin < -candidate_tol) {
        if (std::find(report.flags.begin(), report.flags.end(),
                      "counterexample-candidate") == report.flags.end())
            report.flags.push_back("counterexample-candidate");
        Witness w;
        w.label = "entropy margin below -tolerance at sample " +
                  std::to_string(sample_index);
        w.values = {{"sample", static_cast<double>(sample_index)}, {"margin", margin}};
        w.states = {{"input", state}};
        push_witness(report, std::move(w));
        ++report.violations;
    }
}

ScanReport scan_broadcast_conjecture(const ChannelSpec& spec, double s_target_nats,
                                     std::size_t sample_count, const ScanConfig& cfg,
                                     double candidate_tol) {
    if (!(s_target_nats >= 0.0) || !std::isfinite(s_target_nats))
        throw ParameterOutOfRange("scan_broadcast_conjecture: target entropy must be >= 0");
    const double tau_nbar = mean_photons_for_entropy(s_target_nats);
    const FockDistribution tau =
        thermal_distribution(ThermalSpec{tau_nbar}, cfg.cutoff, cfg.tol);
    const ChannelKernel ker = realize(spec, cfg.cutoff, build_options(cfg));
    const double s_ref = von_neumann_entropy(apply(ker, tau, cfg.tol));

    struct CRes {
        double margin = 0.0;
        std::size_t attempts = 0;
        std::vector<double> state;
    };
    std::vector<CRes> res(sample_count);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(sample_count); ++ii)
        errs.guard([&, ii] {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng(derive_seed(cfg.seed, kStreamConjecture, i));
            std::size_t attempts = 0;
            const FockDistribution rho = sample_passive_with_min_entropy(
                rng, cfg.cutoff, s_target_nats, 100000, &attempts);
            res[i].margin = von_neumann_entropy(apply(ker, rho, cfg.tol)) - s_ref;
            res[i].attempts = attempts;
            res[i].state.assign(rho.probs().begin(), rho.probs().end());
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = "conjecture";
    rep.channel = ker.label();
    rep.config = cfg;
    rep.trials = sample_count;
    add_metric(rep, "target_entropy", s_target_nats);
    add_metric(rep, "tau_mean_photons", tau_nbar);
    add_metric(rep, "tau_output_entropy", s_ref);
    if (tau.tail_mass() > cfg.tol.tail)
        rep.flags.push_back("tau-tail-above-bound");
    std::size_t total_attempts = 0;
    for (std::size_t i = 0; i < sample_count; ++i) {
        total_attempts += res[i].attempts;
        record_conjecture_margin(rep, res[i].margin,
                                 FockDistribution(res[i].state, 0.0, cfg.tol), i,
                                 candidate_tol);
    }
    add_metric(rep, "acceptance_rate",
               total_attempts == 0
                   ? 0.0
                   : static_cast<double>(sample_count) /
                         static_cast<double>(total_attempts));
    return rep;
}

ScanReport find_incomparable_pairs(CurveMode mode, std::size_t sample_count,
                                   const ScanConfig& cfg, std::size_t max_witnesses) {
    struct IRes {
        bool found = false;
        bool thermal = false;
        bool reverify_failed = false;
        Witness wit;
    };
    std::vector<IRes> res(sample_count);
    detail::ErrorCollector errs;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(sample_count); ++ii)
        errs.guard([&, ii] {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng(derive_seed(cfg.seed, kStreamIncomparable, i));
            const FockDistribution a = sample_diagonal(rng, cfg.cutoff);
            const bool thermal_trial = (i % 2) == 1;
            const FockDistribution b =
                thermal_trial
                    ? truncated_thermal(0.05 + 2.95 * rng.uniform(), cfg.cutoff, cfg.tol)
                    : sample_diagonal(rng, cfg.cutoff);
            const ComparisonOutcome oc = mode == CurveMode::FockOrder
                                             ? compare_fock_majorization(a, b, cfg.tol)
                                             : compare_majorization(a, b, cfg.tol);
            if (oc.verdict != Verdict::Incomparable)
                return;
            // Independently confirm both witness indices on the raw curves.
            const PartialSumCurve ca = partial_sums(a, mode);
            const PartialSumCurve cb = partial_sums(b, mode);
            const std::size_t up = *oc.witness_up;
            const std::size_t down = *oc.witness_down;
            const bool confirmed =
                up < ca.sums.size() && down < ca.sums.size() &&
                ca.sums[up] - cb.sums[up] > cfg.tol.cmp &&
                ca.sums[down] - cb.sums[down] < -cfg.tol.cmp;
            IRes& out = res[i];
            if (!confirmed) {
                out.reverify_failed = true;
                return;
            }
            out.found = true;
            out.thermal = thermal_trial;
            out.wit.label = "incomparable pair at trial " + std::to_string(i);
            out.wit.values = {{"trial", static_cast<double>(i)},
                              {"witness_up", static_cast<double>(up)},
                              {"witness_down", static_cast<double>(down)},
                              {"margin", oc.margin},
                              {"thermal_member", thermal_trial ? 1.0 : 0.0}};
            out.wit.states = {{"first", a}, {"second", b}};
        });
    errs.rethrow();

    ScanReport rep;
    rep.name = mode == CurveMode::FockOrder ? "incomparable-fock"
                                            : "incomparable-sorted";
    rep.channel = "none";
    rep.config = cfg;
    rep.trials = sample_count;
    std::size_t total_found = 0, thermal_found = 0, reverify_failures = 0;
    std::ptrdiff_t first_thermal = -1;
    for (std::size_t i = 0; i < sample_count; ++i) {
        reverify_failures += res[i].reverify_failed ? 1 : 0;
        if (!res[i].found)
            continue;
        ++total_found;
        if (res[i].thermal) {
            ++thermal_found;
            if (first_thermal < 0)
                first_thermal = static_cast<std::ptrdiff_t>(i);
        }
    }
    if (total_found == 0)
        throw SearchExhausted("find_incomparable_pairs: no incomparable pair in " +
                              std::to_string(sample_count) + " trials");
    // Store findings in trial order, but make sure a thermal-involving
    // witness survives the cap when one exists at all.
    const std::size_t cap = std::max<std::size_t>(max_witnesses, 1);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < sample_count && keep.size() < cap; ++i)
        if (res[i].found)
            keep.push_back(i);
    if (first_thermal >= 0) {
        const std::size_t ft = static_cast<std::size_t>(first_thermal);
        if (std::find(keep.begin(), keep.end(), ft) == keep.end())
            keep.back() = ft;
    }
    for (std::size_t i : keep)
        rep.witnesses.push_back(res[i].wit);
    if (total_found > rep.witnesses.size())
        rep.flags.push_back("witness-cap-reached");
    rep.violations = total_found;
    add_metric(rep, "total_found", static_cast<double>(total_found));
    add_metric(rep, "thermal_found", static_cast<double>(thermal_found));
    add_metric(rep, "reverify_failures", static_cast<double>(reverify_failures));
    return rep;
}

std::vector<ScanReport> verify_all(const ChannelSpec& spec, std::size_t k_max,
                                   std::size_t n_max, std::size_t sample_count,
                                   std::size_t pair_count, const ScanConfig& cfg) {
    std::vector<ScanReport> reports;
    reports.push_back(verify_ladder(spec, k_max, n_max, cfg));
    reports.push_back(verify_passive_preservation(spec, sample_count, cfg));
    reports.push_back(verify_dual_ladder_criterion(spec, k_max, n_max, sample_count, cfg));
    reports.push_back(verify_fock_preservation(spec, pair_count, cfg));
    reports.push_back(
        verify_majorization_preservation_passive(spec, pair_count, cfg));
    reports.push_back(verify_passive_output_dominance(spec, sample_count, cfg));
    return reports;
}

} // namespace fockmaj
