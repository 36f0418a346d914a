// Acceptance suite: one quantitative gate per criterion, each printing a
// single PASS/FAIL line with its measured numbers.  Every tolerance is fixed
// here, in code; seeds are pinned so reruns are byte-reproducible.
//
//   acceptance --criterion N      run one criterion (5 also reports 6)
//   acceptance --criterion all    run everything

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "ssklab/edgelimit.hpp"
#include "ssklab/ensembles.hpp"
#include "ssklab/harness.hpp"
#include "ssklab/overlap.hpp"
#include "ssklab/parallel.hpp"
#include "ssklab/rng.hpp"
#include "ssklab/saddle.hpp"
#include "ssklab/spectral.hpp"
#include "ssklab/stats.hpp"
#include "ssklab/zerodiag.hpp"

using namespace ssklab;
using ensembles::EnsembleKind;

namespace {

int g_workers = 2;

struct Line {
    bool pass = true;
    std::ostringstream detail;
};

void report(int id, const Line& line, int& failures) {
    std::printf("ACCEPTANCE %2d %s: %s\n", id, line.pass ? "PASS" : "FAIL",
                line.detail.str().c_str());
    std::fflush(stdout);
    if (!line.pass) ++failures;
}

// 1. All eight keyhole closed forms match quadrature to 1e-8 relative over a
//    12-point (a, b) grid.
Line criterion1() {
    Line out;
    double worst = 0.0;
    for (auto kind :
         {saddle::KeyholeKind::INV_SQRT, saddle::KeyholeKind::SQRT, saddle::KeyholeKind::POW_3_2,
          saddle::KeyholeKind::INV_SQRT_Z2, saddle::KeyholeKind::INV_POW_3_2,
          saddle::KeyholeKind::INV_POW_3_2_Z2, saddle::KeyholeKind::INV_POW_5_2,
          saddle::KeyholeKind::INV_POW_5_2_Z2}) {
        for (double a : {0.5, 1.0, 2.0}) {
            for (double b : {0.0, 0.5, 1.0, 2.0}) {
                const double r = b > 0.0 ? b / 12.0 : 0.25;
                const cplx cf = saddle::keyhole_closed_form(kind, a, b);
                const cplx q =
                    saddle::keyhole_quadrature(saddle::keyhole_integrand(kind, a, b), a, b, r);
                worst = std::max(worst, std::abs(q - cf) / std::abs(cf));
            }
        }
    }
    out.pass = worst <= 1e-8;
    out.detail << "8 kinds x 12-point (a,b) grid, worst relative error " << worst
               << " (tolerance 1e-8)";
    return out;
}

// 2. eta_of_E: leading-order law within (1 + 2|NE|), pi/(N(beta-1)) upper
//    bound, monotone on a 100-point grid.
Line criterion2() {
    Line out;
    double worst_ratio_err = 0.0;
    bool bounds_ok = true, monotone_ok = true;
    for (double beta : {1.5, 2.5}) {
        const int n = 1000;
        const double cb = 1.0 / (beta - 1.0);
        for (double ne : {1e-3, 1e-2, 1e-1}) {
            const double eta = saddle::eta_of_E(-ne / n, beta, n);
            const double ratio = n * eta / std::sqrt(3.0 * cb * ne);
            const double tol = 1.0 + 2.0 * ne;
            if (ratio > tol || ratio < 1.0 / tol) bounds_ok = false;
            worst_ratio_err = std::max(worst_ratio_err, std::fabs(ratio - 1.0));
        }
        for (double ne : {1.0, 10.0}) {
            if (saddle::eta_of_E(-ne / n, beta, n) > kPi / (n * (beta - 1.0)) + 1e-16)
                bounds_ok = false;
        }
        double prev = saddle::eta_of_E(-1e-9, beta, n);
        for (int g = 1; g <= 100; ++g) {
            const double cur = saddle::eta_of_E(-2.0 * g / 100.0, beta, n);
            if (cur < prev - 1e-15) monotone_ok = false;
            prev = cur;
        }
    }
    out.pass = bounds_ok && monotone_ok;
    out.detail << "asymptotic ratio max dev " << worst_ratio_err << ", pi-bound "
               << (bounds_ok ? "ok" : "violated") << ", monotone "
               << (monotone_ok ? "ok" : "violated");
    return out;
}

// 3. n=1 exactness of both contour moments for beta in {1.1, 2, 5}.
Line criterion3() {
    Line out;
    ensembles::SpectrumSample s;
    s.kind = EnsembleKind::GOE_ZERO_DIAG;
    s.n = 1;
    s.seed = 0;
    s.eigenvalues = {0.0};
    double worst = 0.0;
    for (double beta : {1.1, 2.0, 5.0}) {
        worst = std::max(worst, std::fabs(overlap::overlap_m2_contour(s, beta).m2 - 1.0));
        worst = std::max(worst, std::fabs(*overlap::overlap_m4_contour(s, beta).m4 - 1.0));
    }
    out.pass = worst <= 1e-8;
    out.detail << "max |moment - 1| = " << worst << " over beta in {1.1, 2, 5}";
    return out;
}

// 4. Contour vs Gibbs oracle, n in {2,4,8} x beta in {1.2,1.5} x 10 seeds,
//    1e5 MC pairs; >= 95% of the 120 comparisons within 3 SE.
Line criterion4() {
    Line out;
    struct Cell { int n; double beta; };
    std::vector<Cell> cells;
    for (int n : {2, 4, 8})
        for (double beta : {1.2, 1.5}) cells.push_back({n, beta});
    const int seeds = 10;
    std::vector<int> ok2(cells.size() * seeds, 0), ok4(cells.size() * seeds, 0);
    parallel::parallel_for(cells.size() * seeds, g_workers, [&](std::size_t idx) {
        const auto& c = cells[idx / seeds];
        const uint64_t seed = 4000 + idx;
        auto sp = ensembles::sample_spectrum(EnsembleKind::GOE_ZERO_DIAG, c.n, seed);
        auto mc = overlap::gibbs_mc_oracle(sp, c.beta, 100000, rng::derive_seed(41, idx, 1));
        auto ct = overlap::overlap_m4_contour(sp, c.beta);
        ok2[idx] = std::fabs(ct.m2 - mc.m2) <= 3.0 * *mc.se_m2;
        ok4[idx] = std::fabs(*ct.m4 - *mc.m4) <= 3.0 * *mc.se_m4;
    });
    int pass = 0, total = 0;
    for (int v : ok2) { pass += v; ++total; }
    for (int v : ok4) { pass += v; ++total; }
    out.pass = pass >= total * 95 / 100;
    out.detail << pass << "/" << total << " moment comparisons within 3 SE (need >= 95%)";
    return out;
}

// 5 + 6. Expansion sweep at beta = 1.5 over n in {250,...,2000}: slope of the
// median m2 residual in [-1.3, -0.7]; median central4 residual below
// 10 n^{-0.65}.  Event gate F(delta=0.1, eps1=4): the rigidity prefactor
// N^{eps1/10} must clear the half-spacing offset built into the i/N quantile
// convention at these sizes (eps1 this large leaves the gap condition as the
// effective filter).
struct SweepResult {
    std::vector<double> ns, med2, med4;
    std::vector<int> used;
};

SweepResult expansion_sweep() {
    const double beta = 1.5, delta = 0.1, eps1 = 4.0;
    SweepResult sw;
    const std::vector<int> sizes = {250, 500, 1000, 2000};
    const int budget = 70;
    for (int n : sizes) {
        std::vector<double> r2(budget, -1.0), r4(budget, -1.0);
        parallel::parallel_for(budget, g_workers, [&](std::size_t t) {
            auto s = ensembles::sample_spectrum(EnsembleKind::GOE_ZERO_DIAG, n,
                                                rng::derive_seed(56, n, t));
            if (!spectral::event_flags(s, delta, eps1).event_f) return;
            auto ct = overlap::overlap_m4_contour(s, beta);
            auto [ex, rep] = overlap::overlap_expansion(s, beta, delta, eps1, false);
            r2[t] = std::fabs(ct.m2 - ex.m2);
            r4[t] = std::fabs(*ct.central4 - *ex.central4);
        });
        std::vector<double> v2, v4;
        for (int t = 0; t < budget; ++t)
            if (r2[t] >= 0.0) {
                v2.push_back(r2[t]);
                v4.push_back(r4[t]);
            }
        sw.ns.push_back(n);
        sw.used.push_back(static_cast<int>(v2.size()));
        sw.med2.push_back(stats::median(v2));
        sw.med4.push_back(stats::median(v4));
    }
    return sw;
}

void criterion5and6(int& failures) {
    auto sw = expansion_sweep();
    Line l5;
    const double slope = stats::loglog_slope(sw.ns, sw.med2);
    bool enough = true;
    for (int u : sw.used) enough = enough && u >= 50;
    l5.pass = enough && slope >= -1.3 && slope <= -0.7;
    l5.detail << "median |m2_contour - m2_expansion| log-log slope " << slope
              << " (need [-1.3, -0.7]); medians:";
    for (std::size_t i = 0; i < sw.ns.size(); ++i)
        l5.detail << " n=" << sw.ns[i] << " " << sw.med2[i] << " (" << sw.used[i] << " trials)";
    report(5, l5, failures);

    Line l6;
    l6.pass = true;
    l6.detail << "median |central4_contour - central4_expansion| vs 10 n^-0.65:";
    for (std::size_t i = 0; i < sw.ns.size(); ++i) {
        const double thr = 10.0 * std::pow(sw.ns[i], -0.65);
        l6.detail << " n=" << sw.ns[i] << " " << sw.med4[i] << "<=" << thr;
        if (!(sw.med4[i] <= thr)) l6.pass = false;
    }
    report(6, l6, failures);
}

// 7. BLDW surrogate mean equals term_linear within 3 SE on 10 spectra.
Line criterion7() {
    Line out;
    const double beta = 1.5;
    const int draws = 100000, n = 200;
    int ok = 0;
    double worst_z = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto s = ensembles::sample_spectrum(EnsembleKind::GOE_ZERO_DIAG, n, 7000 + t);
        const auto st = spectral::edge_statistics(s, beta);
        const double term_linear =
            2.0 * (beta - 1.0) / (beta * beta) * (st.m_tilde + 1.0);
        auto d = overlap::bldw_heuristic(s, beta, draws, rng::derive_seed(7, t, 0));
        const double mean = stats::mean(d);
        const double se = std::sqrt(stats::variance(d) / draws);
        const double z = std::fabs(mean - term_linear) / se;
        worst_z = std::max(worst_z, z);
        ok += z <= 3.0;
    }
    out.pass = ok == 10;
    out.detail << ok << "/10 spectra with |mean - term_linear| <= 3 SE (worst z = "
               << worst_z << ")";
    return out;
}

// 8. Edge counting: GOE n=4000 mean offset <= 1.5 and var <= 3(log T + 1) on
//    T in [2,10]; GUE n=2000 var at s=20 within [0.5, 2] of (3/4pi^2) log s.
Line criterion8() {
    Line out;
    std::vector<double> grid;
    for (int t = 2; t <= 10; ++t) grid.push_back(t);
    auto goe = edgelimit::counting_stats(EnsembleKind::GOE_TRIDIAG, 4000, grid, 1000, 81,
                                         g_workers);
    double worst_mean = 0.0, worst_var_ratio = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst_mean = std::max(worst_mean,
                              std::fabs(goe.empirical_mean[i] - goe.reference_mean[i]));
        worst_var_ratio = std::max(worst_var_ratio,
                                   goe.empirical_var[i] / (3.0 * (std::log(grid[i]) + 1.0)));
    }
    auto gue =
        edgelimit::counting_stats(EnsembleKind::GUE_DENSE, 2000, {20.0}, 2000, 82, g_workers);
    const double ref = 3.0 / (4.0 * kPi * kPi) * std::log(20.0);
    const double ratio = gue.empirical_var[0] / ref;
    out.pass = worst_mean <= 1.5 && worst_var_ratio <= 1.0 && ratio >= 0.5 && ratio <= 2.0;
    out.detail << "GOE worst |mean - ref| = " << worst_mean
               << " (<= 1.5), worst var/(3(logT+1)) = " << worst_var_ratio
               << " (<= 1), GUE var ratio = " << ratio << " (in [0.5, 2])";
    return out;
}

// 9. Forrester-Rains: per-index KS <= 0.02 at n=2 (1e5 trials), <= 0.04 at
//    n=50 (1e4 trials); counting-law KS <= 0.02.
Line criterion9() {
    Line out;
    auto fr2 = edgelimit::fr_decimation_check(2, 100000, 91, g_workers);
    auto fr50 = edgelimit::fr_decimation_check(50, 10000, 92, g_workers);
    double worst2 = 0.0, worst50 = 0.0, worst_cnt = 0.0;
    for (double k : fr2.per_index_ks) worst2 = std::max(worst2, k);
    for (double k : fr50.per_index_ks) worst50 = std::max(worst50, k);
    for (double k : fr2.counting_ks) worst_cnt = std::max(worst_cnt, k);
    for (double k : fr50.counting_ks) worst_cnt = std::max(worst_cnt, k);
    out.pass = worst2 <= 0.02 && worst50 <= 0.04 && worst_cnt <= 0.02;
    out.detail << "per-index KS: n=2 worst " << worst2 << " (<= 0.02), n=50 worst " << worst50
               << " (<= 0.04); counting KS worst " << worst_cnt << " (<= 0.02)";
    return out;
}

// 10. Xi cutoff stabilization at n=8000: |Xi(200) - Xi(100)| <= 0.3 in >= 90%
//     of 200 trials.
Line criterion10() {
    Line out;
    const int trials = 200;
    std::vector<double> diff(trials);
    parallel::parallel_for(trials, g_workers, [&](std::size_t t) {
        auto xs = edgelimit::xi_trial(8000, edgelimit::XiEstimator::CUTOFF, {100, 200},
                                      rng::derive_seed(10, t, 0));
        diff[t] = std::fabs(xs[1].value - xs[0].value);
    });
    int ok = 0;
    for (double d : diff) ok += d <= 0.3;
    out.pass = ok >= trials * 90 / 100;
    out.detail << ok << "/" << trials
               << " trials with |Xi(200) - Xi(100)| <= 0.3 (median |diff| = "
               << stats::median(diff) << ")";
    return out;
}

// 11. Main convergence: min-sign KS <= 0.1 (n=500 vs n_airy=4000, 300 trials,
//     beta=1.5) with a stable winning sign across 3 master seeds.
Line criterion11() {
    Line out;
    double worst = 0.0;
    int first_sign = 0;
    bool sign_stable = true, ks_ok = true;
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        auto mc = edgelimit::mainconv_test(1.5, 500, 4000, 300, seed, g_workers);
        const double best = std::min(mc.ks_same_sign, mc.ks_flip_sign);
        worst = std::max(worst, best);
        if (best > 0.1) ks_ok = false;
        if (first_sign == 0)
            first_sign = mc.winner_sign;
        else if (mc.winner_sign != first_sign)
            sign_stable = false;
        out.detail << "[seed " << seed << ": ks+=" << mc.ks_same_sign
                   << " ks-=" << mc.ks_flip_sign << " sign " << mc.winner_sign << "] ";
    }
    out.pass = ks_ok && sign_stable;
    out.detail << "worst min-KS " << worst << " (<= 0.1), winner sign "
               << (sign_stable ? "stable" : "UNSTABLE");
    return out;
}

// 12. Zero-diagonal coupling: p99 of |l1(H) - l1(M)| <= n^{-0.8} at n=1000
//     (200 trials); median log-log slope over n in {250,...,2000} <= -0.7.
Line criterion12() {
    Line out;
    const int trials = 200;
    std::vector<double> d1(trials);
    parallel::parallel_for(trials, g_workers, [&](std::size_t t) {
        auto p = ensembles::sample_coupled_pair_topk(1000, rng::derive_seed(12, t, 0), 6);
        d1[t] = std::fabs(p.spectrum_h.eigenvalues[0] - p.spectrum_m.eigenvalues[0]);
    });
    const double p99 = stats::quantile(d1, 0.99);
    const double thr = std::pow(1000.0, -0.8);

    std::vector<double> ns = {250, 500, 1000, 2000}, medians;
    for (double nd : ns) {
        const int n = static_cast<int>(nd);
        const int m = 60;
        std::vector<double> d(m);
        parallel::parallel_for(m, g_workers, [&](std::size_t t) {
            auto p = ensembles::sample_coupled_pair_topk(n, rng::derive_seed(13, n, t), 6);
            d[t] = std::fabs(p.spectrum_h.eigenvalues[0] - p.spectrum_m.eigenvalues[0]);
        });
        medians.push_back(stats::median(d));
    }
    const double slope = stats::loglog_slope(ns, medians);
    out.pass = p99 <= thr && slope <= -0.7;
    out.detail << "p99 |l1(H)-l1(M)| = " << p99 << " vs n^-0.8 = " << thr
               << "; median log-log slope = " << slope << " (<= -0.7)";
    return out;
}

// 13. Helffer-Sjostrand identity on 20 random (n=50 spectrum, bump) pairs.
Line criterion13() {
    Line out;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        auto s = ensembles::sample_spectrum(EnsembleKind::GOE_DENSE, 50, 1300 + t);
        rng::SplitMix64 g(rng::derive_seed(13, t, 1));
        auto b = spectral::bump_function(2.0 * g.uniform01() - 1.0,
                                         0.3 + 0.7 * g.uniform01(), 0.5 + g.uniform01());
        double direct = 0.0;
        for (double l : s.eigenvalues) direct += b.f(l);
        worst = std::max(worst, std::fabs(spectral::hs_trace(s, b, 1e-7) - direct));
    }
    out.pass = worst <= 1e-6;
    out.detail << "worst |hs_trace - direct sum| = " << worst << " over 20 pairs (<= 1e-6)";
    return out;
}

// 14. Byte-identical records and summaries, serial vs 8 workers, across every
//     experiment type the criteria above exercise.
Line criterion14() {
    Line out;
    using harness::Experiment;
    using harness::RunConfig;
    std::vector<RunConfig> configs;
    auto mk = [&](Experiment e) {
        RunConfig c;
        c.experiment = e;
        c.master_seed = 14;
        return c;
    };
    {
        auto c = mk(Experiment::SAMPLE);
        c.ensemble = "goe";
        c.n = 64;
        c.trials = 16;
        configs.push_back(c);
    }
    {
        auto c = mk(Experiment::OVERLAP);
        c.method = "contour";
        c.n = 64;
        c.trials = 8;
        configs.push_back(c);
        c.method = "expansion";
        c.eps1 = 4.0;
        configs.push_back(c);
        c.method = "mc";
        c.n = 6;
        c.trials = 4;
        c.mc_samples = 20000;
        configs.push_back(c);
        c.method = "bldw";
        c.n = 64;
        c.mc_samples = 20000;
        configs.push_back(c);
    }
    {
        auto c = mk(Experiment::XI);
        c.method = "cutoff";
        c.n = 512;
        c.trials = 8;
        c.grid = {20, 40};
        configs.push_back(c);
        c.method = "full";
        c.grid.clear();
        configs.push_back(c);
    }
    {
        auto c = mk(Experiment::COUNTING);
        c.ensemble = "goe-tridiag";
        c.n = 512;
        c.trials = 120;
        c.grid = {2, 4, 8};
        configs.push_back(c);
    }
    {
        auto c = mk(Experiment::FR_CHECK);
        c.n = 3;
        c.trials = 1000;
        configs.push_back(c);
    }
    {
        auto c = mk(Experiment::ZERODIAG);
        c.method = "ev";
        c.n = 128;
        c.trials = 12;
        c.k_max = 5;
        configs.push_back(c);
        c.method = "stieltjes";
        c.trials = 6;
        c.grid = {0.0, 0.5};
        c.eta = 0.05;
        configs.push_back(c);
    }
    {
        auto c = mk(Experiment::MAINCONV);
        c.n = 250;
        c.n_airy = 1000;
        c.beta = 1.5;
        c.trials = 4;
        configs.push_back(c);
    }
    {
        auto c = mk(Experiment::GAP_TAIL);
        c.ensemble = "goe-tridiag";
        c.n = 128;
        c.trials = 150;
        c.grid = {0.25, 1.0, 4.0};
        configs.push_back(c);
    }

    int mismatches = 0;
    for (auto& cfg : configs) {
        auto render = [&](int workers) {
            RunConfig c = cfg;
            c.workers = workers;
            auto res = harness::run_experiment(c);
            std::ostringstream os;
            harness::write_jsonl(c, res, os);
            os << res.summary.dump();
            return os.str();
        };
        const std::string serial = render(1);
        if (serial != render(8) || serial != render(1)) ++mismatches;
    }
    out.pass = mismatches == 0;
    out.detail << configs.size() - mismatches << "/" << configs.size()
               << " experiment configs byte-identical (serial vs 8 workers vs rerun)";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::string which = "all";
    for (int i = 1; i + 1 <= argc - 1; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0) which = argv[i + 1];
    if (const char* w = std::getenv("SSKLAB_WORKERS")) g_workers = std::max(1, std::atoi(w));

    int failures = 0;
    auto want = [&](int id) { return which == "all" || which == std::to_string(id); };

    if (want(1)) report(1, criterion1(), failures);
    if (want(2)) report(2, criterion2(), failures);
    if (want(3)) report(3, criterion3(), failures);
    if (want(4)) report(4, criterion4(), failures);
    if (want(5) || want(6)) criterion5and6(failures);
    if (want(7)) report(7, criterion7(), failures);
    if (want(8)) report(8, criterion8(), failures);
    if (want(9)) report(9, criterion9(), failures);
    if (want(10)) report(10, criterion10(), failures);
    if (want(11)) report(11, criterion11(), failures);
    if (want(12)) report(12, criterion12(), failures);
    if (want(13)) report(13, criterion13(), failures);
    if (want(14)) report(14, criterion14(), failures);

    return failures == 0 ? 0 : 1;
}
