#include "ssklab/edgelimit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssklab/common.hpp"
#include "ssklab/overlap.hpp"
#include "ssklab/parallel.hpp"
#include "ssklab/rng.hpp"
#include "ssklab/stats.hpp"

namespace ssklab::edgelimit {

XiEstimate xi_estimate_from(const std::vector<double>& ev, int n_matrix, uint64_t seed,
                            XiEstimator estimator, std::optional<int> cutoff) {
    XiEstimate xe;
    xe.estimator = estimator;
    xe.n_matrix = n_matrix;
    xe.seed = seed;
    const double n = n_matrix;
    if (estimator == XiEstimator::FULL_SPECTRUM) {
        if (static_cast<int>(ev.size()) != n_matrix)
            throw std::invalid_argument("xi_estimate: FULL_SPECTRUM needs the whole spectrum");
        if (n_matrix >= 2 && ev[1] >= ev[0])
            throw degenerate_spectrum("xi_estimate: top gap is degenerate");
        double sum = 0.0;
        for (std::size_t j = 1; j < ev.size(); ++j) sum += 1.0 / (ev[0] - ev[j]);
        xe.value = std::cbrt(n) * (sum / n - 1.0);
        return xe;
    }
    if (!cutoff) throw std::invalid_argument("xi_estimate: CUTOFF needs a cutoff");
    const int c = *cutoff;
    if (c < 1 || c >= n_matrix)
        throw std::invalid_argument("xi_estimate: cutoff must lie in [1, n_matrix)");
    if (static_cast<int>(ev.size()) < c)
        throw std::invalid_argument("xi_estimate: not enough eigenvalues for the cutoff");
    if (c >= 2 && ev[1] >= ev[0])
        throw degenerate_spectrum("xi_estimate: top gap is degenerate");
    xe.cutoff = c;
    const double n23 = std::pow(n, 2.0 / 3.0);
    const double chi1 = n23 * (2.0 - ev[0]);
    double sum = 0.0;
    for (int j = 1; j < c; ++j) {
        const double chij = n23 * (2.0 - ev[j]);
        sum += 1.0 / (chij - chi1);
    }
    const double t_upper = std::pow(1.5 * kPi * c, 2.0 / 3.0);
    xe.value = sum - xi_correction_integral(t_upper);
    return xe;
}

XiEstimate xi_estimate(const SpectrumSample& s, XiEstimator estimator,
                       std::optional<int> cutoff) {
    return xi_estimate_from(s.eigenvalues, s.n, s.seed, estimator, cutoff);
}

std::vector<XiEstimate> xi_trial(int n_matrix, XiEstimator estimator,
                                 const std::vector<int>& cutoffs, uint64_t seed) {
    std::vector<XiEstimate> out;
    if (estimator == XiEstimator::FULL_SPECTRUM) {
        auto ev = linalg::tql_eigenvalues(ensembles::tridiag_goe(n_matrix, seed, true));
        out.push_back(xi_estimate_from(ev, n_matrix, seed, estimator, {}));
        return out;
    }
    if (cutoffs.empty()) throw std::invalid_argument("xi_trial: no cutoffs given");
    const int cmax = *std::max_element(cutoffs.begin(), cutoffs.end());
    auto tri = ensembles::tridiag_goe(n_matrix, seed, true);
    auto top = linalg::sturm_topk(tri, cmax);
    for (int c : cutoffs)
        out.push_back(xi_estimate_from(top, n_matrix, seed, XiEstimator::CUTOFF, c));
    return out;
}

std::vector<int> edge_counts(EnsembleKind kind, int n, const std::vector<double>& t_grid,
                             uint64_t seed) {
    const double n23 = std::pow(n, -2.0 / 3.0);
    std::vector<int> counts(t_grid.size());
    if (kind == EnsembleKind::GOE_ZERO_DIAG) {
        auto sp = ensembles::sample_spectrum(kind, n, seed);
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double thr = 2.0 - t_grid[i] * n23;
            counts[i] = static_cast<int>(std::count_if(
                sp.eigenvalues.begin(), sp.eigenvalues.end(), [&](double l) { return l >= thr; }));
        }
        return counts;
    }
    const auto tri = (kind == EnsembleKind::GUE_DENSE) ? ensembles::tridiag_gue(n, seed, true)
                                                       : ensembles::tridiag_goe(n, seed, true);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        counts[i] = n - linalg::sturm_count_below(tri, 2.0 - t_grid[i] * n23);
    return counts;
}

CountingStats counting_stats(EnsembleKind kind, int n, const std::vector<double>& t_grid,
                             int trials, uint64_t seed, int workers) {
    if (trials < 100) throw std::invalid_argument("counting_stats: need >= 100 trials");
    const double upper = std::pow(n, 2.0 / 3.0 - 0.1);
    for (double t : t_grid)
        if (t < 1.0 || t > upper)
            throw std::invalid_argument("counting_stats: t_grid outside [1, n^{2/3-0.1}]");

    const std::size_t g = t_grid.size();
    std::vector<std::vector<int>> counts(trials);
    parallel::parallel_for(trials, workers, [&](std::size_t t) {
        counts[t] = edge_counts(kind, n, t_grid, rng::derive_seed(seed, t, 0));
    });

    CountingStats cs;
    cs.t_grid = t_grid;
    cs.trials = trials;
    cs.n = n;
    cs.ensemble = kind;
    cs.empirical_mean.resize(g);
    cs.empirical_var.resize(g);
    cs.reference_mean.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        double s1 = 0.0, s2 = 0.0;
        for (int t = 0; t < trials; ++t) {
            s1 += counts[t][i];
            s2 += static_cast<double>(counts[t][i]) * counts[t][i];
        }
        const double m = s1 / trials;
        cs.empirical_mean[i] = m;
        cs.empirical_var[i] = std::max(s2 / trials - m * m, 0.0);
        cs.reference_mean[i] = 2.0 / (3.0 * kPi) * std::pow(t_grid[i], 1.5);
    }
    return cs;
}

FrTrial fr_trial(int n, int k, const std::vector<double>& t_grid, uint64_t seed_goe_n,
                 uint64_t seed_goe_n1, uint64_t seed_gue) {
    // Unnormalized tridiagonal draws; the Forrester-Rains identity
    // GUE_n = Even(GOE_n u GOE_{n+1}) is exact in the raw variables, and the
    // shared sqrt(n) rescaling below keeps it exact.
    auto ea = linalg::tql_eigenvalues(ensembles::tridiag_goe(n, seed_goe_n, false));
    auto eb = linalg::tql_eigenvalues(ensembles::tridiag_goe(n + 1, seed_goe_n1, false));
    auto ec = linalg::tql_eigenvalues(ensembles::tridiag_gue(n, seed_gue, false));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> uni;
    uni.reserve(ea.size() + eb.size());
    uni.insert(uni.end(), ea.begin(), ea.end());
    uni.insert(uni.end(), eb.begin(), eb.end());
    std::sort(uni.begin(), uni.end(), std::greater<double>());
    for (auto& x : uni) x *= scale;
    for (auto& x : ec) x *= scale;

    FrTrial tr;
    tr.decimated.resize(k);
    tr.gue.resize(k);
    for (int i = 0; i < k; ++i) {
        tr.decimated[i] = uni[2 * i + 1];  // 2nd, 4th, ... largest of the union
        tr.gue[i] = ec[i];
    }
    const double n23 = std::pow(n, -2.0 / 3.0);
    for (double t : t_grid) {
        const double thr = 2.0 - t * n23;
        const auto above = [&](const std::vector<double>& v) {
            return static_cast<int>(
                std::count_if(v.begin(), v.end(), [&](double x) { return x >= thr; }));
        };
        tr.cnt_union_half.push_back(above(uni) / 2);
        tr.cnt_gue.push_back(above(ec));
    }
    return tr;
}

FrCheckResult fr_decimation_check(int n, int trials, uint64_t seed, int workers) {
    if (n < 1) throw std::invalid_argument("fr_decimation_check: n must be >= 1");
    if (trials < 1000) throw std::invalid_argument("fr_decimation_check: need >= 1000 trials");

    const int kmax = std::min(5, n);
    const std::vector<double> t_grid = {1.0, 2.0, 4.0};

    std::vector<FrTrial> tr(trials);
    parallel::parallel_for(trials, workers, [&](std::size_t t) {
        tr[t] = fr_trial(n, kmax, t_grid, rng::derive_seed(seed, t, 0),
                         rng::derive_seed(seed, t, 1), rng::derive_seed(seed, t, 2));
    });

    FrCheckResult fr;
    fr.n = n;
    fr.trials = trials;
    fr.counting_t = t_grid;
    for (int k = 0; k < kmax; ++k) {
        std::vector<double> dec(trials), gue(trials);
        for (int t = 0; t < trials; ++t) {
            dec[t] = tr[t].decimated[k];
            gue[t] = tr[t].gue[k];
        }
        fr.per_index_ks.push_back(stats::ks_statistic(dec, gue));
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        std::vector<double> cu(trials), cg(trials);
        for (int t = 0; t < trials; ++t) {
            cu[t] = tr[t].cnt_union_half[i];
            cg[t] = tr[t].cnt_gue[i];
        }
        fr.counting_ks.push_back(stats::ks_statistic(cu, cg));
    }
    return fr;
}

double mainconv_a_value(double beta, int n_overlap, uint64_t seed) {
    auto sp = ensembles::sample_spectrum(EnsembleKind::GOE_ZERO_DIAG, n_overlap, seed);
    auto mom = overlap::overlap_m2_contour(sp, beta);
    const double q = overlap::overlap_q(beta);
    return std::cbrt(static_cast<double>(n_overlap)) * (mom.m2 - q * q);
}

double mainconv_b_value(double beta, int n_airy, uint64_t seed) {
    auto ev = linalg::tql_eigenvalues(ensembles::tridiag_goe(n_airy, seed, true));
    auto xe = xi_estimate_from(ev, n_airy, seed, XiEstimator::FULL_SPECTRUM, {});
    return 2.0 * (beta - 1.0) / (beta * beta) * xe.value;
}

MainconvResult mainconv_test(double beta, int n_overlap, int n_airy, int trials, uint64_t seed,
                             int workers) {
    if (!(beta > 1.0)) throw std::invalid_argument("mainconv_test: beta must be > 1");
    if (n_overlap < 250) throw std::invalid_argument("mainconv_test: n_overlap must be >= 250");
    if (n_airy < 4 * n_overlap)
        throw std::invalid_argument("mainconv_test: n_airy must be >= 4 n_overlap");

    std::vector<double> a(trials), b(trials);
    std::vector<char> a_ok(trials, 0), b_ok(trials, 0);
    parallel::parallel_for(trials, workers, [&](std::size_t t) {
        try {
            a[t] = mainconv_a_value(beta, n_overlap, rng::derive_seed(seed, t, 0));
            a_ok[t] = 1;
        } catch (const std::exception&) {
        }
        try {
            b[t] = mainconv_b_value(beta, n_airy, rng::derive_seed(seed, t, 1));
            b_ok[t] = 1;
        } catch (const std::exception&) {
        }
    });

    MainconvResult res;
    res.beta = beta;
    res.n_overlap = n_overlap;
    res.n_airy = n_airy;
    res.trials = trials;
    for (int t = 0; t < trials; ++t) {
        if (a_ok[t]) res.a_samples.push_back(a[t]);
        if (b_ok[t]) res.b_samples.push_back(b[t]);
        if (!a_ok[t] || !b_ok[t]) ++res.failed_trials;
    }
    if (res.a_samples.empty() || res.b_samples.empty())
        throw numeric_failure("mainconv_test: all trials failed");
    std::vector<double> neg_b(res.b_samples.size());
    for (std::size_t i = 0; i < neg_b.size(); ++i) neg_b[i] = -res.b_samples[i];
    res.ks_same_sign = stats::ks_statistic(res.a_samples, res.b_samples);
    res.ks_flip_sign = stats::ks_statistic(res.a_samples, neg_b);
    res.winner_sign = res.ks_flip_sign < res.ks_same_sign ? -1 : +1;
    return res;
}

}  // namespace ssklab::edgelimit
