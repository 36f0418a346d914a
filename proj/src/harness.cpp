#include "ssklab/harness.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ssklab/edgelimit.hpp"
#include "ssklab/ensembles.hpp"
#include "ssklab/overlap.hpp"
#include "ssklab/parallel.hpp"
#include "ssklab/rng.hpp"
#include "ssklab/spectral.hpp"
#include "ssklab/zerodiag.hpp"

namespace ssklab::harness {

using nlohmann::json;

const char* experiment_name(Experiment e) {
    switch (e) {
        case Experiment::SAMPLE: return "sample";
        case Experiment::OVERLAP: return "overlap";
        case Experiment::XI: return "xi";
        case Experiment::COUNTING: return "counting";
        case Experiment::FR_CHECK: return "fr-check";
        case Experiment::ZERODIAG: return "zerodiag";
        case Experiment::MAINCONV: return "mainconv";
        case Experiment::GAP_TAIL: return "gap-tail";
    }
    return "?";
}

Experiment experiment_from_name(const std::string& name) {
    for (Experiment e : {Experiment::SAMPLE, Experiment::OVERLAP, Experiment::XI,
                         Experiment::COUNTING, Experiment::FR_CHECK, Experiment::ZERODIAG,
                         Experiment::MAINCONV, Experiment::GAP_TAIL})
        if (name == experiment_name(e)) return e;
    throw config_error("unknown experiment: " + name);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        // comma-separated list
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw config_error("grid must be a:b:step or v1,v2,...");
    const double a = std::stod(text.substr(0, c1));
    const double b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(text.substr(c2 + 1));
    if (step <= 0.0) throw config_error("grid step must be positive");
    for (double x = a; x <= b + 1e-12 * std::fabs(step); x += step) out.push_back(x);
    return out;
}

namespace {

void validate(const RunConfig& cfg) {
    if (cfg.trials < 0) throw config_error("trials must be >= 0");
    if (cfg.n < 1) throw config_error("n must be >= 1");
    if (cfg.workers < 1) throw config_error("workers must be >= 1");
    switch (cfg.experiment) {
        case Experiment::SAMPLE:
            ensembles::kind_from_name(cfg.ensemble);
            break;
        case Experiment::OVERLAP:
            if (cfg.method != "contour" && cfg.method != "expansion" && cfg.method != "mc" &&
                cfg.method != "bldw")
                throw config_error("overlap method must be contour|expansion|mc|bldw");
            if (cfg.method == "mc") {
                if (cfg.n > 24) throw config_error("mc oracle requires n <= 24");
                if (cfg.mc_samples < 1000) throw config_error("mc needs >= 1000 samples");
            }
            if (cfg.method != "mc" && !(cfg.beta > 1.0))
                throw config_error("overlap requires beta > 1");
            if (cfg.method == "expansion" &&
                !(cfg.delta > 0.0 && cfg.delta < 1.0 / 3.0 && cfg.eps1 > 0.0))
                throw config_error("expansion requires 0 < delta < 1/3 and eps1 > 0");
            break;
        case Experiment::XI: {
            if (cfg.method != "full" && cfg.method != "cutoff")
                throw config_error("xi method must be full|cutoff");
            if (cfg.method == "cutoff") {
                std::vector<double> cuts = cfg.grid;
                if (cuts.empty()) cuts.push_back(cfg.cutoff);
                for (double c : cuts)
                    if (c < 1 || c >= cfg.n) throw config_error("cutoff must lie in [1, n)");
            }
            break;
        }
        case Experiment::COUNTING: {
            if (cfg.trials < 100) throw config_error("counting needs >= 100 trials");
            const double upper = std::pow(cfg.n, 2.0 / 3.0 - 0.1);
            if (cfg.grid.empty()) throw config_error("counting needs a t-grid");
            for (double t : cfg.grid)
                if (t < 1.0 || t > upper)
                    throw config_error("counting grid outside [1, n^{2/3-0.1}]");
            break;
        }
        case Experiment::FR_CHECK:
            if (cfg.trials < 1000) throw config_error("fr-check needs >= 1000 trials");
            break;
        case Experiment::ZERODIAG:
            if (cfg.method != "ev" && cfg.method != "stieltjes")
                throw config_error("zerodiag method must be ev|stieltjes");
            if (cfg.method == "ev") {
                const int cap =
                    std::max(1, static_cast<int>(std::floor(std::pow(cfg.n, 0.05)))) + 4;
                if (cfg.k_max < 1 || cfg.k_max > cap)
                    throw config_error("k_max outside [1, floor(n^{1/20})+4]");
            }
            break;
        case Experiment::MAINCONV: {
            if (!(cfg.beta > 1.0)) throw config_error("mainconv requires beta > 1");
            if (cfg.n < 250) throw config_error("mainconv requires n >= 250");
            const int na = cfg.n_airy > 0 ? cfg.n_airy : 4 * cfg.n;
            if (na < 4 * cfg.n) throw config_error("n_airy must be >= 4n");
            break;
        }
        case Experiment::GAP_TAIL:
            if (cfg.trials < 100) throw config_error("gap-tail needs >= 100 trials");
            if (cfg.grid.empty()) throw config_error("gap-tail needs an s-grid");
            if (cfg.n < 2) throw config_error("gap-tail needs n >= 2");
            break;
    }
}

json spectrum_json(const ensembles::SpectrumSample& s) {
    return json{{"kind", ensembles::kind_name(s.kind)},
                {"n", s.n},
                {"seed", s.seed},
                {"eigenvalues", s.eigenvalues}};
}

json moments_json(const overlap::OverlapMoments& m) {
    json j{{"method", overlap::method_name(m.method)},
           {"m2", m.m2},
           {"err", m.err},
           {"beta", m.beta},
           {"n", m.n}};
    if (m.m4) j["m4"] = *m.m4;
    if (m.central4) j["central4"] = *m.central4;
    if (m.abs1) j["abs1"] = *m.abs1;
    if (m.se_m2) j["se_m2"] = *m.se_m2;
    if (m.se_m4) j["se_m4"] = *m.se_m4;
    if (m.se_abs1) j["se_abs1"] = *m.se_abs1;
    return j;
}

// Trial bodies -------------------------------------------------------------

json run_sample_trial(const RunConfig& cfg, uint64_t seed) {
    auto s = ensembles::sample_spectrum(ensembles::kind_from_name(cfg.ensemble), cfg.n, seed);
    return spectrum_json(s);
}

json run_overlap_trial(const RunConfig& cfg, uint64_t seed) {
    json out;
    auto s = ensembles::sample_spectrum(ensembles::EnsembleKind::GOE_ZERO_DIAG, cfg.n, seed);
    if (cfg.method == "contour") {
        out = moments_json(cfg.n <= 4096 ? overlap::overlap_m4_contour(s, cfg.beta)
                                         : overlap::overlap_m2_contour(s, cfg.beta));
    } else if (cfg.method == "expansion") {
        auto [mom, rep] = overlap::overlap_expansion(s, cfg.beta, cfg.delta, cfg.eps1, true);
        out = moments_json(mom);
        out["report"] = {{"q2", rep.q2},
                         {"term_linear", rep.term_linear},
                         {"term_mprime", rep.term_mprime},
                         {"term_square", rep.term_square},
                         {"predicted_error_scale", rep.predicted_error_scale}};
    } else if (cfg.method == "mc") {
        out = moments_json(
            overlap::gibbs_mc_oracle(s, cfg.beta, cfg.mc_samples, rng::mix64(seed ^ 0x5eed)));
    } else {  // bldw
        auto draws =
            overlap::bldw_heuristic(s, cfg.beta, cfg.mc_samples, rng::mix64(seed ^ 0xb1d));
        const auto st = spectral::edge_statistics(s, cfg.beta);
        out["mean"] = stats::mean(draws);
        out["var"] = stats::variance(draws);
        out["term_linear"] =
            2.0 * (cfg.beta - 1.0) / (cfg.beta * cfg.beta) * (st.m_tilde + 1.0);
        out["n_draws"] = cfg.mc_samples;
    }
    if (cfg.n >= 2) {
        const auto fl = spectral::event_flags(s, cfg.delta, cfg.eps1);
        out["event_f"] = fl.event_f;
        out["gap_ok"] = fl.gap_ok;
        out["rigidity_ok"] = fl.rigidity_ok;
    }
    return out;
}

std::vector<int> xi_cutoffs(const RunConfig& cfg) {
    std::vector<int> cuts;
    for (double c : cfg.grid) cuts.push_back(static_cast<int>(c));
    if (cuts.empty()) cuts.push_back(cfg.cutoff);
    return cuts;
}

json run_xi_trial(const RunConfig& cfg, uint64_t seed) {
    json out;
    if (cfg.method == "full") {
        auto xs = edgelimit::xi_trial(cfg.n, edgelimit::XiEstimator::FULL_SPECTRUM, {}, seed);
        out["full"] = xs[0].value;
    } else {
        auto cuts = xi_cutoffs(cfg);
        auto xs = edgelimit::xi_trial(cfg.n, edgelimit::XiEstimator::CUTOFF, cuts, seed);
        json vals = json::object();
        for (std::size_t i = 0; i < xs.size(); ++i)
            vals[std::to_string(cuts[i])] = xs[i].value;
        out["cutoff"] = vals;
    }
    return out;
}

json run_counting_trial(const RunConfig& cfg, uint64_t seed) {
    auto counts = edgelimit::edge_counts(ensembles::kind_from_name(cfg.ensemble), cfg.n,
                                         cfg.grid, seed);
    return json{{"counts", counts}};
}

json run_fr_trial(const RunConfig& cfg, uint64_t master, std::size_t t) {
    const int kmax = std::min(5, cfg.n);
    const std::vector<double> t_grid = cfg.grid.empty() ? std::vector<double>{1.0, 2.0, 4.0}
                                                        : cfg.grid;
    auto tr = edgelimit::fr_trial(cfg.n, kmax, t_grid, rng::derive_seed(master, t, 0),
                                  rng::derive_seed(master, t, 1), rng::derive_seed(master, t, 2));
    return json{{"decimated", tr.decimated},
                {"gue", tr.gue},
                {"cnt_union_half", tr.cnt_union_half},
                {"cnt_gue", tr.cnt_gue}};
}

json run_zerodiag_trial(const RunConfig& cfg, uint64_t seed) {
    if (cfg.method == "ev") {
        auto pair = ensembles::sample_coupled_pair_topk(cfg.n, seed, cfg.k_max + 3);
        auto rep = zerodiag::ev_diff_report(pair, cfg.k_max);
        return json{{"diffs", rep.per_index_diffs}, {"max_abs_diag", rep.max_abs_diag}};
    }
    auto pair = ensembles::sample_coupled_pair(cfg.n, seed);
    std::vector<cplx> grid;
    for (double e : cfg.grid) grid.emplace_back(e, cfg.eta);
    if (grid.empty()) grid.emplace_back(0.5, cfg.eta);
    auto diffs = zerodiag::stieltjes_diff(pair, grid, cfg.delta);
    json re = json::array(), im = json::array(), ee = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ee.push_back(grid[i].real());
        re.push_back(diffs[i].real());
        im.push_back(diffs[i].imag());
    }
    return json{{"E", ee}, {"re", re}, {"im", im}, {"eta", cfg.eta}};
}

json run_mainconv_trial(const RunConfig& cfg, uint64_t master, std::size_t t) {
    const int na = cfg.n_airy > 0 ? cfg.n_airy : 4 * cfg.n;
    const double a = edgelimit::mainconv_a_value(cfg.beta, cfg.n, rng::derive_seed(master, t, 0));
    const double b = edgelimit::mainconv_b_value(cfg.beta, na, rng::derive_seed(master, t, 1));
    return json{{"a", a}, {"b", b}};
}

json run_gap_tail_trial(const RunConfig& cfg, uint64_t seed) {
    auto kind = ensembles::kind_from_name(cfg.ensemble);
    std::vector<double> top2;
    if (kind == ensembles::EnsembleKind::GOE_TRIDIAG) {
        top2 = linalg::sturm_topk(ensembles::tridiag_goe(cfg.n, seed, true), 2);
    } else {
        auto s = ensembles::sample_spectrum(kind, cfg.n, seed);
        top2 = {s.eigenvalues[0], s.eigenvalues[1]};
    }
    const double scaled = std::pow(cfg.n, 2.0 / 3.0) * (top2[0] - top2[1]);
    return json{{"l1", top2[0]}, {"l2", top2[1]}, {"gap_scaled", scaled}};
}

// Summaries -------------------------------------------------------------------

json summarize(const RunConfig& cfg, const std::vector<TrialRecord>& recs) {
    json s;
    int failed = 0;
    for (const auto& r : recs) failed += r.failed;
    s["trials"] = static_cast<int>(recs.size());
    s["failed"] = failed;

    auto collect = [&](const char* key) {
        std::vector<double> v;
        for (const auto& r : recs)
            if (!r.failed && r.outputs.contains(key)) v.push_back(r.outputs[key].get<double>());
        return v;
    };

    switch (cfg.experiment) {
        case Experiment::SAMPLE: {
            std::vector<double> l1;
            for (const auto& r : recs)
                if (!r.failed) l1.push_back(r.outputs["eigenvalues"][0].get<double>());
            if (!l1.empty()) {
                s["mean_lambda1"] = stats::mean(l1);
                s["median_lambda1"] = stats::median(l1);
            }
            break;
        }
        case Experiment::OVERLAP: {
            for (const char* key : {"m2", "m4", "central4", "abs1"}) {
                auto v = collect(key);
                if (!v.empty()) {
                    s[std::string("mean_") + key] = stats::mean(v);
                    s[std::string("median_") + key] = stats::median(v);
                }
            }
            int event_count = 0, with_flags = 0;
            for (const auto& r : recs)
                if (!r.failed && r.outputs.contains("event_f")) {
                    ++with_flags;
                    event_count += r.outputs["event_f"].get<bool>() ? 1 : 0;
                }
            if (with_flags > 0)
                s["event_f_rate"] = static_cast<double>(event_count) / with_flags;
            break;
        }
        case Experiment::XI: {
            if (cfg.method == "full") {
                auto v = collect("full");
                if (!v.empty()) {
                    s["mean"] = stats::mean(v);
                    s["var"] = stats::variance(v);
                }
            } else {
                for (int c : xi_cutoffs(cfg)) {
                    std::vector<double> v;
                    for (const auto& r : recs)
                        if (!r.failed)
                            v.push_back(r.outputs["cutoff"][std::to_string(c)].get<double>());
                    if (!v.empty()) s["mean_" + std::to_string(c)] = stats::mean(v);
                }
            }
            break;
        }
        case Experiment::COUNTING: {
            const std::size_t g = cfg.grid.size();
            json mean = json::array(), var = json::array(), ref = json::array();
            for (std::size_t i = 0; i < g; ++i) {
                std::vector<double> v;
                for (const auto& r : recs)
                    if (!r.failed) v.push_back(r.outputs["counts"][i].get<double>());
                mean.push_back(v.empty() ? 0.0 : stats::mean(v));
                var.push_back(v.empty() ? 0.0 : stats::variance(v));
                ref.push_back(2.0 / (3.0 * kPi) * std::pow(cfg.grid[i], 1.5));
            }
            s["t_grid"] = cfg.grid;
            s["empirical_mean"] = mean;
            s["empirical_var"] = var;
            s["reference_mean"] = ref;
            break;
        }
        case Experiment::FR_CHECK: {
            const int kmax = std::min(5, cfg.n);
            json ks = json::array();
            for (int k = 0; k < kmax; ++k) {
                std::vector<double> dec, gue;
                for (const auto& r : recs)
                    if (!r.failed) {
                        dec.push_back(r.outputs["decimated"][k].get<double>());
                        gue.push_back(r.outputs["gue"][k].get<double>());
                    }
                if (!dec.empty()) ks.push_back(stats::ks_statistic(dec, gue));
            }
            s["per_index_ks"] = ks;
            const std::vector<double> t_grid =
                cfg.grid.empty() ? std::vector<double>{1.0, 2.0, 4.0} : cfg.grid;
            json cks = json::array();
            for (std::size_t i = 0; i < t_grid.size(); ++i) {
                std::vector<double> cu, cg;
                for (const auto& r : recs)
                    if (!r.failed) {
                        cu.push_back(r.outputs["cnt_union_half"][i].get<double>());
                        cg.push_back(r.outputs["cnt_gue"][i].get<double>());
                    }
                if (!cu.empty()) cks.push_back(stats::ks_statistic(cu, cg));
            }
            s["counting_t"] = t_grid;
            s["counting_ks"] = cks;
            break;
        }
        case Experiment::ZERODIAG: {
            if (cfg.method == "ev") {
                std::vector<double> d1;
                for (const auto& r : recs)
                    if (!r.failed) d1.push_back(r.outputs["diffs"][0].get<double>());
                if (!d1.empty()) {
                    s["median_diff1"] = stats::median(d1);
                    s["p99_diff1"] = stats::quantile(d1, 0.99);
                }
            }
            break;
        }
        case Experiment::MAINCONV: {
            auto a = collect("a"), b = collect("b");
            if (!a.empty() && !b.empty()) {
                std::vector<double> nb(b.size());
                for (std::size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
                const double ks_same = stats::ks_statistic(a, b);
                const double ks_flip = stats::ks_statistic(a, nb);
                s["ks_same_sign"] = ks_same;
                s["ks_flip_sign"] = ks_flip;
                s["winner_sign"] = ks_flip < ks_same ? -1 : 1;
            }
            break;
        }
        case Experiment::GAP_TAIL: {
            auto gaps = collect("gap_scaled");
            json cdf = json::array(), se = json::array();
            for (double sv : cfg.grid) {
                int cnt = 0;
                for (double g : gaps) cnt += (g < sv);
                const double p = gaps.empty() ? 0.0 : static_cast<double>(cnt) / gaps.size();
                cdf.push_back(p);
                se.push_back(gaps.empty() ? 0.0
                                          : std::sqrt(std::max(p * (1.0 - p), 0.0) / gaps.size()));
            }
            s["s_grid"] = cfg.grid;
            s["cdf"] = cdf;
            s["std_error"] = se;
            break;
        }
    }
    return s;
}

}  // namespace

json config_echo(const RunConfig& cfg) {
    json j{{"experiment", experiment_name(cfg.experiment)},
           {"n", cfg.n},
           {"beta", cfg.beta},
           {"trials", cfg.trials},
           {"master_seed", cfg.master_seed},
           {"method", cfg.method},
           {"ensemble", cfg.ensemble},
           {"delta", cfg.delta},
           {"eps1", cfg.eps1},
           {"cutoff", cfg.cutoff},
           {"mc_samples", cfg.mc_samples},
           {"k_max", cfg.k_max},
           {"eta", cfg.eta},
           {"n_airy", cfg.n_airy}};
    if (!cfg.grid.empty()) j["grid"] = cfg.grid;
    return j;
}

RunResult run_experiment(const RunConfig& cfg) {
    validate(cfg);
    RunResult res;
    res.records.resize(cfg.trials);
    const int workers = cfg.workers;

    parallel::parallel_for(cfg.trials, workers, [&](std::size_t t) {
        TrialRecord& rec = res.records[t];
        rec.trial_index = static_cast<int>(t);
        rec.derived_seed = rng::derive_seed(cfg.master_seed, t, 0);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            switch (cfg.experiment) {
                case Experiment::SAMPLE: rec.outputs = run_sample_trial(cfg, rec.derived_seed); break;
                case Experiment::OVERLAP: rec.outputs = run_overlap_trial(cfg, rec.derived_seed); break;
                case Experiment::XI: rec.outputs = run_xi_trial(cfg, rec.derived_seed); break;
                case Experiment::COUNTING:
                    rec.outputs = run_counting_trial(cfg, rec.derived_seed);
                    break;
                case Experiment::FR_CHECK:
                    rec.outputs = run_fr_trial(cfg, cfg.master_seed, t);
                    break;
                case Experiment::ZERODIAG:
                    rec.outputs = run_zerodiag_trial(cfg, rec.derived_seed);
                    break;
                case Experiment::MAINCONV:
                    rec.outputs = run_mainconv_trial(cfg, cfg.master_seed, t);
                    break;
                case Experiment::GAP_TAIL:
                    rec.outputs = run_gap_tail_trial(cfg, rec.derived_seed);
                    break;
            }
        } catch (const std::exception& ex) {
            rec.failed = true;
            rec.outputs = json{{"error", ex.what()}};
        }
        rec.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
    });

    int failed = 0;
    for (const auto& r : res.records) failed += r.failed;
    if (cfg.trials > 0 && failed == cfg.trials)
        throw all_trials_failed("run_experiment: every trial failed");
    res.summary = summarize(cfg, res.records);
    return res;
}

void write_jsonl(const RunConfig& cfg, const RunResult& result, std::ostream& os) {
    const json inputs = config_echo(cfg);
    for (const auto& rec : result.records) {
        json line{{"schema_version", kSchemaVersion},
                  {"experiment", experiment_name(cfg.experiment)},
                  {"trial_index", rec.trial_index},
                  {"derived_seed", rec.derived_seed},
                  {"inputs", inputs},
                  {"outputs", rec.outputs},
                  {"failed", rec.failed}};
        if (cfg.timings) line["wall_time_ms"] = rec.wall_time_ms;
        os << line.dump() << '\n';
    }
}

bool write_summary_csv(const RunConfig& cfg, const RunResult& result, std::ostream& os) {
    const json& s = result.summary;
    if (cfg.experiment == Experiment::COUNTING) {
        os << "T,empirical_mean,empirical_var,reference_mean\n";
        for (std::size_t i = 0; i < cfg.grid.size(); ++i)
            os << cfg.grid[i] << ',' << s["empirical_mean"][i].get<double>() << ','
               << s["empirical_var"][i].get<double>() << ','
               << s["reference_mean"][i].get<double>() << '\n';
        return true;
    }
    if (cfg.experiment == Experiment::GAP_TAIL) {
        os << "s,cdf,std_error\n";
        for (std::size_t i = 0; i < cfg.grid.size(); ++i)
            os << cfg.grid[i] << ',' << s["cdf"][i].get<double>() << ','
               << s["std_error"][i].get<double>() << '\n';
        return true;
    }
    return false;
}

}  // namespace ssklab::harness
