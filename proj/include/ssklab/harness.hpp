#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssklab/stats.hpp"

namespace ssklab::harness {

inline constexpr const char* kSchemaVersion = "1";

enum class Experiment { SAMPLE, OVERLAP, XI, COUNTING, FR_CHECK, ZERODIAG, MAINCONV, GAP_TAIL };

const char* experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

// Invalid configuration; maps to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every trial failed; maps to exit code 4.
class all_trials_failed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Experiment experiment = Experiment::SAMPLE;
    int n = 100;
    double beta = 1.5;
    int trials = 10;
    uint64_t master_seed = 1;
    int workers = 1;
    std::string method = "contour";    // overlap: contour|expansion|mc|bldw; zerodiag: ev|stieltjes
    std::string ensemble = "goe";      // sample / counting / gap-tail kind
    double delta = 0.1;
    double eps1 = 0.05;
    int cutoff = 100;
    int mc_samples = 100000;           // Gibbs oracle / BLDW draw count
    std::vector<double> grid;          // t_grid (counting), s_grid (gap-tail), cutoffs (xi)
    int n_airy = 0;                    // mainconv; 0 means 4*n
    int k_max = 5;                     // zerodiag top-k window
    double eta = 0.05;                 // zerodiag stieltjes imaginary part
    std::string out_path;
    bool timings = false;              // adds wall_time_ms to records (breaks byte-identity)
};

// One executed trial.  `outputs` is the operation payload, or {"error": ...}
// when the trial failed; failures never abort the batch.
struct TrialRecord {
    int trial_index = 0;
    uint64_t derived_seed = 0;
    nlohmann::json outputs;
    bool failed = false;
    double wall_time_ms = 0.0;
};

struct RunResult {
    std::vector<TrialRecord> records;
    nlohmann::json summary;
};

// Validates the config (throws config_error), runs the trials (possibly in
// parallel; outputs are keyed by trial index so scheduling cannot change
// them), and builds the order-independent summary.  Throws all_trials_failed
// when trials > 0 and nothing succeeded.
RunResult run_experiment(const RunConfig& cfg);

// Normalized inputs echo embedded in every serialized record.
nlohmann::json config_echo(const RunConfig& cfg);

// JSON-lines: one record per line, deterministic for a fixed (config, seed).
void write_jsonl(const RunConfig& cfg, const RunResult& result, std::ostream& os);

// CSV summary table for grid-shaped experiments (counting, gap-tail);
// returns false when the experiment has no tabular summary.
bool write_summary_csv(const RunConfig& cfg, const RunResult& result, std::ostream& os);

// "a:b:step" inclusive numeric range.
std::vector<double> parse_grid(const std::string& text);

}  // namespace ssklab::harness
