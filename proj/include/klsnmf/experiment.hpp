#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "klsnmf/data.hpp"
#include "klsnmf/evaluation.hpp"
#include "klsnmf/factorization.hpp"

namespace klsnmf {

/// The lambda / kernel-radius search grid used throughout.
const std::vector<double>& default_grid();  // {0.001, 0.01, ..., 1000}

struct SyntheticBlobSpec {
    int clusters = 3;
    int per_cluster = 50;
    double noise_sd = 2.0;
    double separation = 30.0;  // pairwise center distance floor
    std::uint64_t seed = 0;
};

/// Axis-aligned centers with the requested pairwise separation.
DataMatrix make_blobs(const SyntheticBlobSpec& spec);

struct ExperimentSpec {
    std::string dataset_path;  // empty when synthetic is set
    std::optional<SyntheticBlobSpec> synthetic;
    bool rescale_features = false;

    std::vector<int> n_values;   // classes per subset (k = N per run)
    int subsets_per_n = 10;
    std::vector<double> lambda_grid = default_grid();
    std::vector<double> radius_grid = default_grid();

    std::uint64_t base_seed = 0;
    int restarts = 1;  // best-objective run kept when > 1
    int max_iterations = 500;
    double tolerance = 1e-6;
    int threads = 0;  // 0 = hardware concurrency
    bool keep_traces = true;
    bool with_baseline = false;
    std::string output_dir;
};

struct RunRecord {
    std::string method;  // "klsnmf" or "nmf"
    int n_classes = 0;
    int subset_index = 0;
    double lambda = 0;
    double radius = 0;
    std::uint64_t seed = 0;

    std::string status = "ok";  // ok | failed | skipped
    std::string message;

    double accuracy = 0;
    double nmi = 0;
    double purity = 0;
    double objective = 0;
    int iterations = 0;
    bool converged = false;
    double kkt_w = 0;
    double kkt_g = 0;
    double orthogonality = 0;
    double wall_ms = 0;
    std::vector<int> assignments;
    SolveTrace trace;  // populated when keep_traces
};

struct CellStats {
    std::string method;
    int n_classes = 0;
    double lambda = 0;
    double radius = 0;
    int count = 0;  // runs aggregated (status ok)
    double mean_accuracy = 0, std_accuracy = 0;
    double mean_nmi = 0, std_nmi = 0;
    double mean_purity = 0, std_purity = 0;
};

struct ResultTable {
    std::vector<RunRecord> runs;
    std::vector<CellStats> cells;
    std::vector<CellStats> best;  // one row per (method, N)
};

/// Full sweep: for each (N, subset, lambda, radius) build the RBF kernel,
/// solve with k = N, read the partition off G and score it. Per-run seeds
/// are derived by mixing (base_seed, N, subset, lambda index, radius index),
/// so results are independent of scheduling; grid cells run concurrently on
/// `threads` workers. Numerical failures are recorded per run and do not
/// abort the sweep.
ResultTable run_experiment(const ExperimentSpec& spec);

/// run_experiment plus the plain-NMF baseline on the raw data (one run per
/// subset, grid-independent), merged under the method column. Subsets with
/// negative entries are recorded as skipped for the baseline.
ResultTable baseline_compare(const ExperimentSpec& spec);

/// Recomputes mean/std for runs grouped by (method, N, lambda, radius) and
/// the best-over-grid row per (method, N): highest mean accuracy, ties by
/// mean NMI, then smallest (lambda, radius).
void aggregate(ResultTable& table);

/// One file per completed run with rows (iteration, objective, dW, dG).
void emit_traces(const ResultTable& table, const std::string& out_dir);

/// One JSON object per line, one line per run.
void write_records(const ResultTable& table, const std::string& path);
std::string record_to_json(const RunRecord& run);

/// Human-readable per-cell and best-over-grid tables.
std::string summary_table(const ResultTable& table);

/// splitmix64-based stream mixing for derived seeds.
std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

}  // namespace klsnmf
