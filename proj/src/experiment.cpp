#include "klsnmf/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace klsnmf {

const std::vector<double>& default_grid() {
    static const std::vector<double> grid = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
    return grid;
}

std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    auto scramble = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    std::uint64_t state = scramble(base + 0x9E3779B97F4A7C15ull);
    for (std::uint64_t part : parts)
        state = scramble(state + 0x9E3779B97F4A7C15ull + part);
    return state;
}

DataMatrix make_blobs(const SyntheticBlobSpec& spec) {
    if (spec.clusters < 2) throw parameter_error("make_blobs: need >= 2 clusters");
    if (spec.separation <= 0) throw parameter_error("make_blobs: separation must be > 0");
    // centers on scaled axes: pairwise distance is exactly `separation`
    const double coord = spec.separation / std::sqrt(2.0);
    std::vector<std::vector<double>> centers(
        static_cast<std::size_t>(spec.clusters),
        std::vector<double>(static_cast<std::size_t>(spec.clusters), 0.0));
    for (int c = 0; c < spec.clusters; ++c)
        centers[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)] = coord;
    return synth_blobs(centers, spec.per_cluster, spec.noise_sd, spec.seed);
}

namespace {

struct CellTask {
    std::string method;
    int n_classes;
    int subset_index;
    int lambda_index;   // -1 for baseline
    int radius_index;   // -1 for baseline
    const DataMatrix* subset;
};

void validate_spec(const ExperimentSpec& spec, int available_classes) {
    if (spec.n_values.empty()) throw parameter_error("experiment: no N values");
    for (int n : spec.n_values)
        if (n < 1 || n > available_classes)
            throw parameter_error("experiment: N=" + std::to_string(n) +
                                  " exceeds the " + std::to_string(available_classes) +
                                  " available classes");
    if (spec.lambda_grid.empty() || spec.radius_grid.empty())
        throw parameter_error("experiment: empty parameter grid");
    if (spec.subsets_per_n < 1) throw parameter_error("experiment: subsets_per_n < 1");
    if (spec.restarts < 1) throw parameter_error("experiment: restarts < 1");
}

void fill_metrics(RunRecord& record, const DataMatrix& subset,
                  const Partition& predicted) {
    const Partition truth = make_partition(*subset.labels);
    const MetricReport report = evaluate(truth, predicted);
    record.accuracy = report.accuracy;
    record.nmi = report.nmi;
    record.purity = report.purity;
    record.assignments = predicted.labels;
}

RunRecord run_klsnmf_cell(const ExperimentSpec& spec, const CellTask& task) {
    RunRecord record;
    record.method = "klsnmf";
    record.n_classes = task.n_classes;
    record.subset_index = task.subset_index;
    record.lambda = spec.lambda_grid[static_cast<std::size_t>(task.lambda_index)];
    record.radius = spec.radius_grid[static_cast<std::size_t>(task.radius_index)];
    record.seed = mix_seed(spec.base_seed,
                           {1ull, static_cast<std::uint64_t>(task.n_classes),
                            static_cast<std::uint64_t>(task.subset_index),
                            static_cast<std::uint64_t>(task.lambda_index),
                            static_cast<std::uint64_t>(task.radius_index)});

    const auto start = std::chrono::steady_clock::now();
    try {
        const KernelMatrix kernel = KernelMatrix::rbf(*task.subset, record.radius);
        SolverConfig config;
        config.k = task.n_classes;
        config.lambda = record.lambda;
        config.max_iterations = spec.max_iterations;
        config.tolerance = spec.tolerance;

        SolveResult best;
        for (int r = 0; r < spec.restarts; ++r) {
            config.seed = spec.restarts == 1
                              ? record.seed
                              : mix_seed(record.seed, {static_cast<std::uint64_t>(r)});
            SolveResult candidate = solve_klsnmf(kernel, config);
            if (r == 0 || candidate.trace.objective.back() <
                              best.trace.objective.back()) {
                best = std::move(candidate);
                record.seed = config.seed;
            }
        }

        record.objective = best.trace.objective.back();
        record.iterations = best.trace.iterations;
        record.converged = best.trace.termination == Termination::Converged;
        record.kkt_w = best.trace.kkt_w;
        record.kkt_g = best.trace.kkt_g;
        record.orthogonality = best.trace.orthogonality;
        fill_metrics(record, *task.subset, assign_clusters(best.factors.g));
        if (spec.keep_traces) record.trace = std::move(best.trace);
    } catch (const numerical_error& err) {
        record.status = "failed";
        record.message = err.what();
        if (spec.keep_traces) record.trace = err.trace;
    } catch (const std::exception& err) {
        record.status = "failed";
        record.message = err.what();
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return record;
}

RunRecord run_baseline_cell(const ExperimentSpec& spec, const CellTask& task) {
    RunRecord record;
    record.method = "nmf";
    record.n_classes = task.n_classes;
    record.subset_index = task.subset_index;
    record.seed = mix_seed(spec.base_seed,
                           {2ull, static_cast<std::uint64_t>(task.n_classes),
                            static_cast<std::uint64_t>(task.subset_index)});

    const auto start = std::chrono::steady_clock::now();
    if (task.subset->min_entry() < 0) {
        record.status = "skipped";
        record.message = "baseline requires nonnegative data";
        return record;
    }
    try {
        SolverConfig config;
        config.k = task.n_classes;
        config.max_iterations = spec.max_iterations;
        config.tolerance = spec.tolerance;

        BaselineResult best;
        for (int r = 0; r < spec.restarts; ++r) {
            config.seed = spec.restarts == 1
                              ? record.seed
                              : mix_seed(record.seed, {static_cast<std::uint64_t>(r)});
            BaselineResult candidate = solve_nmf_baseline(*task.subset, config);
            if (r == 0 || candidate.objective.back() < best.objective.back()) {
                best = std::move(candidate);
                record.seed = config.seed;
            }
        }

        record.objective = best.objective.back();
        record.iterations = best.iterations;
        record.converged = best.termination == Termination::Converged;
        fill_metrics(record, *task.subset, assign_clusters(best.coefficients));
        if (spec.keep_traces) {
            record.trace.objective = std::move(best.objective);
            record.trace.delta_w = std::move(best.delta_u);
            record.trace.delta_g = std::move(best.delta_g);
            record.trace.iterations = best.iterations;
            record.trace.termination = best.termination;
        }
    } catch (const std::exception& err) {
        record.status = "failed";
        record.message = err.what();
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return record;
}

ResultTable run_sweep(const ExperimentSpec& spec, bool with_baseline) {
    DataMatrix data;
    if (!spec.dataset_path.empty())
        data = load_dense_matrix(spec.dataset_path, /*has_labels=*/true);
    else if (spec.synthetic)
        data = make_blobs(*spec.synthetic);
    else
        throw parameter_error("experiment: no dataset path and no synthetic spec");
    if (!data.labels) throw input_error("experiment: data has no labels");
    if (spec.rescale_features) data = minmax_rescale(data);
    validate_spec(spec, data.class_count());

    // subsets per N, drawn independently of solver seeds
    std::vector<std::vector<DataMatrix>> subsets;
    subsets.reserve(spec.n_values.size());
    for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
        SubsetSpec sub;
        sub.classes_per_subset = spec.n_values[ni];
        sub.count = spec.subsets_per_n;
        sub.seed = mix_seed(spec.base_seed,
                            {0ull, static_cast<std::uint64_t>(spec.n_values[ni])});
        subsets.push_back(sample_class_subsets(data, sub));
    }

    std::vector<CellTask> tasks;
    for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
        const int n_classes = spec.n_values[ni];
        for (std::size_t s = 0; s < subsets[ni].size(); ++s) {
            const DataMatrix* subset = &subsets[ni][s];
            for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li)
                for (std::size_t ri = 0; ri < spec.radius_grid.size(); ++ri)
                    tasks.push_back({"klsnmf", n_classes, static_cast<int>(s),
                                     static_cast<int>(li), static_cast<int>(ri),
                                     subset});
            if (with_baseline)
                tasks.push_back({"nmf", n_classes, static_cast<int>(s), -1, -1,
                                 subset});
        }
    }

    ResultTable table;
    table.runs.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(spec.threads > 0 ? static_cast<std::size_t>(spec.threads) : hw,
                              tasks.size());

    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size();
             i = next.fetch_add(1)) {
            table.runs[i] = tasks[i].method == "nmf"
                                ? run_baseline_cell(spec, tasks[i])
                                : run_klsnmf_cell(spec, tasks[i]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& thread : pool) thread.join();
    }

    aggregate(table);
    return table;
}

double sample_std(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double acc = 0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
    return run_sweep(spec, spec.with_baseline);
}

ResultTable baseline_compare(const ExperimentSpec& spec) {
    return run_sweep(spec, /*with_baseline=*/true);
}

void aggregate(ResultTable& table) {
    table.cells.clear();
    table.best.clear();

    auto cell_key = [](const RunRecord& r) {
        return std::make_tuple(r.method, r.n_classes, r.lambda, r.radius);
    };
    std::vector<std::tuple<std::string, int, double, double>> keys;
    for (const auto& run : table.runs) {
        const auto key = cell_key(run);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            keys.push_back(key);
    }

    for (const auto& key : keys) {
        CellStats cell;
        std::tie(cell.method, cell.n_classes, cell.lambda, cell.radius) = key;
        std::vector<double> acc, nm, pur;
        for (const auto& run : table.runs) {
            if (cell_key(run) != key || run.status != "ok") continue;
            acc.push_back(run.accuracy);
            nm.push_back(run.nmi);
            pur.push_back(run.purity);
        }
        cell.count = static_cast<int>(acc.size());
        if (cell.count) {
            auto mean = [](const std::vector<double>& v) {
                double s = 0;
                for (double x : v) s += x;
                return s / static_cast<double>(v.size());
            };
            cell.mean_accuracy = mean(acc);
            cell.mean_nmi = mean(nm);
            cell.mean_purity = mean(pur);
            cell.std_accuracy = sample_std(acc, cell.mean_accuracy);
            cell.std_nmi = sample_std(nm, cell.mean_nmi);
            cell.std_purity = sample_std(pur, cell.mean_purity);
        }
        table.cells.push_back(cell);
    }

    // best over the grid per (method, N): mean accuracy, then mean NMI,
    // then smallest (lambda, radius)
    std::vector<std::pair<std::string, int>> groups;
    for (const auto& cell : table.cells) {
        const auto group = std::make_pair(cell.method, cell.n_classes);
        if (std::find(groups.begin(), groups.end(), group) == groups.end())
            groups.push_back(group);
    }
    for (const auto& group : groups) {
        const CellStats* best = nullptr;
        for (const auto& cell : table.cells) {
            if (std::make_pair(cell.method, cell.n_classes) != group || !cell.count)
                continue;
            if (!best) {
                best = &cell;
                continue;
            }
            const auto lhs = std::make_tuple(-cell.mean_accuracy, -cell.mean_nmi,
                                             cell.lambda, cell.radius);
            const auto rhs = std::make_tuple(-best->mean_accuracy, -best->mean_nmi,
                                             best->lambda, best->radius);
            if (lhs < rhs) best = &cell;
        }
        if (best) table.best.push_back(*best);
    }
}

void emit_traces(const ResultTable& table, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw input_error("cannot create trace directory '" + out_dir + "'");

    for (const auto& run : table.runs) {
        if (run.status != "ok" || run.trace.objective.size() < 2) continue;
        std::ostringstream name;
        name << run.method << "_N" << run.n_classes << "_s" << run.subset_index;
        if (run.method == "klsnmf")
            name << "_lam" << run.lambda << "_rad" << run.radius;
        name << ".txt";
        std::ofstream out(fs::path(out_dir) / name.str());
        if (!out) throw input_error("cannot write trace file in '" + out_dir + "'");
        out.precision(17);
        for (int t = 1; t <= run.trace.iterations; ++t) {
            out << t << ' ' << run.trace.objective[static_cast<std::size_t>(t)] << ' '
                << run.trace.delta_w[static_cast<std::size_t>(t - 1)] << ' '
                << run.trace.delta_g[static_cast<std::size_t>(t - 1)] << '\n';
        }
    }
}

std::string record_to_json(const RunRecord& run) {
    nlohmann::json j;
    j["method"] = run.method;
    j["n_classes"] = run.n_classes;
    j["subset"] = run.subset_index;
    j["lambda"] = run.lambda;
    j["radius"] = run.radius;
    j["seed"] = run.seed;
    j["status"] = run.status;
    if (!run.message.empty()) j["message"] = run.message;
    j["accuracy"] = run.accuracy;
    j["nmi"] = run.nmi;
    j["purity"] = run.purity;
    j["objective"] = run.objective;
    j["iterations"] = run.iterations;
    j["converged"] = run.converged;
    j["kkt_w"] = run.kkt_w;
    j["kkt_g"] = run.kkt_g;
    j["orthogonality"] = run.orthogonality;
    j["wall_ms"] = run.wall_ms;
    j["assignments"] = run.assignments;
    return j.dump();
}

void write_records(const ResultTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    for (const auto& run : table.runs) out << record_to_json(run) << '\n';
}

std::string summary_table(const ResultTable& table) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "method   N  lambda    radius    runs  accuracy          nmi               purity\n";
    for (const auto& cell : table.cells) {
        out << std::left << std::setw(8) << cell.method << ' ' << std::right
            << std::setw(2) << cell.n_classes << "  " << std::setw(8) << cell.lambda
            << "  " << std::setw(8) << cell.radius << "  " << std::setw(4)
            << cell.count << "  " << cell.mean_accuracy << " +/- " << cell.std_accuracy
            << "  " << cell.mean_nmi << " +/- " << cell.std_nmi << "  "
            << cell.mean_purity << " +/- " << cell.std_purity << '\n';
    }
    out << "\nbest over grid:\n";
    for (const auto& cell : table.best) {
        out << std::left << std::setw(8) << cell.method << ' ' << std::right
            << std::setw(2) << cell.n_classes << "  lambda=" << cell.lambda
            << " radius=" << cell.radius << "  accuracy=" << cell.mean_accuracy
            << " +/- " << cell.std_accuracy << "  nmi=" << cell.mean_nmi
            << "  purity=" << cell.mean_purity << '\n';
    }
    return out.str();
}

}  // namespace klsnmf
