#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fetch.hpp"
#include "klsnmf/experiment.hpp"
#include "klsnmf/matrix_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace klsnmf;

struct DataOptions {
    std::string path;
    bool has_labels = false;
    bool blobs = false;
    SyntheticBlobSpec blob_spec;
    bool rescale = false;
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
    auto* data = cmd->add_option("--data", opts.path,
                                 "dense text data file, one sample per row");
    cmd->add_flag("--labels", opts.has_labels,
                  "final field of each data row is the class label");
    auto* blobs = cmd->add_flag("--blobs", opts.blobs, "synthesize Gaussian blobs");
    cmd->add_option("--blob-clusters", opts.blob_spec.clusters, "blob cluster count");
    cmd->add_option("--blob-size", opts.blob_spec.per_cluster, "samples per blob");
    cmd->add_option("--blob-noise", opts.blob_spec.noise_sd, "blob noise sd");
    cmd->add_option("--blob-sep", opts.blob_spec.separation,
                    "pairwise blob center distance");
    cmd->add_option("--blob-seed", opts.blob_spec.seed, "blob generator seed");
    cmd->add_flag("--rescale", opts.rescale, "per-feature min-max rescale");
    data->excludes(blobs);
}

DataMatrix load_data(const DataOptions& opts) {
    DataMatrix data;
    if (opts.blobs)
        data = make_blobs(opts.blob_spec);
    else if (!opts.path.empty())
        data = load_dense_matrix(opts.path, opts.has_labels);
    else
        throw CLI::ValidationError("provide --data or --blobs");
    if (opts.rescale) data = minmax_rescale(data);
    return data;
}

struct SolveOptions {
    DataOptions data;
    std::string kernel = "rbf";
    double radius = 1.0;
    std::string kernel_file;
    int k = 2;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    int max_iters = 500;
    double tol = 1e-6;
    std::string init = "uniform";
    std::string out;
    bool emit_kernel = false;
};

void add_solve_options(CLI::App* cmd, SolveOptions& opts) {
    add_data_options(cmd, opts.data);
    cmd->add_option("--kernel", opts.kernel, "rbf | linear | precomputed")
        ->check(CLI::IsMember({"rbf", "linear", "precomputed"}));
    cmd->add_option("--radius", opts.radius, "rbf kernel radius");
    cmd->add_option("--kernel-file", opts.kernel_file, "precomputed kernel file");
    cmd->add_option("--k", opts.k, "cluster count")->required();
    cmd->add_option("--lambda", opts.lambda, "local-similarity weight");
    cmd->add_option("--seed", opts.seed, "solver seed");
    cmd->add_option("--max-iters", opts.max_iters, "iteration cap");
    cmd->add_option("--tol", opts.tol, "relative objective tolerance");
    cmd->add_option("--init", opts.init, "uniform | scaled")
        ->check(CLI::IsMember({"uniform", "scaled"}));
    cmd->add_option("--out", opts.out, "output directory")
        ->envname("KLSNMF_OUTPUT_DIR");
    cmd->add_flag("--emit-kernel", opts.emit_kernel, "write the kernel matrix");
}

KernelMatrix build_kernel(const SolveOptions& opts, const DataMatrix& data) {
    if (opts.kernel == "precomputed") {
        if (opts.kernel_file.empty())
            throw CLI::ValidationError("--kernel precomputed needs --kernel-file");
        return KernelMatrix::load(opts.kernel_file);
    }
    if (opts.kernel == "linear") return KernelMatrix::linear(data);
    return KernelMatrix::rbf(data, opts.radius);
}

SolverConfig make_config(const SolveOptions& opts) {
    SolverConfig config;
    config.k = opts.k;
    config.lambda = opts.lambda;
    config.max_iterations = opts.max_iters;
    config.tolerance = opts.tol;
    config.seed = opts.seed;
    config.init = opts.init == "scaled" ? InitStrategy::ScaledRandom
                                        : InitStrategy::UniformRandom;
    return config;
}

void write_trace_file(const std::string& path, const SolveTrace& trace) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out.precision(17);
    for (int t = 1; t <= trace.iterations; ++t)
        out << t << ' ' << trace.objective[static_cast<std::size_t>(t)] << ' '
            << trace.delta_w[static_cast<std::size_t>(t - 1)] << ' '
            << trace.delta_g[static_cast<std::size_t>(t - 1)] << '\n';
}

int run_solve(const SolveOptions& opts, bool trace_only) {
    const DataMatrix data = load_data(opts.data);
    const KernelMatrix kernel = build_kernel(opts, data);
    const SolverConfig config = make_config(opts);

    const std::string out_dir = opts.out.empty() ? "klsnmf_out" : opts.out;
    fs::create_directories(out_dir);

    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    try {
        result = solve_klsnmf(kernel, config);
    } catch (const numerical_error& err) {
        std::cerr << "solve failed: " << err.what() << '\n';
        write_trace_file((fs::path(out_dir) / "trace.txt").string(), err.trace);
        return 1;
    }
    const double wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();

    write_trace_file((fs::path(out_dir) / "trace.txt").string(), result.trace);
    if (trace_only) {
        std::cout << "iterations " << result.trace.iterations << ", objective "
                  << result.trace.objective.back() << ", trace written to "
                  << (fs::path(out_dir) / "trace.txt").string() << '\n';
        return 0;
    }

    write_matrix_file((fs::path(out_dir) / "w.txt").string(), result.factors.w);
    write_matrix_file((fs::path(out_dir) / "g.txt").string(), result.factors.g);
    if (opts.emit_kernel)
        kernel.save((fs::path(out_dir) / "kernel.txt").string());

    const Partition predicted = assign_clusters(result.factors.g);
    {
        std::ofstream out(fs::path(out_dir) / "assignments.txt");
        for (int label : predicted.labels) out << label << '\n';
    }

    RunRecord record;
    record.method = "klsnmf";
    record.n_classes = opts.k;
    record.lambda = opts.lambda;
    record.radius = opts.kernel == "rbf" ? opts.radius : 0.0;
    record.seed = opts.seed;
    record.objective = result.trace.objective.back();
    record.iterations = result.trace.iterations;
    record.converged = result.trace.termination == Termination::Converged;
    record.kkt_w = result.trace.kkt_w;
    record.kkt_g = result.trace.kkt_g;
    record.orthogonality = result.trace.orthogonality;
    record.wall_ms = wall_ms;
    record.assignments = predicted.labels;
    if (data.labels) {
        const MetricReport report =
            evaluate(make_partition(*data.labels), predicted);
        record.accuracy = report.accuracy;
        record.nmi = report.nmi;
        record.purity = report.purity;
    }
    {
        std::ofstream out(fs::path(out_dir) / "result.json");
        out << record_to_json(record) << '\n';
    }

    std::cout << "objective " << record.objective << " after " << record.iterations
              << " iterations (" << (record.converged ? "converged" : "iteration cap")
              << "), kkt_w " << record.kkt_w << ", kkt_g " << record.kkt_g << '\n';
    if (data.labels)
        std::cout << "accuracy " << record.accuracy << ", nmi " << record.nmi
                  << ", purity " << record.purity << '\n';
    std::cout << "outputs in " << out_dir << '\n';
    return 0;
}

struct ExperimentOptions {
    DataOptions data;
    std::vector<int> n_values;
    int subsets = 10;
    std::vector<double> lambdas;
    std::vector<double> radii;
    std::uint64_t seed = 0;
    int restarts = 1;
    int threads = 0;
    int max_iters = 500;
    double tol = 1e-6;
    bool baseline = false;
    bool no_traces = false;
    std::string out;
    std::string config_file;
};

void apply_config_file(ExperimentOptions& opts) {
    std::ifstream in(opts.config_file);
    if (!in)
        throw CLI::ValidationError("cannot open config file '" + opts.config_file + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), '=', ' ');
        std::istringstream fields(line);
        std::string key;
        if (!(fields >> key)) continue;
        auto rest = [&fields] {
            std::string value;
            std::getline(fields, value);
            const auto first = value.find_first_not_of(" \t");
            return first == std::string::npos ? std::string() : value.substr(first);
        };
        auto split_list = [](const std::string& value) {
            std::vector<std::string> items;
            std::string item;
            std::istringstream stream(value);
            while (std::getline(stream, item, ','))
                if (!item.empty()) items.push_back(item);
            return items;
        };
        if (key == "data") opts.data.path = rest();
        else if (key == "labels") opts.data.has_labels = rest() != "false";
        else if (key == "n-values") {
            opts.n_values.clear();
            for (const auto& item : split_list(rest())) opts.n_values.push_back(std::stoi(item));
        } else if (key == "subsets") opts.subsets = std::stoi(rest());
        else if (key == "lambdas") {
            opts.lambdas.clear();
            for (const auto& item : split_list(rest())) opts.lambdas.push_back(std::stod(item));
        } else if (key == "radii") {
            opts.radii.clear();
            for (const auto& item : split_list(rest())) opts.radii.push_back(std::stod(item));
        } else if (key == "seed") opts.seed = std::stoull(rest());
        else if (key == "restarts") opts.restarts = std::stoi(rest());
        else if (key == "threads") opts.threads = std::stoi(rest());
        else if (key == "max-iters") opts.max_iters = std::stoi(rest());
        else if (key == "tol") opts.tol = std::stod(rest());
        else if (key == "baseline") opts.baseline = rest() != "false";
        else if (key == "out") opts.out = rest();
        else
            throw CLI::ValidationError("config file line " + std::to_string(lineno) +
                                       ": unknown key '" + key + "'");
    }
}

int run_experiment_cmd(ExperimentOptions& opts) {
    if (!opts.config_file.empty()) apply_config_file(opts);

    ExperimentSpec spec;
    if (opts.data.blobs) {
        spec.synthetic = opts.data.blob_spec;
        if (opts.n_values.empty()) opts.n_values = {opts.data.blob_spec.clusters};
    } else {
        spec.dataset_path = opts.data.path;
    }
    spec.rescale_features = opts.data.rescale;
    spec.n_values = opts.n_values;
    spec.subsets_per_n = opts.subsets;
    if (!opts.lambdas.empty()) spec.lambda_grid = opts.lambdas;
    if (!opts.radii.empty()) spec.radius_grid = opts.radii;
    spec.base_seed = opts.seed;
    spec.restarts = opts.restarts;
    spec.threads = opts.threads;
    spec.max_iterations = opts.max_iters;
    spec.tolerance = opts.tol;
    spec.keep_traces = !opts.no_traces;
    spec.with_baseline = opts.baseline;

    const std::string out_dir = opts.out.empty() ? "klsnmf_out" : opts.out;
    fs::create_directories(out_dir);

    const ResultTable table = run_experiment(spec);

    write_records(table, (fs::path(out_dir) / "records.jsonl").string());
    const std::string summary = summary_table(table);
    {
        std::ofstream out(fs::path(out_dir) / "summary.txt");
        out << summary;
    }
    if (spec.keep_traces)
        emit_traces(table, (fs::path(out_dir) / "traces").string());

    std::cout << summary;
    std::cout << "records in " << (fs::path(out_dir) / "records.jsonl").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel local-similarity NMF toolkit"};
    app.require_subcommand(1);

    SolveOptions solve_opts;
    auto* solve_cmd = app.add_subcommand("solve", "run one factorization");
    add_solve_options(solve_cmd, solve_opts);

    SolveOptions trace_opts;
    auto* traces_cmd =
        app.add_subcommand("traces", "run one factorization, write only the trace");
    add_solve_options(traces_cmd, trace_opts);

    ExperimentOptions exp_opts;
    auto* exp_cmd = app.add_subcommand("experiment", "grid sweep with subset replication");
    add_data_options(exp_cmd, exp_opts.data);
    exp_cmd->add_option("--n-values", exp_opts.n_values, "classes per subset to sweep")
        ->delimiter(',');
    exp_cmd->add_option("--subsets", exp_opts.subsets, "subsets per N");
    exp_cmd->add_option("--lambdas", exp_opts.lambdas, "lambda grid")->delimiter(',');
    exp_cmd->add_option("--radii", exp_opts.radii, "rbf radius grid")->delimiter(',');
    exp_cmd->add_option("--seed", exp_opts.seed, "base seed");
    exp_cmd->add_option("--restarts", exp_opts.restarts, "solver restarts per cell");
    exp_cmd->add_option("--threads", exp_opts.threads, "worker threads (0 = auto)");
    exp_cmd->add_option("--max-iters", exp_opts.max_iters, "iteration cap");
    exp_cmd->add_option("--tol", exp_opts.tol, "relative objective tolerance");
    exp_cmd->add_flag("--baseline", exp_opts.baseline, "also run the plain-NMF baseline");
    exp_cmd->add_flag("--no-traces", exp_opts.no_traces, "do not keep or emit traces");
    exp_cmd->add_option("--out", exp_opts.out, "output directory")
        ->envname("KLSNMF_OUTPUT_DIR");
    exp_cmd->add_option("--config", exp_opts.config_file,
                        "key-value config file overriding flags");

    klsnmf::tools::FetchRequest fetch_request;
    auto* fetch_cmd = app.add_subcommand("fetch-data", "download a public dataset");
    fetch_cmd->add_option("--name", fetch_request.name, "dataset name (semeion)");
    fetch_cmd->add_option("--url", fetch_request.url, "override source url");
    fetch_cmd->add_option("--out", fetch_request.out_dir, "output directory")
        ->envname("KLSNMF_OUTPUT_DIR");
    fetch_cmd->add_option("--sha256", fetch_request.expected_sha256,
                          "expected checksum of the raw download");
    fetch_cmd->add_flag("--keep-raw", fetch_request.keep_raw, "keep the raw download");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return run_solve(solve_opts, false);
        if (traces_cmd->parsed()) return run_solve(trace_opts, true);
        if (exp_cmd->parsed()) return run_experiment_cmd(exp_opts);
        if (fetch_cmd->parsed()) {
            const std::string path = klsnmf::tools::fetch_dataset(fetch_request);
            std::cout << "wrote " << path << '\n';
            return 0;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
