#include "klsnmf/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "klsnmf/matrix_io.hpp"

namespace klsnmf {

int DataMatrix::class_count() const {
    if (!labels) return 0;
    int maxv = -1;
    for (int v : *labels) maxv = std::max(maxv, v);
    return maxv + 1;
}

DataMatrix parse_dense_matrix(std::istream& in, bool has_labels,
                              const std::string& origin) {
    Matrix raw = read_matrix(in, origin);
    if (!raw.allFinite()) throw input_error(origin + ": non-finite entry");

    DataMatrix data;
    if (!has_labels) {
        data.features = raw.transpose();  // rows are samples on disk
        return data;
    }
    if (raw.cols() < 2)
        throw input_error(origin + ": need at least one feature besides the label column");
    const Eigen::Index n = raw.rows();
    const Eigen::Index p = raw.cols() - 1;
    data.features = raw.leftCols(p).transpose();

    std::vector<int> labels(static_cast<std::size_t>(n));
    std::map<int, int> remap;  // sorted original value -> dense index
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = raw(i, p);
        const int label = static_cast<int>(std::llround(v));
        if (std::abs(v - label) > 1e-9)
            throw input_error(origin + ": row " + std::to_string(i + 1) +
                              ": label field is not an integer");
        remap.emplace(label, 0);
        labels[static_cast<std::size_t>(i)] = label;
    }
    int next = 0;
    for (auto& [orig, dense] : remap) dense = next++;
    for (int& v : labels) v = remap[v];
    data.labels = std::move(labels);
    return data;
}

DataMatrix load_dense_matrix(const std::string& path, bool has_labels) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return parse_dense_matrix(in, has_labels, path);
}

void write_dense_matrix(const std::string& path, const DataMatrix& data) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out.precision(17);
    for (int i = 0; i < data.n(); ++i) {
        for (int f = 0; f < data.p(); ++f) {
            if (f) out << ' ';
            out << data.features(f, i);
        }
        if (data.labels) out << ' ' << (*data.labels)[static_cast<std::size_t>(i)];
        out << '\n';
    }
}

DataMatrix synth_blobs(const std::vector<std::vector<double>>& centers,
                       int per_cluster, double noise_sd, std::uint64_t seed) {
    if (centers.size() < 2) throw parameter_error("synth_blobs: need at least 2 centers");
    if (per_cluster < 1) throw parameter_error("synth_blobs: per_cluster must be positive");
    if (noise_sd < 0) throw parameter_error("synth_blobs: noise_sd must be >= 0");
    const std::size_t p = centers.front().size();
    for (const auto& c : centers)
        if (c.size() != p) throw parameter_error("synth_blobs: center dimensions differ");

    const int c = static_cast<int>(centers.size());
    const int n = c * per_cluster;
    DataMatrix data;
    data.features.resize(static_cast<Eigen::Index>(p), n);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int ci = 0; ci < c; ++ci) {
        for (int s = 0; s < per_cluster; ++s) {
            const int col = ci * per_cluster + s;
            for (std::size_t f = 0; f < p; ++f)
                data.features(static_cast<Eigen::Index>(f), col) =
                    centers[static_cast<std::size_t>(ci)][f] + noise_sd * noise(gen);
            labels[static_cast<std::size_t>(col)] = ci;
        }
    }
    // shift, not clip, to keep cluster geometry
    const double lo = data.features.minCoeff();
    if (lo < 0) data.features.array() -= lo;
    data.labels = std::move(labels);
    return data;
}

namespace {

// C(n, r) saturating well above any practical subset count
double combination_count(int n, int r) {
    double v = 1;
    for (int i = 0; i < r; ++i) {
        v *= static_cast<double>(n - i) / (i + 1);
        if (v > 1e15) return 1e15;
    }
    return v;
}

DataMatrix take_classes(const DataMatrix& data, const std::vector<int>& classes) {
    std::vector<int> dense(static_cast<std::size_t>(data.class_count()), -1);
    for (std::size_t i = 0; i < classes.size(); ++i)
        dense[static_cast<std::size_t>(classes[i])] = static_cast<int>(i);

    std::vector<int> cols;
    const auto& labels = *data.labels;
    for (int i = 0; i < data.n(); ++i)
        if (dense[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] >= 0)
            cols.push_back(i);

    DataMatrix out;
    out.features.resize(data.features.rows(), static_cast<Eigen::Index>(cols.size()));
    std::vector<int> sublabels(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.features.col(static_cast<Eigen::Index>(j)) = data.features.col(cols[j]);
        sublabels[j] = dense[static_cast<std::size_t>(labels[static_cast<std::size_t>(cols[j])])];
    }
    out.labels = std::move(sublabels);
    return out;
}

}  // namespace

std::vector<DataMatrix> sample_class_subsets(const DataMatrix& data,
                                             const SubsetSpec& spec) {
    if (!data.labels) throw input_error("sample_class_subsets: data has no labels");
    const int total = data.class_count();
    if (spec.classes_per_subset < 1 || spec.classes_per_subset > total)
        throw parameter_error("sample_class_subsets: classes_per_subset out of range");
    if (spec.count < 1) throw parameter_error("sample_class_subsets: count must be >= 1");

    const int n_cls = spec.classes_per_subset;
    std::vector<std::vector<int>> combos;
    if (combination_count(total, n_cls) <= static_cast<double>(spec.count)) {
        // fewer combinations than requested: enumerate them all
        std::vector<int> idx(static_cast<std::size_t>(n_cls));
        for (int i = 0; i < n_cls; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            combos.push_back(idx);
            int i = n_cls - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == total - n_cls + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n_cls; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    } else {
        std::mt19937_64 gen(spec.seed);
        std::set<std::vector<int>> seen;
        std::vector<int> pool(static_cast<std::size_t>(total));
        for (int i = 0; i < total; ++i) pool[static_cast<std::size_t>(i)] = i;
        while (static_cast<int>(combos.size()) < spec.count) {
            for (int i = 0; i < n_cls; ++i) {
                std::uniform_int_distribution<int> pick(i, total - 1);
                std::swap(pool[static_cast<std::size_t>(i)],
                          pool[static_cast<std::size_t>(pick(gen))]);
            }
            std::vector<int> combo(pool.begin(), pool.begin() + n_cls);
            std::sort(combo.begin(), combo.end());
            if (seen.insert(combo).second) combos.push_back(std::move(combo));
        }
    }

    std::vector<DataMatrix> subsets;
    subsets.reserve(combos.size());
    for (const auto& combo : combos) subsets.push_back(take_classes(data, combo));
    return subsets;
}

DataMatrix minmax_rescale(const DataMatrix& data) {
    DataMatrix out = data;
    for (Eigen::Index f = 0; f < out.features.rows(); ++f) {
        const double lo = out.features.row(f).minCoeff();
        const double hi = out.features.row(f).maxCoeff();
        if (hi > lo)
            out.features.row(f) = (out.features.row(f).array() - lo) / (hi - lo);
        else
            out.features.row(f).setZero();
    }
    return out;
}

DataMatrix parse_semeion(std::istream& in) {
    Matrix raw = read_matrix(in, "semeion");
    if (raw.cols() != 266)
        throw input_error("semeion: expected 266 fields per row, got " +
                          std::to_string(raw.cols()));
    const Eigen::Index n = raw.rows();
    DataMatrix data;
    data.features = raw.leftCols(256).transpose();
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        int label = -1;
        for (int d = 0; d < 10; ++d) {
            if (raw(i, 256 + d) > 0.5) {
                if (label >= 0)
                    throw input_error("semeion: row " + std::to_string(i + 1) +
                                      " has multiple label flags");
                label = d;
            }
        }
        if (label < 0)
            throw input_error("semeion: row " + std::to_string(i + 1) +
                              " has no label flag");
        labels[static_cast<std::size_t>(i)] = label;
    }
    data.labels = std::move(labels);
    return data;
}

}  // namespace klsnmf
