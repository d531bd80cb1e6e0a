#include "klsnmf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace klsnmf {

namespace {

void check_pair(const Partition& a, const Partition& b) {
    if (a.labels.size() != b.labels.size())
        throw input_error("partitions have different lengths");
    if (a.labels.empty()) throw input_error("partitions are empty");
}

// counts[i][j] = samples with predicted cluster i and truth class j
std::vector<std::vector<double>> confusion(const Partition& truth,
                                           const Partition& predicted) {
    std::vector<std::vector<double>> counts(
        static_cast<std::size_t>(predicted.k),
        std::vector<double>(static_cast<std::size_t>(truth.k), 0.0));
    for (std::size_t s = 0; s < truth.labels.size(); ++s)
        counts[static_cast<std::size_t>(predicted.labels[s])]
              [static_cast<std::size_t>(truth.labels[s])] += 1.0;
    return counts;
}

// Kuhn-Munkres with potentials on an m x m cost matrix; returns the column
// assigned to each row. Exact for integer-valued costs.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int m = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(m) + 1, 0);  // column -> row
    std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

    for (int i = 1; i <= m; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1)]
                                       [static_cast<std::size_t>(j - 1)] -
                                   u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(m), -1);
    for (int j = 1; j <= m; ++j)
        row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] =
            j - 1;
    return row_to_col;
}

double entropy(const std::vector<double>& counts, double n) {
    double h = 0;
    for (double c : counts)
        if (c > 0) h -= (c / n) * std::log(c / n);
    return h;
}

}  // namespace

Partition make_partition(const std::vector<int>& labels) {
    if (labels.empty()) throw input_error("make_partition: no labels");
    Partition part;
    part.labels = labels;
    int maxv = -1;
    for (int v : labels) {
        if (v < 0) throw input_error("make_partition: negative label");
        maxv = std::max(maxv, v);
    }
    part.k = maxv + 1;
    return part;
}

Partition assign_clusters(const Matrix& g) {
    if (g.size() == 0) throw input_error("assign_clusters: empty matrix");
    if (g.minCoeff() < 0) throw input_error("assign_clusters: negative entry in G");

    Partition part;
    part.k = static_cast<int>(g.cols());
    part.labels.resize(static_cast<std::size_t>(g.rows()));
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        int best = 0;
        double best_value = g(i, 0);
        for (Eigen::Index c = 1; c < g.cols(); ++c) {
            if (g(i, c) > best_value) {  // ties keep the smaller index
                best_value = g(i, c);
                best = static_cast<int>(c);
            }
        }
        part.labels[static_cast<std::size_t>(i)] = best;
        if (best_value == 0.0) part.degenerate_rows.push_back(static_cast<int>(i));
    }
    return part;
}

double accuracy(const Partition& truth, const Partition& predicted,
                std::vector<int>* matched_permutation) {
    check_pair(truth, predicted);
    const auto counts = confusion(truth, predicted);
    const int m = std::max(truth.k, predicted.k);

    std::vector<std::vector<double>> cost(
        static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (int i = 0; i < predicted.k; ++i)
        for (int j = 0; j < truth.k; ++j)
            cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                -counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    const auto row_to_col = min_cost_assignment(cost);
    double matched = 0;
    for (int i = 0; i < predicted.k; ++i) {
        const int j = row_to_col[static_cast<std::size_t>(i)];
        if (j < truth.k)
            matched += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    if (matched_permutation) {
        matched_permutation->assign(static_cast<std::size_t>(predicted.k), -1);
        for (int i = 0; i < predicted.k; ++i) {
            const int j = row_to_col[static_cast<std::size_t>(i)];
            (*matched_permutation)[static_cast<std::size_t>(i)] = j < truth.k ? j : -1;
        }
    }
    return matched / static_cast<double>(truth.labels.size());
}

double nmi(const Partition& a, const Partition& b) {
    check_pair(a, b);
    const double n = static_cast<double>(a.labels.size());
    const auto counts = confusion(a, b);  // counts[b][a]
    std::vector<double> row_sum(static_cast<std::size_t>(b.k), 0.0);
    std::vector<double> col_sum(static_cast<std::size_t>(a.k), 0.0);
    for (int i = 0; i < b.k; ++i)
        for (int j = 0; j < a.k; ++j) {
            row_sum[static_cast<std::size_t>(i)] +=
                counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            col_sum[static_cast<std::size_t>(j)] +=
                counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }

    double mi = 0;
    for (int i = 0; i < b.k; ++i)
        for (int j = 0; j < a.k; ++j) {
            const double nij = counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (nij > 0)
                mi += (nij / n) * std::log((nij * n) /
                                           (row_sum[static_cast<std::size_t>(i)] *
                                            col_sum[static_cast<std::size_t>(j)]));
        }
    const double ha = entropy(col_sum, n);
    const double hb = entropy(row_sum, n);
    if (ha == 0.0 && hb == 0.0) return 1.0;  // two single-cluster partitions
    return std::clamp(mi / std::max(ha, hb), 0.0, 1.0);
}

double purity(const Partition& truth, const Partition& predicted) {
    check_pair(truth, predicted);
    const auto counts = confusion(truth, predicted);
    double majority = 0;
    for (int i = 0; i < predicted.k; ++i)
        majority += *std::max_element(counts[static_cast<std::size_t>(i)].begin(),
                                      counts[static_cast<std::size_t>(i)].end());
    return majority / static_cast<double>(truth.labels.size());
}

double matching_oracle(const Partition& truth, const Partition& predicted) {
    check_pair(truth, predicted);
    const int m = std::max(truth.k, predicted.k);
    if (m > 6)
        throw parameter_error("matching_oracle: unsupported above 6 clusters");

    const auto counts = confusion(truth, predicted);
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0;
    do {
        double matched = 0;
        for (int i = 0; i < predicted.k; ++i) {
            const int j = perm[static_cast<std::size_t>(i)];
            if (j < truth.k)
                matched += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        best = std::max(best, matched);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(truth.labels.size());
}

MetricReport evaluate(const Partition& truth, const Partition& predicted) {
    MetricReport report;
    report.accuracy = accuracy(truth, predicted, &report.matched_permutation);
    report.nmi = nmi(truth, predicted);
    report.purity = purity(truth, predicted);
    return report;
}

}  // namespace klsnmf
