#pragma once

#include <vector>

#include "klsnmf/types.hpp"

namespace klsnmf {

/// Hard cluster assignment: labels[i] in [0, k).
struct Partition {
    std::vector<int> labels;
    int k = 0;
    std::vector<int> degenerate_rows;  // all-zero G rows assigned cluster 0

    int n() const { return static_cast<int>(labels.size()); }
};

/// Builds a Partition from raw labels; k = max label + 1.
Partition make_partition(const std::vector<int>& labels);

/// Row-wise argmax of G; ties break toward the smaller column index and
/// all-zero rows are assigned cluster 0 and flagged.
Partition assign_clusters(const Matrix& g);

struct MetricReport {
    double accuracy = 0;
    double nmi = 0;
    double purity = 0;
    /// Optimal predicted-cluster -> truth-class map used by accuracy;
    /// -1 for clusters matched to a padding column.
    std::vector<int> matched_permutation;
};

/// Best fraction of samples explained by any one-to-one cluster-to-class
/// map, computed by optimal assignment on the (padded square) confusion
/// matrix.
double accuracy(const Partition& truth, const Partition& predicted,
                std::vector<int>* matched_permutation = nullptr);

/// Mutual information normalized by max(H(truth), H(predicted)). Two
/// single-cluster partitions score 1; a single-cluster partition against
/// anything else scores 0. Symmetric in its arguments.
double nmi(const Partition& a, const Partition& b);

/// Mean majority-class fraction over predicted clusters.
double purity(const Partition& truth, const Partition& predicted);

/// Exhaustive-search accuracy over all cluster-to-class bijections.
/// Reference oracle; requires max(k_truth, k_pred) <= 6.
double matching_oracle(const Partition& truth, const Partition& predicted);

/// All three metrics plus the matched permutation in one pass.
MetricReport evaluate(const Partition& truth, const Partition& predicted);

}  // namespace klsnmf
