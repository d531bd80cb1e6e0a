#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "klsnmf/types.hpp"

namespace klsnmf {

/// Raw samples, one column per sample (p features x n samples), with
/// optional ground-truth class labels in [0, class_count).
struct DataMatrix {
    Matrix features;                         // p x n
    std::optional<std::vector<int>> labels;  // size n when present

    int p() const { return static_cast<int>(features.rows()); }
    int n() const { return static_cast<int>(features.cols()); }

    /// Number of distinct classes; 0 for unlabeled data.
    int class_count() const;

    double min_entry() const { return features.size() ? features.minCoeff() : 0.0; }
};

/// Loads rows-are-samples text data. When has_labels is set the final field
/// of each row is taken as class label; labels are re-indexed to a dense
/// [0, class_count) range in order of first appearance of the sorted values.
/// Entries must be finite. Negative entries are accepted here (kernel paths
/// allow them); the plain-NMF baseline rejects them at solve time.
DataMatrix load_dense_matrix(const std::string& path, bool has_labels);
DataMatrix parse_dense_matrix(std::istream& in, bool has_labels,
                              const std::string& origin = "<stream>");

/// Writes in the same rows-are-samples format, label column last when present.
void write_dense_matrix(const std::string& path, const DataMatrix& data);

/// Isotropic Gaussian clusters around the given centers, labels = center
/// index. The whole matrix is shifted (not clipped) to be entrywise
/// nonnegative so cluster geometry is preserved. Deterministic per seed.
DataMatrix synth_blobs(const std::vector<std::vector<double>>& centers,
                       int per_cluster, double noise_sd, std::uint64_t seed);

struct SubsetSpec {
    int classes_per_subset = 2;  // N
    int count = 10;
    std::uint64_t seed = 0;
};

/// Draws `count` distinct class combinations uniformly without replacement
/// (all of them when fewer exist) and materializes one DataMatrix per
/// combination with labels re-indexed to [0, N). Uses its own generator,
/// independent of solver seeds.
std::vector<DataMatrix> sample_class_subsets(const DataMatrix& data,
                                             const SubsetSpec& spec);

/// Per-feature min-max rescale to [0, 1]; constant features map to 0.
/// Off by default everywhere, exposed for kernels on mixed-scale features.
DataMatrix minmax_rescale(const DataMatrix& data);

/// Parses the Semeion layout (256 grey values then a 10-wide one-hot label
/// block per row) into a labeled DataMatrix.
DataMatrix parse_semeion(std::istream& in);

}  // namespace klsnmf
