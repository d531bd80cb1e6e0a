#pragma once

#include <optional>
#include <string>

#include "klsnmf/data.hpp"
#include "klsnmf/types.hpp"

namespace klsnmf {

/// n x n symmetric, entrywise-nonnegative similarity matrix. Instances are
/// immutable after construction and safe to share across threads.
class KernelMatrix {
  public:
    /// k_ij = exp(-|x_i - x_j|^2 / (2 r^2)); unit diagonal, radius recorded.
    static KernelMatrix rbf(const DataMatrix& x, double radius);

    /// Gram matrix k_ij = <x_i, x_j>. Requires a nonnegative Gram result,
    /// which holds for nonnegative data.
    static KernelMatrix linear(const DataMatrix& x);

    /// Wraps a precomputed kernel. Symmetry is required within
    /// `symmetry_tolerance` (relative to the largest entry magnitude) and the
    /// stored matrix is symmetrized exactly; entries must be finite and >= 0.
    static KernelMatrix from_matrix(Matrix k, double symmetry_tolerance = 1e-8);

    static KernelMatrix load(const std::string& path,
                             double symmetry_tolerance = 1e-8);

    int size() const { return static_cast<int>(k_.rows()); }
    const Matrix& matrix() const { return k_; }
    std::optional<double> radius_used() const { return radius_used_; }

    void save(const std::string& path) const;

  private:
    explicit KernelMatrix(Matrix k, std::optional<double> radius = std::nullopt)
        : k_(std::move(k)), radius_used_(radius) {}

    Matrix k_;
    std::optional<double> radius_used_;
};

/// Kernel-induced pairwise squared distances d_ij = k_ii + k_jj - 2 k_ij,
/// symmetric with zero diagonal. Negative round-off is clamped to 0 so the
/// matrix stays entrywise nonnegative.
class DistanceMatrix {
  public:
    explicit DistanceMatrix(Matrix d) : d_(std::move(d)) {}

    int size() const { return static_cast<int>(d_.rows()); }
    const Matrix& matrix() const { return d_; }

  private:
    Matrix d_;
};

DistanceMatrix kernel_distance(const KernelMatrix& k);

struct KernelDiagnostics {
    double symmetry_deviation = 0;  // max |k_ij - k_ji|
    double min_eigenvalue = 0;
    double max_eigenvalue = 0;
    double min_entry = 0;
    double max_entry = 0;
    bool psd_within_tolerance = false;  // min eig >= -1e-8 * |max eig|
};

/// Reports the invariant checks without mutating the kernel.
KernelDiagnostics validate_kernel(const Matrix& k);
KernelDiagnostics validate_kernel(const KernelMatrix& k);

}  // namespace klsnmf
