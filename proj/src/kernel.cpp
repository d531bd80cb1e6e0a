#include "klsnmf/kernel.hpp"

#include <cmath>

#include "klsnmf/matrix_io.hpp"

namespace klsnmf {

KernelMatrix KernelMatrix::rbf(const DataMatrix& x, double radius) {
    if (radius <= 0) throw parameter_error("rbf kernel: radius must be positive");
    if (x.n() < 2) throw input_error("rbf kernel: need at least 2 samples");
    if (!x.features.allFinite()) throw input_error("rbf kernel: non-finite data entry");

    const int n = x.n();
    const double inv = 1.0 / (2.0 * radius * radius);
    Matrix k(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double d2 = (x.features.col(i) - x.features.col(j)).squaredNorm();
            const double v = std::exp(-d2 * inv);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return KernelMatrix(std::move(k), radius);
}

KernelMatrix KernelMatrix::linear(const DataMatrix& x) {
    if (x.n() < 2) throw input_error("linear kernel: need at least 2 samples");
    if (!x.features.allFinite()) throw input_error("linear kernel: non-finite data entry");

    const int n = x.n();
    Matrix k(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = x.features.col(i).dot(x.features.col(j));
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    if (k.minCoeff() < 0)
        throw input_error("linear kernel: Gram matrix has negative entries; "
                          "data must be nonnegative");
    return KernelMatrix(std::move(k));
}

KernelMatrix KernelMatrix::from_matrix(Matrix k, double symmetry_tolerance) {
    if (k.rows() != k.cols()) throw input_error("kernel: matrix is not square");
    if (k.rows() < 2) throw input_error("kernel: need at least 2 samples");
    if (!k.allFinite()) throw input_error("kernel: non-finite entry");

    const double dev = (k - k.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(k.cwiseAbs().maxCoeff(), 1e-300);
    if (dev > symmetry_tolerance * scale)
        throw input_error("kernel: asymmetry " + std::to_string(dev) +
                          " exceeds tolerance");
    if (k.minCoeff() < 0) throw input_error("kernel: negative entry");

    Matrix sym = 0.5 * (k + k.transpose());
    return KernelMatrix(std::move(sym));
}

KernelMatrix KernelMatrix::load(const std::string& path, double symmetry_tolerance) {
    return from_matrix(read_matrix_file(path), symmetry_tolerance);
}

void KernelMatrix::save(const std::string& path) const {
    write_matrix_file(path, k_);
}

DistanceMatrix kernel_distance(const KernelMatrix& k) {
    const Matrix& km = k.matrix();
    const int n = k.size();
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            // clamp cancellation round-off; D_K must stay nonnegative
            const double v = std::max(km(i, i) + km(j, j) - 2.0 * km(i, j), 0.0);
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return DistanceMatrix(std::move(d));
}

KernelDiagnostics validate_kernel(const Matrix& k) {
    KernelDiagnostics diag;
    diag.symmetry_deviation = (k - k.transpose()).cwiseAbs().maxCoeff();
    diag.min_entry = k.minCoeff();
    diag.max_entry = k.maxCoeff();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (k + k.transpose()),
                                              Eigen::EigenvaluesOnly);
    diag.min_eigenvalue = eig.eigenvalues().minCoeff();
    diag.max_eigenvalue = eig.eigenvalues().maxCoeff();
    diag.psd_within_tolerance =
        diag.min_eigenvalue >= -1e-8 * std::abs(diag.max_eigenvalue);
    return diag;
}

KernelDiagnostics validate_kernel(const KernelMatrix& k) {
    return validate_kernel(k.matrix());
}

}  // namespace klsnmf
