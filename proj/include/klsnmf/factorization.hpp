#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "klsnmf/data.hpp"
#include "klsnmf/kernel.hpp"
#include "klsnmf/types.hpp"

namespace klsnmf {

enum class InitStrategy { UniformRandom, ScaledRandom };

struct SolverConfig {
    int k = 2;                  // cluster count / factor rank
    double lambda = 0.0;        // local-similarity weight, >= 0
    int max_iterations = 500;
    double tolerance = 1e-6;    // relative objective change per iteration
    int plateau_length = 3;     // consecutive sub-tolerance iterations to stop
    double epsilon = 1e-10;     // added to update denominators
    std::uint64_t seed = 0;
    InitStrategy init = InitStrategy::UniformRandom;

    void validate() const;  // throws parameter_error
};

/// Score matrix W and coefficient matrix G, both n x k and entrywise >= 0.
/// Row i of W are the weights of sample i on the kernel-space basis; row j
/// of G is the representation of sample j, whose argmax acts as a cluster
/// indicator once the columns are near-orthogonal.
struct FactorPair {
    Matrix w;
    Matrix g;

    int n() const { return static_cast<int>(w.rows()); }
    int k() const { return static_cast<int>(w.cols()); }
};

enum class Termination { Converged, MaxIterations };

struct SolveTrace {
    std::vector<double> objective;  // size iterations + 1; [0] is initial
    std::vector<double> delta_w;    // Frobenius norm of consecutive W changes
    std::vector<double> delta_g;
    double kkt_w = 0;
    double kkt_g = 0;
    double orthogonality = 0;  // orthogonality_deviation of final G
    int iterations = 0;
    Termination termination = Termination::MaxIterations;
    int backtracks = 0;  // iterations where the G step was damped
    int stalls = 0;      // iterations where the G step was rejected entirely
    int rescales = 0;    // scale-band rebalances of the (W, G) pair
    double min_entry = 0;    // smallest W/G entry seen over all iterates
    bool all_finite = true;  // no NaN/Inf in any iterate
};

/// Thrown when the solve loop encounters a non-finite objective; carries the
/// trace up to the failure point.
class numerical_error : public std::runtime_error {
  public:
    numerical_error(const std::string& what, SolveTrace trace)
        : std::runtime_error(what), trace(std::move(trace)) {}

    SolveTrace trace;
};

/// Shared products for one half-iteration. Refreshed before each use; the
/// W-dependent members are recomputed after the W update and before the
/// G update so no product is ever stale.
struct UpdateWorkspace {
    Matrix kw;      // K W
    Matrix dw;      // D_K W
    Matrix kg;      // K G
    Matrix dg;      // D_K G
    Matrix gtg;     // G^T G
    Matrix wtkw;    // W^T K W
    Matrix gtkw;    // G^T K W   (eliminated-multiplier piece E+)
    Matrix gtdw;    // G^T D_K W (E- is lambda times this)

    void refresh_w_products(const Matrix& k, const Matrix& d, const Matrix& w);
    void refresh_g_products(const Matrix& k, const Matrix& d, const Matrix& g);
    void refresh_coupling(const Matrix& g);  // gtkw, gtdw from current kw, dw
};

/// Strictly positive random factors, uniform over (0, 1] (ScaledRandom
/// divides by sqrt(k)). Deterministic for a fixed seed; W is drawn first,
/// row-major.
FactorPair init_factors(int n, const SolverConfig& config);

/// 1/2 tr(K - 2 K W G^T + G W^T K W G^T) + lambda tr(W^T D_K G).
double objective(const KernelMatrix& k, const DistanceMatrix& d,
                 const FactorPair& f, double lambda);

/// One multiplicative W step:
///   W_ik <- W_ik sqrt( (K G)_ik / ((K W G^T G)_ik + lambda (D_K G)_ik + eps) ).
/// Entries with zero numerator map to 0; output is entrywise >= 0.
Matrix update_w(const KernelMatrix& k, const DistanceMatrix& d,
                const FactorPair& f, double lambda, double epsilon);

/// One multiplicative G step:
///   G_ik <- G_ik sqrt( ((K W)_ik + lambda (G G^T D_K W)_ik)
///                    / (lambda (D_K W)_ik + (G G^T K W)_ik + eps) ).
Matrix update_g(const KernelMatrix& k, const DistanceMatrix& d,
                const FactorPair& f, double lambda, double epsilon);

/// Complementary-slackness residual of the W subproblem:
/// max |(-K G + lambda D_K G + K W G^T G) .* W| over the largest magnitude
/// among the gradient's constituent terms. Zero at fixed points of update_w.
double kkt_residual_w(const KernelMatrix& k, const DistanceMatrix& d,
                      const FactorPair& f, double lambda);

/// Same for G with the eliminated multiplier Theta = G^T K W
/// - lambda G^T D_K W - W^T K W:
/// max |(-K W + G C + lambda D_K W + G Theta) .* G| / max term magnitude.
double kkt_residual_g(const KernelMatrix& k, const DistanceMatrix& d,
                      const FactorPair& f, double lambda);

/// Off-diagonal Frobenius mass of G^T G over its diagonal Frobenius mass;
/// 0 iff columns are mutually orthogonal (and for all-zero G).
double orthogonality_deviation(const Matrix& g);

struct SolveResult {
    FactorPair factors;
    SolveTrace trace;
};

/// Alternates update_w then update_g from init_factors until the relative
/// objective change stays below tolerance for plateau_length consecutive
/// iterations, or max_iterations is reached.
///
/// The recorded objective sequence is nonincreasing: the G step is accepted
/// only when the full iteration does not increase the objective, otherwise
/// the multiplicative step is damped (G .* ratio^eta, eta halved) and, if no
/// damping works, skipped for that iteration. The W step needs no such
/// control. Column scales of (W, G) are rebalanced when a G column norm
/// leaves [2^-6, 2^6]; this exploits the exact invariance of the objective
/// under (W diag(c), G diag(c)^-1) and prevents scale runaway.
SolveResult solve_klsnmf(const KernelMatrix& k, const SolverConfig& config);

struct BaselineResult {
    Matrix basis;         // U, p x k
    Matrix coefficients;  // G, n x k
    std::vector<double> objective;  // |X - U G^T|_F^2 per iteration
    std::vector<double> delta_u;    // Frobenius norms of consecutive changes
    std::vector<double> delta_g;
    int iterations = 0;
    Termination termination = Termination::MaxIterations;
};

/// Plain NMF via the standard multiplicative updates on |X - U G^T|_F^2.
/// Rejects negative data.
BaselineResult solve_nmf_baseline(const DataMatrix& x, const SolverConfig& config);

}  // namespace klsnmf
