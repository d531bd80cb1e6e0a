#include "klsnmf/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace klsnmf {

namespace {

constexpr double kResidualFloor = 1e-30;
constexpr double kScaleBandLow = 1.0 / 64.0;   // 2^-6
constexpr double kScaleBandHigh = 64.0;        // 2^6
constexpr double kDescentSlack = 1e-12;        // relative, for float wiggle
constexpr double kBacktrackMinEta = 1e-9;

void check_shapes(const KernelMatrix& k, const FactorPair& f) {
    if (f.w.rows() != k.size() || f.g.rows() != k.size() ||
        f.w.cols() != f.g.cols())
        throw input_error("factor shapes do not match the kernel");
}

void check_distance(const KernelMatrix& k, const DistanceMatrix& d) {
    if (d.size() != k.size())
        throw input_error("distance matrix size does not match the kernel");
}

}  // namespace

void SolverConfig::validate() const {
    if (k < 1) throw parameter_error("config: k must be >= 1");
    if (lambda < 0) throw parameter_error("config: lambda must be >= 0");
    if (max_iterations < 1) throw parameter_error("config: max_iterations must be >= 1");
    if (!(tolerance > 0)) throw parameter_error("config: tolerance must be > 0");
    if (plateau_length < 1) throw parameter_error("config: plateau_length must be >= 1");
    if (!(epsilon > 0)) throw parameter_error("config: epsilon must be > 0");
}

void UpdateWorkspace::refresh_w_products(const Matrix& k, const Matrix& d,
                                         const Matrix& w) {
    kw.noalias() = k * w;
    dw.noalias() = d * w;
    wtkw.noalias() = w.transpose() * kw;
}

void UpdateWorkspace::refresh_g_products(const Matrix& k, const Matrix& d,
                                         const Matrix& g) {
    kg.noalias() = k * g;
    dg.noalias() = d * g;
    gtg.noalias() = g.transpose() * g;
}

void UpdateWorkspace::refresh_coupling(const Matrix& g) {
    gtkw.noalias() = g.transpose() * kw;
    gtdw.noalias() = g.transpose() * dw;
}

FactorPair init_factors(int n, const SolverConfig& config) {
    if (config.k < 1) throw parameter_error("init_factors: k must be >= 1");
    if (n <= config.k)
        throw parameter_error("init_factors: need k < n, got k=" +
                              std::to_string(config.k) + ", n=" + std::to_string(n));

    std::mt19937_64 gen(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double scale =
        config.init == InitStrategy::ScaledRandom ? 1.0 / std::sqrt(config.k) : 1.0;

    FactorPair f;
    f.w.resize(n, config.k);
    f.g.resize(n, config.k);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < config.k; ++c) f.w(i, c) = (1.0 - unit(gen)) * scale;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < config.k; ++c) f.g(i, c) = (1.0 - unit(gen)) * scale;
    return f;
}

double objective(const KernelMatrix& k, const DistanceMatrix& d,
                 const FactorPair& f, double lambda) {
    check_shapes(k, f);
    check_distance(k, d);
    if (lambda < 0) throw parameter_error("objective: lambda must be >= 0");

    UpdateWorkspace ws;
    ws.refresh_w_products(k.matrix(), d.matrix(), f.w);
    ws.gtg.noalias() = f.g.transpose() * f.g;
    ws.dg.noalias() = d.matrix() * f.g;

    const double fit = k.matrix().trace() -
                       2.0 * ws.kw.cwiseProduct(f.g).sum() +
                       ws.wtkw.cwiseProduct(ws.gtg).sum();
    return 0.5 * fit + lambda * f.w.cwiseProduct(ws.dg).sum();
}

namespace {

Matrix w_rule(const FactorPair& f, const UpdateWorkspace& ws, double lambda,
              double epsilon) {
    Matrix den = ws.kw * ws.gtg + lambda * ws.dg;
    return f.w.array() * (ws.kg.array() / (den.array() + epsilon)).sqrt();
}

Matrix g_rule(const FactorPair& f, const UpdateWorkspace& ws, double lambda,
              double epsilon) {
    Matrix num = ws.kw + lambda * (f.g * ws.gtdw);
    Matrix den = lambda * ws.dw + f.g * ws.gtkw;
    return f.g.array() * (num.array() / (den.array() + epsilon)).sqrt();
}

}  // namespace

Matrix update_w(const KernelMatrix& k, const DistanceMatrix& d,
                const FactorPair& f, double lambda, double epsilon) {
    check_shapes(k, f);
    check_distance(k, d);
    if (!(epsilon > 0)) throw parameter_error("update_w: epsilon must be > 0");

    UpdateWorkspace ws;
    ws.kw.noalias() = k.matrix() * f.w;
    ws.refresh_g_products(k.matrix(), d.matrix(), f.g);
    return w_rule(f, ws, lambda, epsilon);
}

Matrix update_g(const KernelMatrix& k, const DistanceMatrix& d,
                const FactorPair& f, double lambda, double epsilon) {
    check_shapes(k, f);
    check_distance(k, d);
    if (!(epsilon > 0)) throw parameter_error("update_g: epsilon must be > 0");

    UpdateWorkspace ws;
    ws.kw.noalias() = k.matrix() * f.w;
    ws.dw.noalias() = d.matrix() * f.w;
    ws.refresh_coupling(f.g);
    return g_rule(f, ws, lambda, epsilon);
}

double kkt_residual_w(const KernelMatrix& k, const DistanceMatrix& d,
                      const FactorPair& f, double lambda) {
    check_shapes(k, f);
    check_distance(k, d);

    const Matrix kg = k.matrix() * f.g;
    const Matrix dg_scaled = lambda * (d.matrix() * f.g);
    const Matrix quad = k.matrix() * f.w * (f.g.transpose() * f.g);
    const Matrix grad = quad + dg_scaled - kg;

    const double num = grad.cwiseProduct(f.w).cwiseAbs().maxCoeff();
    const double den = std::max({kg.cwiseAbs().maxCoeff(),
                                 dg_scaled.cwiseAbs().maxCoeff(),
                                 quad.cwiseAbs().maxCoeff(), kResidualFloor});
    return num / den;
}

double kkt_residual_g(const KernelMatrix& k, const DistanceMatrix& d,
                      const FactorPair& f, double lambda) {
    check_shapes(k, f);
    check_distance(k, d);

    const Matrix a = k.matrix() * f.w;             // K W
    const Matrix b_scaled = lambda * (d.matrix() * f.w);
    const Matrix c = f.w.transpose() * a;          // W^T K W
    const Matrix theta = f.g.transpose() * a - f.g.transpose() * b_scaled - c;
    const Matrix gc = f.g * c;
    const Matrix gtheta = f.g * theta;
    const Matrix grad = gc + b_scaled + gtheta - a;

    const double num = grad.cwiseProduct(f.g).cwiseAbs().maxCoeff();
    const double den = std::max({a.cwiseAbs().maxCoeff(),
                                 b_scaled.cwiseAbs().maxCoeff(),
                                 gc.cwiseAbs().maxCoeff(),
                                 gtheta.cwiseAbs().maxCoeff(), kResidualFloor});
    return num / den;
}

double orthogonality_deviation(const Matrix& g) {
    if (g.size() == 0) return 0.0;
    const Matrix gram = g.transpose() * g;
    const double diag = gram.diagonal().norm();
    if (diag == 0.0) return 0.0;
    const double total = gram.norm();
    const double off2 = std::max(total * total - diag * diag, 0.0);
    return std::sqrt(off2) / diag;
}

SolveResult solve_klsnmf(const KernelMatrix& k, const SolverConfig& config) {
    config.validate();
    const DistanceMatrix d = kernel_distance(k);

    SolveResult result;
    FactorPair& f = result.factors;
    SolveTrace& trace = result.trace;
    f = init_factors(k.size(), config);

    double f_prev = objective(k, d, f, config.lambda);
    if (!std::isfinite(f_prev))
        throw numerical_error("non-finite initial objective", trace);
    trace.objective.push_back(f_prev);
    trace.min_entry = std::min(f.w.minCoeff(), f.g.minCoeff());

    int plateau = 0;
    for (int it = 1; it <= config.max_iterations; ++it) {
        const Matrix w_old = f.w;
        const Matrix g_old = f.g;

        f.w = update_w(k, d, f, config.lambda, config.epsilon);
        Matrix g_cand = update_g(k, d, f, config.lambda, config.epsilon);

        double f_new = objective(k, d, {f.w, g_cand}, config.lambda);
        const double budget = f_prev + kDescentSlack * std::abs(f_prev);
        if (!(f_new <= budget)) {
            // The G rule is derived with the orthogonality multiplier
            // eliminated at G^T G = I and can increase the objective away
            // from that manifold; damp it until the iteration descends.
            ++trace.backtracks;
            const Matrix ratio =
                (g_old.array() > 0.0).select(g_cand.array() / g_old.array(), 1.0);
            double eta = 0.5;
            bool accepted = false;
            while (eta > kBacktrackMinEta) {
                Matrix g_try = g_old.array() * ratio.array().pow(eta);
                const double f_try = objective(k, d, {f.w, g_try}, config.lambda);
                if (f_try <= budget) {
                    g_cand = std::move(g_try);
                    f_new = f_try;
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted) {
                ++trace.stalls;
                g_cand = g_old;
                f_new = objective(k, d, {f.w, g_cand}, config.lambda);
            }
        }
        f.g = std::move(g_cand);

        // Rebalance runaway column scales; the objective is exactly invariant
        // under (W diag(c), G diag(c)^-1).
        bool rescaled = false;
        for (int c = 0; c < config.k; ++c) {
            const double norm = f.g.col(c).norm();
            if (norm > 0 && (norm < kScaleBandLow || norm > kScaleBandHigh)) {
                f.w.col(c) *= norm;
                f.g.col(c) /= norm;
                rescaled = true;
            }
        }
        if (rescaled) ++trace.rescales;

        if (!std::isfinite(f_new)) {
            trace.iterations = it;
            throw numerical_error("non-finite objective at iteration " +
                                      std::to_string(it),
                                  trace);
        }

        trace.objective.push_back(f_new);
        trace.delta_w.push_back((f.w - w_old).norm());
        trace.delta_g.push_back((f.g - g_old).norm());
        trace.min_entry =
            std::min({trace.min_entry, f.w.minCoeff(), f.g.minCoeff()});
        trace.all_finite = trace.all_finite && f.w.allFinite() && f.g.allFinite();
        trace.iterations = it;

        const double rel =
            std::abs(f_new - f_prev) / std::max(std::abs(f_prev), 1e-300);
        f_prev = f_new;
        plateau = rel < config.tolerance ? plateau + 1 : 0;
        if (plateau >= config.plateau_length) {
            trace.termination = Termination::Converged;
            break;
        }
    }

    trace.kkt_w = kkt_residual_w(k, d, f, config.lambda);
    trace.kkt_g = kkt_residual_g(k, d, f, config.lambda);
    trace.orthogonality = orthogonality_deviation(f.g);
    return result;
}

BaselineResult solve_nmf_baseline(const DataMatrix& x, const SolverConfig& config) {
    config.validate();
    if (x.min_entry() < 0)
        throw input_error("baseline NMF: data has negative entries");
    const int n = x.n();
    if (n <= config.k)
        throw parameter_error("baseline NMF: need k < n");

    std::mt19937_64 gen(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double scale =
        config.init == InitStrategy::ScaledRandom ? 1.0 / std::sqrt(config.k) : 1.0;

    BaselineResult result;
    Matrix& u = result.basis;
    Matrix& g = result.coefficients;
    u.resize(x.p(), config.k);
    g.resize(n, config.k);
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (int c = 0; c < config.k; ++c) u(i, c) = (1.0 - unit(gen)) * scale;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < config.k; ++c) g(i, c) = (1.0 - unit(gen)) * scale;

    const Matrix& xm = x.features;
    double f_prev = (xm - u * g.transpose()).squaredNorm();
    result.objective.push_back(f_prev);
    int plateau = 0;
    for (int it = 1; it <= config.max_iterations; ++it) {
        const Matrix u_old = u;
        const Matrix g_old = g;
        Matrix num_u = xm * g;
        Matrix den_u = u * (g.transpose() * g);
        u = u.array() * num_u.array() / (den_u.array() + config.epsilon);

        Matrix num_g = xm.transpose() * u;
        Matrix den_g = g * (u.transpose() * u);
        g = g.array() * num_g.array() / (den_g.array() + config.epsilon);

        const double f_new = (xm - u * g.transpose()).squaredNorm();
        result.objective.push_back(f_new);
        result.delta_u.push_back((u - u_old).norm());
        result.delta_g.push_back((g - g_old).norm());
        result.iterations = it;
        const double rel =
            std::abs(f_new - f_prev) / std::max(std::abs(f_prev), 1e-300);
        f_prev = f_new;
        plateau = rel < config.tolerance ? plateau + 1 : 0;
        if (plateau >= config.plateau_length) {
            result.termination = Termination::Converged;
            break;
        }
    }
    return result;
}

}  // namespace klsnmf
