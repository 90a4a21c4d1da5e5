#include "l1ssl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "l1ssl/error.hpp"

namespace l1ssl {

void SolverOptions::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("lambda must be a finite value >= 0, got " + std::to_string(lambda));
    }
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be > 0");
    if (!(kkt_tol > 0.0)) throw ConfigError("kkt_tol must be > 0");
    if (step == StepRule::backtracking) {
        if (!(eta > 1.0)) throw ConfigError("backtracking eta must be > 1");
        if (!(l0 > 0.0)) throw ConfigError("backtracking L0 must be > 0");
    }
}

double soft_threshold(double x, double t) {
    if (!(t >= 0.0)) throw ConfigError("soft_threshold: negative threshold " + std::to_string(t));
    const double mag = std::abs(x) - t;
    if (mag <= 0.0) return 0.0;
    return x > 0.0 ? mag : -mag;
}

namespace {

void check_problem(const DenseMatrix& design, const Vector& weights, const Vector& y) {
    if (design.rows() != y.size()) {
        throw DimensionError("weighted lasso: design has " + std::to_string(design.rows()) +
                             " rows but y has length " + std::to_string(y.size()));
    }
    if (design.cols() != weights.size()) {
        throw DimensionError("weighted lasso: weight count does not match design columns");
    }
    if ((weights.array() < 0.0).any()) throw ConfigError("weighted lasso: weights must be >= 0");
}

double penalty(const Vector& weights, double lambda, const Vector& alpha) {
    return lambda * weights.cwiseProduct(alpha.cwiseAbs()).sum();
}

}  // namespace

double weighted_l1_objective(const DenseMatrix& design, const Vector& weights, const Vector& y,
                             double lambda, const Vector& alpha) {
    check_problem(design, weights, y);
    if (alpha.size() != design.cols()) throw DimensionError("objective: alpha length mismatch");
    return 0.5 * (design * alpha - y).squaredNorm() + penalty(weights, lambda, alpha);
}

double kkt_residual(const DenseMatrix& design, const Vector& weights, const Vector& y, double lambda,
                    const Vector& alpha) {
    check_problem(design, weights, y);
    const Vector g = design.transpose() * (design * alpha - y);
    double worst = 0.0;
    for (Index i = 0; i < alpha.size(); ++i) {
        const double t = lambda * weights[i];
        const double v = alpha[i] == 0.0 ? std::max(0.0, std::abs(g[i]) - t)
                                          : std::abs(g[i] + t * (alpha[i] > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, v);
    }
    return worst;
}

SparseCode fista_weighted_l1(const DenseMatrix& design, const Vector& weights, const Vector& y,
                             const SolverOptions& opts) {
    const auto started = std::chrono::steady_clock::now();
    opts.validate();
    check_problem(design, weights, y);
    const Index m = design.cols();
    const Vector thresholds = opts.lambda * weights;

    // Smooth part through the m x m Gram matrix: 1/2 a^T G a - b^T a + 1/2 ||y||^2.
    const DenseMatrix gram = design.transpose() * design;
    const Vector aty = design.transpose() * y;
    const double half_yy = 0.5 * y.squaredNorm();
    auto smooth = [&](const Vector& a) { return std::max(0.0, 0.5 * a.dot(gram * a) - aty.dot(a) + half_yy); };

    auto prox = [&](const Vector& point, const Vector& grad, double lip) {
        Vector out(m);
        for (Index i = 0; i < m; ++i) out[i] = soft_threshold(point[i] - grad[i] / lip, thresholds[i] / lip);
        return out;
    };

    const double kkt_scale = opts.kkt_tol * std::max(1.0, aty.cwiseAbs().maxCoeff());
    auto gram_kkt = [&](const Vector& a) {
        const Vector g = gram * a - aty;
        double worst = 0.0;
        for (Index i = 0; i < m; ++i) {
            const double v = a[i] == 0.0 ? std::max(0.0, std::abs(g[i]) - thresholds[i])
                                         : std::abs(g[i] + (a[i] > 0.0 ? thresholds[i] : -thresholds[i]));
            worst = std::max(worst, v);
        }
        return worst;
    };

    SparseCode result;
    SolverReport& rep = result.report;
    Vector x_prev = Vector::Zero(m);
    Vector z = x_prev;
    double t = 1.0;
    double lip = opts.step == StepRule::exact_one ? 1.0 : opts.l0;

    Vector best = x_prev;
    double best_obj = 0.5 * y.squaredNorm();
    double prev_obj = best_obj;

    for (Index k = 1; k <= opts.max_iters; ++k) {
        const Vector grad = gram * z - aty;
        const double fz = smooth(z);

        Vector x = prox(z, grad, lip);
        double fx = smooth(x);
        if (opts.step == StepRule::backtracking) {
            for (int guard = 0; guard < 200; ++guard) {
                const Vector d = x - z;
                const double model = fz + grad.dot(d) + 0.5 * lip * d.squaredNorm();
                if (fx <= model + 1e-14 * std::max(1.0, std::abs(model))) break;
                lip *= opts.eta;
                x = prox(z, grad, lip);
                fx = smooth(x);
            }
        }
        const double obj = fx + penalty(weights, opts.lambda, x);

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = x + ((t - 1.0) / t_next) * (x - x_prev);
        x_prev = x;
        t = t_next;

        if (obj < best_obj) {
            best_obj = obj;
            best = x;
        }
        rep.objective_trace.push_back(best_obj);
        rep.iterations = k;
        if (std::abs(obj - prev_obj) / std::max(1.0, prev_obj) < opts.rel_tol) {
            // A flat objective on an ill-conditioned design can be a momentum
            // stall rather than the minimum; check optimality before stopping.
            if (gram_kkt(x) <= kkt_scale) {
                rep.converged = true;
                break;
            }
            t = 1.0;
            z = x;
        }
        prev_obj = obj;
    }

    result.alpha = std::move(best);
    rep.final_objective = best_obj;
    rep.lipschitz = lip;
    rep.kkt_residual = kkt_residual(design, weights, y, opts.lambda, result.alpha);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

SparseCode fista_weighted_l1(const SpectralBasis& basis, const Vector& y, const SolverOptions& opts) {
    if (y.size() != basis.n()) {
        throw DimensionError("fista: y has length " + std::to_string(y.size()) + ", basis has n = " +
                             std::to_string(basis.n()));
    }
    return fista_weighted_l1(basis.vectors(), basis.sqrt_eigenvalues(), y, opts);
}

double objective(const SpectralBasis& basis, const Vector& y, double lambda, const Vector& alpha) {
    return weighted_l1_objective(basis.vectors(), basis.sqrt_eigenvalues(), y, lambda, alpha);
}

Vector l2_ssl_solve(const SparseSymMatrix& laplacian, const Vector& y, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("lambda must be a finite value >= 0, got " + std::to_string(lambda));
    }
    if (y.size() != laplacian.size()) throw DimensionError("l2_ssl_solve: y length mismatch");
    if (lambda == 0.0) return y;
    return conjugate_gradient(laplacian.shifted(1.0, lambda), y, 1e-10).x;
}

double l2_ssl_objective(const SparseSymMatrix& laplacian, const Vector& y, double lambda, const Vector& f) {
    return 0.5 * (f - y).squaredNorm() + 0.5 * lambda * f.dot(spmv(laplacian, f));
}

}  // namespace l1ssl
