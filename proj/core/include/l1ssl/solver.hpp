#pragma once

#include <vector>

#include "l1ssl/linalg.hpp"
#include "l1ssl/spectral.hpp"

namespace l1ssl {

enum class StepRule {
    /// Constant Lipschitz estimate 1, exact for orthonormal columns.
    exact_one,
    /// Beck-Teboulle backtracking: L <- eta L until the quadratic model
    /// upper-bounds the smooth part.
    backtracking,
};

struct SolverOptions {
    double lambda = 0.01;
    Index max_iters = 2000;
    double rel_tol = 1e-8;
    double kkt_tol = 1e-7;  // relative to max |A^T y|; gates the rel_tol stop
    StepRule step = StepRule::exact_one;
    double eta = 2.0;  // backtracking growth factor, > 1
    double l0 = 0.5;   // initial backtracking Lipschitz estimate, > 0

    void validate() const;
};

struct SolverReport {
    Index iterations = 0;
    std::vector<double> objective_trace;  // running best objective per iteration
    double final_objective = 0.0;
    double kkt_residual = 0.0;
    double lipschitz = 1.0;  // step constant in use at exit
    bool converged = false;
    double wall_seconds = 0.0;  // not reproducible; kept out of metrics documents
};

struct SparseCode {
    Vector alpha;
    SolverReport report;
};

/// sign(x) max(|x| - t, 0). Throws ConfigError if t < 0.
double soft_threshold(double x, double t);

/// 1/2 ||A alpha - y||^2 + lambda sum_i w_i |alpha_i|.
double weighted_l1_objective(const DenseMatrix& design, const Vector& weights, const Vector& y,
                             double lambda, const Vector& alpha);

/// Largest violation of the subgradient optimality conditions at alpha,
/// with g = A^T (A alpha - y): |g_i| - lambda w_i when alpha_i = 0, and
/// |g_i + lambda w_i sign(alpha_i)| otherwise.
double kkt_residual(const DenseMatrix& design, const Vector& weights, const Vector& y, double lambda,
                    const Vector& alpha);

/// FISTA for the weighted lasso over a general design matrix, started at
/// zero. Returns the best iterate seen; stops when the relative objective
/// change drops below rel_tol and the iterate satisfies the optimality
/// conditions to kkt_tol (momentum is restarted when only the first holds),
/// otherwise reports converged = false.
SparseCode fista_weighted_l1(const DenseMatrix& design, const Vector& weights, const Vector& y,
                             const SolverOptions& opts);

/// Reduced L1-SSL problem: design V_m, weights S_ii^{1/2}.
SparseCode fista_weighted_l1(const SpectralBasis& basis, const Vector& y, const SolverOptions& opts);

/// 1/2 ||V_m alpha - y||^2 + lambda sum_i S_ii^{1/2} |alpha_i|.
double objective(const SpectralBasis& basis, const Vector& y, double lambda, const Vector& alpha);

/// L2-SSL closed form: solves (I + lambda L) f = y to 1e-10 relative residual.
Vector l2_ssl_solve(const SparseSymMatrix& laplacian, const Vector& y, double lambda);

/// 1/2 ||f - y||^2 + lambda/2 f^T L f.
double l2_ssl_objective(const SparseSymMatrix& laplacian, const Vector& y, double lambda, const Vector& f);

}  // namespace l1ssl
