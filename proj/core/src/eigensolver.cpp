// Partial symmetric eigensolver.
//
// Small problems go through a dense self-adjoint solve. Larger ones use a
// block Krylov method: the subspace [X, AX, A^2 X, ...] is grown with
// twice-applied Gram-Schmidt reorthogonalization and a Rayleigh-Ritz
// projection extracts the smallest Ritz pairs. When the subspace is full,
// half of it is kept as the smallest Ritz vectors (thick restart) and the
// expansion continues from the leading block of them. The block size
// exceeds m so that eigenvalues of multiplicity up to b (one zero eigenvalue
// per connected component) are resolved, which a single-vector Lanczos
// recurrence cannot do.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "l1ssl/error.hpp"
#include "l1ssl/linalg.hpp"

namespace l1ssl {
namespace {

// Fixes the sign of each column so results do not depend on solver internals.
void canonicalize_signs(DenseMatrix& v) {
    for (Index c = 0; c < v.cols(); ++c) {
        const double sum = v.col(c).sum();
        double pivot = sum;
        if (std::abs(sum) <= 1e-10) {
            Index arg = 0;
            v.col(c).cwiseAbs().maxCoeff(&arg);
            pivot = v(arg, c);
        }
        if (pivot < 0.0) v.col(c) = -v.col(c);
    }
}

// Orthonormalizes z against the first `used` columns of q and against
// itself. Columns that collapse below `drop` of their original norm are
// discarded.
DenseMatrix orthonormalize_block(const DenseMatrix& q, Index used, DenseMatrix z) {
    constexpr double drop = 1e-10;
    const Eigen::VectorXd before = z.colwise().norm();
    auto project = [&](DenseMatrix& target) {
        if (used == 0) return;
        const auto basis = q.leftCols(used);
        target.noalias() -= basis * (basis.transpose() * target);
    };
    project(z);
    project(z);
    Index kept = 0;
    for (Index c = 0; c < z.cols(); ++c) {
        Vector col = z.col(c);
        if (before[c] == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (Index k = 0; k < kept; ++k) col -= z.col(k).dot(col) * z.col(k);
        const double after = col.norm();
        if (after <= drop * before[c] || after <= 1e-300) continue;
        z.col(kept++) = col / after;
    }
    DenseMatrix out = z.leftCols(kept);
    if (used > 0 && kept > 0) {
        // In-block elimination can reintroduce tiny components along q.
        project(out);
        for (Index c = 0; c < out.cols(); ++c) {
            for (Index k = 0; k < c; ++k) out.col(c) -= out.col(k).dot(out.col(c)) * out.col(k);
            out.col(c).normalize();
        }
    }
    return out;
}

EigenPairs dense_smallest(const SparseSymMatrix& a, Index m) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a.to_dense());
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("dense eigensolver failed", std::numeric_limits<double>::infinity());
    }
    EigenPairs out;
    out.values = es.eigenvalues().head(m);
    out.vectors = es.eigenvectors().leftCols(m);
    canonicalize_signs(out.vectors);
    return out;
}

double max_residual(const SparseSymMatrix& a, const EigenPairs& p) {
    const DenseMatrix av = a.multiply(p.vectors);
    double worst = 0.0;
    for (Index c = 0; c < p.vectors.cols(); ++c) {
        worst = std::max(worst, (av.col(c) - p.values[c] * p.vectors.col(c)).norm());
    }
    return worst;
}

EigenPairs block_krylov_smallest(const SparseSymMatrix& a, Index m, const EigenOptions& opts) {
    const Index n = a.size();
    const Index block = std::min(n, m + 10);
    const Index capacity = std::min(n, std::max<Index>(4 * block, std::min<Index>(12 * block, 480)));
    const Index budget = opts.max_steps >= 0 ? opts.max_steps : 10 * m + 200;
    const double threshold = opts.tol * std::max(1.0, a.norm_bound() / 2.0);

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DenseMatrix start(n, block);
    for (Index c = 0; c < block; ++c)
        for (Index r = 0; r < n; ++r) start(r, c) = gauss(rng);

    DenseMatrix q(n, capacity);
    DenseMatrix aq(n, capacity);
    Index steps = 0;
    double worst = std::numeric_limits<double>::infinity();

    const DenseMatrix x = orthonormalize_block(q, 0, start);
    q.leftCols(x.cols()) = x;
    aq.leftCols(x.cols()) = a.multiply(x);
    Index used = x.cols();
    Index last_begin = 0;
    Index last_width = used;

    while (true) {
        while (used < capacity && steps < budget) {
            DenseMatrix z = orthonormalize_block(q, used, aq.middleCols(last_begin, last_width));
            ++steps;
            if (z.cols() == 0) break;  // invariant subspace reached
            const Index width = std::min(z.cols(), capacity - used);
            q.middleCols(used, width) = z.leftCols(width);
            aq.middleCols(used, width) = a.multiply(z.leftCols(width));
            last_begin = used;
            last_width = width;
            used += width;
        }

        DenseMatrix h = q.leftCols(used).transpose() * aq.leftCols(used);
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
        if (es.info() != Eigen::Success) throw ConvergenceError("Rayleigh-Ritz solve failed", worst);

        const Index keep = std::min(m, used);
        const DenseMatrix s = es.eigenvectors().leftCols(keep);
        EigenPairs out;
        out.values = es.eigenvalues().head(keep);
        out.vectors = q.leftCols(used) * s;
        const DenseMatrix av = aq.leftCols(used) * s;
        worst = 0.0;
        for (Index c = 0; c < keep; ++c) {
            worst = std::max(worst, (av.col(c) - out.values[c] * out.vectors.col(c)).norm());
        }
        if (keep == m && worst <= threshold) {
            canonicalize_signs(out.vectors);
            out.max_residual = max_residual(a, out);
            return out;
        }
        if (steps >= budget) {
            throw ConvergenceError("block Krylov eigensolver: step budget of " + std::to_string(budget) +
                                       " exhausted",
                                   worst);
        }
        if (used < capacity) {
            // Invariant subspace without the wanted pairs: widen with fresh directions.
            DenseMatrix fresh(n, block);
            for (Index c = 0; c < fresh.cols(); ++c)
                for (Index r = 0; r < n; ++r) fresh(r, c) = gauss(rng);
            DenseMatrix z = orthonormalize_block(q, used, fresh);
            const Index width = std::min(z.cols(), capacity - used);
            if (width == 0) throw ConvergenceError("block Krylov eigensolver: subspace exhausted", worst);
            q.middleCols(used, width) = z.leftCols(width);
            aq.middleCols(used, width) = a.multiply(z.leftCols(width));
            last_begin = used;
            last_width = width;
            used += width;
            continue;
        }

        // Thick restart: keep the smallest Ritz vectors and expand from the
        // leading block of them.
        const Index retain = std::max(block, capacity / 2);
        const DenseMatrix sr = es.eigenvectors().leftCols(retain);
        const DenseMatrix qr = q.leftCols(used) * sr;
        const DenseMatrix aqr = aq.leftCols(used) * sr;
        q.leftCols(retain) = qr;
        aq.leftCols(retain) = aqr;
        used = retain;
        last_begin = 0;
        last_width = block;
    }
}

}  // namespace

EigenPairs smallest_eigenpairs(const SparseSymMatrix& a, Index m, const EigenOptions& opts) {
    const Index n = a.size();
    if (m < 1 || m > n) {
        throw ConfigError("smallest_eigenpairs: m = " + std::to_string(m) + " outside [1, " +
                          std::to_string(n) + "]");
    }
    if (!(opts.tol > 0.0)) throw ConfigError("smallest_eigenpairs: tol must be positive");

    if (n <= opts.dense_threshold || 2 * m >= n) {
        EigenPairs out = dense_smallest(a, m);
        out.max_residual = max_residual(a, out);
        return out;
    }
    return block_krylov_smallest(a, m, opts);
}

}  // namespace l1ssl
