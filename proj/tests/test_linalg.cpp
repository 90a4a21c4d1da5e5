#include <gtest/gtest.h>

#include <random>

#include "l1ssl/error.hpp"
#include "l1ssl/linalg.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace l1ssl;
using testutil::to_oracle;

namespace {

SparseSymMatrix two_node_laplacian() {
    return SparseSymMatrix::from_entries(2, {{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, -1.0}});
}

SparseSymMatrix random_symmetric(Index n, std::mt19937_64& rng, double density = 0.4) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::bernoulli_distribution keep(density);
    std::vector<SparseSymMatrix::Entry> e;
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j)
            if (i == j || keep(rng)) e.push_back({i, j, g(rng)});
    return SparseSymMatrix::from_entries(n, e);
}

// B^T B + shift I, dense, for PSD and SPD test matrices.
DenseMatrix random_psd(Index n, Index rank, double shift, std::mt19937_64& rng) {
    DenseMatrix b(rank, n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (Index i = 0; i < rank; ++i)
        for (Index j = 0; j < n; ++j) b(i, j) = g(rng);
    return b.transpose() * b + shift * DenseMatrix::Identity(n, n);
}

}  // namespace

TEST(SparseSymMatrix, StoresUpperTriangleOnce) {
    const auto a = SparseSymMatrix::from_entries(3, {{1, 0, 2.0}, {2, 2, 5.0}, {0, 2, 0.0}});
    EXPECT_EQ(a.stored(), 2u);
    EXPECT_DOUBLE_EQ(a.coeff(0, 1), 2.0);
    EXPECT_DOUBLE_EQ(a.coeff(1, 0), 2.0);
    EXPECT_DOUBLE_EQ(a.coeff(0, 2), 0.0);
    EXPECT_DOUBLE_EQ(a.coeff(2, 2), 5.0);
}

TEST(SparseSymMatrix, RejectsDuplicateSlots) {
    EXPECT_THROW(SparseSymMatrix::from_entries(2, {{0, 1, 1.0}, {1, 0, 1.0}}), ConfigError);
    EXPECT_THROW(SparseSymMatrix::from_entries(2, {{0, 2, 1.0}}), DimensionError);
}

TEST(SparseSymMatrix, DenseRoundTripAndShift) {
    std::mt19937_64 rng(3);
    const auto a = random_symmetric(7, rng);
    const DenseMatrix d = a.to_dense();
    EXPECT_TRUE(d.isApprox(d.transpose()));
    const auto b = SparseSymMatrix::from_dense(d);
    EXPECT_EQ((b.to_dense() - d).cwiseAbs().maxCoeff(), 0.0);
    const DenseMatrix s = a.shifted(2.0, -0.5).to_dense();
    EXPECT_LT((s - (2.0 * DenseMatrix::Identity(7, 7) - 0.5 * d)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Spmv, LaplacianKernelAndTopVector) {
    const auto l = two_node_laplacian();
    const Vector ones = Vector::Ones(2);
    const Vector y0 = spmv(l, ones);
    EXPECT_DOUBLE_EQ(y0[0], 0.0);
    EXPECT_DOUBLE_EQ(y0[1], 0.0);
    Vector x(2);
    x << 1.0, -1.0;
    const Vector y1 = spmv(l, x);
    EXPECT_DOUBLE_EQ(y1[0], 2.0);
    EXPECT_DOUBLE_EQ(y1[1], -2.0);
}

TEST(Spmv, MatchesDenseOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 1 + static_cast<Index>(rng() % 50);
        const auto a = random_symmetric(n, rng);
        const Vector x = testutil::random_vector(n, rng);
        const auto expect = oracle::multiply(to_oracle(a.to_dense()), to_oracle(x));
        const Vector got = spmv(a, x);
        for (Index i = 0; i < n; ++i) EXPECT_NEAR(got[i], expect[static_cast<std::size_t>(i)], 1e-12);
    }
}

TEST(Spmv, DimensionMismatch) {
    EXPECT_THROW(spmv(two_node_laplacian(), Vector::Ones(3)), DimensionError);
}

TEST(Eigen, TwoNodeLaplacian) {
    const auto p = smallest_eigenpairs(two_node_laplacian(), 2);
    EXPECT_NEAR(p.values[0], 0.0, 1e-14);
    EXPECT_NEAR(p.values[1], 2.0, 1e-14);
    EXPECT_NEAR(std::abs(p.vectors(0, 0)), std::sqrt(0.5), 1e-14);
    EXPECT_NEAR(p.vectors(0, 0), p.vectors(1, 0), 1e-14);
    EXPECT_NEAR(p.vectors(0, 1), -p.vectors(1, 1), 1e-14);
}

TEST(Eigen, DenseMatchesJacobiOracle) {
    std::mt19937_64 rng(5);
    const DenseMatrix a = random_psd(20, 20, 0.0, rng);
    const auto expect = oracle::jacobi_eigen(to_oracle(a));
    const auto got = smallest_eigenpairs(SparseSymMatrix::from_dense(a), 5);
    for (Index i = 0; i < 5; ++i) EXPECT_NEAR(got.values[i], expect.values[static_cast<std::size_t>(i)], 1e-8);
}

// Forces the iterative path on a graph Laplacian with three components, so
// the zero eigenvalue has multiplicity three.
TEST(Eigen, IterativePathResolvesRepeatedEigenvalues) {
    std::mt19937_64 rng(17);
    std::vector<SparseSymMatrix::Entry> w;
    const Index block = 30, n = 3 * block;
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (Index b = 0; b < 3; ++b)
        for (Index i = 0; i < block; ++i) {
            w.push_back({b * block + i, b * block + (i + 1) % block, u(rng)});
            w.push_back({b * block + i, b * block + (i + 7) % block, u(rng)});
        }
    DenseMatrix wd = DenseMatrix::Zero(n, n);
    for (const auto& e : w) {
        wd(e.row, e.col) += e.value;
        wd(e.col, e.row) += e.value;
    }
    const auto lo = oracle::normalized_laplacian(to_oracle(wd));
    DenseMatrix ld(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) ld(i, j) = lo[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const auto l = SparseSymMatrix::from_dense(ld, 1e-15);

    EigenOptions opts;
    opts.dense_threshold = 0;
    opts.seed = 9;
    const Index m = 8;
    const auto got = smallest_eigenpairs(l, m, opts);
    const auto expect = oracle::jacobi_eigen(lo);
    for (Index i = 0; i < m; ++i) EXPECT_NEAR(got.values[i], expect.values[static_cast<std::size_t>(i)], 1e-8);
    EXPECT_NEAR(got.values[2], 0.0, 1e-8);
    const DenseMatrix gram = got.vectors.transpose() * got.vectors;
    EXPECT_LT((gram - DenseMatrix::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE(got.max_residual, 1e-6 * std::max(1.0, l.norm_bound()));
    for (Index i = 1; i < m; ++i) EXPECT_LE(got.values[i - 1], got.values[i]);

    const auto again = smallest_eigenpairs(l, m, opts);
    EXPECT_EQ((again.vectors - got.vectors).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Eigen, ValuesNonnegativeForPsd) {
    std::mt19937_64 rng(23);
    const auto p = smallest_eigenpairs(SparseSymMatrix::from_dense(random_psd(30, 10, 0.0, rng)), 25);
    for (Index i = 0; i < p.values.size(); ++i) EXPECT_GE(p.values[i], -1e-8);
}

TEST(Eigen, BudgetExhaustionReportsResidual) {
    std::mt19937_64 rng(29);
    const auto a = SparseSymMatrix::from_dense(random_psd(600, 600, 0.0, rng));
    EigenOptions opts;
    opts.max_steps = 1;
    try {
        smallest_eigenpairs(a, 3, opts);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.residual(), 0.0);
    }
}

TEST(Eigen, RejectsBadM) {
    EXPECT_THROW(smallest_eigenpairs(two_node_laplacian(), 3), ConfigError);
    EXPECT_THROW(smallest_eigenpairs(two_node_laplacian(), 0), ConfigError);
}

TEST(ConjugateGradient, IdentitySystem) {
    const Vector b = Vector::LinSpaced(6, -1.0, 2.0);
    const Vector x = solve_spd(SparseSymMatrix::identity(6), b, 1e-12);
    EXPECT_LT((x - b).norm(), 1e-12);
}

TEST(ConjugateGradient, TwoNodeRegularizedLaplacian) {
    Vector b(2);
    b << 1.0, 0.0;
    // [[2,-1],[-1,2]]^{-1} [1,0] = [2/3, 1/3]
    const Vector x = solve_spd(two_node_laplacian().shifted(1.0, 1.0), b, 1e-14);
    EXPECT_NEAR(x[0], 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(x[1], 1.0 / 3.0, 1e-12);
    // [[3,-2],[-2,3]]^{-1} [1,0] = [0.6, 0.4]
    const Vector x2 = solve_spd(two_node_laplacian().shifted(1.0, 2.0), b, 1e-14);
    EXPECT_NEAR(x2[0], 0.6, 1e-12);
    EXPECT_NEAR(x2[1], 0.4, 1e-12);
}

TEST(ConjugateGradient, MatchesDirectSolveOracle) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const DenseMatrix a = random_psd(10, 10, 0.5, rng);
        const Vector b = testutil::random_vector(10, rng);
        const auto expect = oracle::solve(to_oracle(a), to_oracle(b));
        const auto res = conjugate_gradient(SparseSymMatrix::from_dense(a), b, 1e-13);
        for (Index i = 0; i < 10; ++i) EXPECT_NEAR(res.x[i], expect[static_cast<std::size_t>(i)], 1e-8);
        EXPECT_LE((a * res.x - b).norm(), 1e-13 * b.norm() * 1.0000001);
    }
}

TEST(ConjugateGradient, BudgetExhaustion) {
    std::mt19937_64 rng(37);
    const DenseMatrix a = random_psd(40, 40, 1e-3, rng);
    EXPECT_THROW(conjugate_gradient(SparseSymMatrix::from_dense(a), testutil::random_vector(40, rng), 1e-14, 2),
                 ConvergenceError);
}
