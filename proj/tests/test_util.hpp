#pragma once

#include <random>
#include <vector>

#include "l1ssl/graph.hpp"
#include "l1ssl/linalg.hpp"
#include "oracles.hpp"

namespace testutil {

using l1ssl::DenseMatrix;
using l1ssl::Index;
using l1ssl::Vector;

inline oracle::Mat to_oracle(const DenseMatrix& a) {
    oracle::Mat out = oracle::zeros(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
    return out;
}

inline oracle::Vec to_oracle(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline Vector to_vector(const oracle::Vec& v) {
    Vector out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Index>(i)] = v[i];
    return out;
}

inline Vector random_vector(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = g(rng);
    return v;
}

/// Connected weighted graph: a ring with random weights plus random chords.
inline l1ssl::WeightMatrix random_connected_graph(Index n, std::mt19937_64& rng, double chord_probability = 0.15) {
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    std::bernoulli_distribution chord(chord_probability);
    std::vector<l1ssl::SparseSymMatrix::Entry> entries;
    for (Index i = 0; i < n; ++i) {
        if (n == 2 && i == 1) break;
        entries.push_back({i, (i + 1) % n, weight(rng)});
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 2; j < n; ++j)
            if (!(i == 0 && j == n - 1) && chord(rng)) entries.push_back({i, j, weight(rng)});
    return {l1ssl::SparseSymMatrix::from_entries(n, entries), l1ssl::KernelKind::precomputed};
}

}  // namespace testutil
