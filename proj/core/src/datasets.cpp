#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "l1ssl/error.hpp"
#include "l1ssl/ssl.hpp"

namespace l1ssl {

LabeledDataset two_moons(Index n, double noise_sd, std::uint64_t seed) {
    if (n < 4 || n % 2 != 0) throw ConfigError("two_moons: n must be even and >= 4, got " + std::to_string(n));
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw ConfigError("two_moons: noise_sd must be >= 0");

    const Index half = n / 2;
    DenseMatrix pts(n, 2);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < half; ++i) {
        const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(half - 1);
        pts(i, 0) = std::cos(t);
        pts(i, 1) = std::sin(t);
        pts(half + i, 0) = 1.0 - std::cos(t);
        pts(half + i, 1) = 0.5 - std::sin(t);
        labels[static_cast<std::size_t>(i)] = 0;
        labels[static_cast<std::size_t>(half + i)] = 1;
    }
    if (noise_sd > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, noise_sd);
        for (Index i = 0; i < n; ++i) {
            pts(i, 0) += gauss(rng);
            pts(i, 1) += gauss(rng);
        }
    }
    return {FeatureMatrix(std::move(pts)), std::move(labels)};
}

LabeledDataset gaussian_blobs(Index n, int centers, Index dims, double sd, double spread, std::uint64_t seed) {
    if (n < 2 || centers < 1 || dims < 1) throw ConfigError("gaussian_blobs: need n >= 2, centers >= 1, dims >= 1");
    if (!(sd >= 0.0) || !(spread >= 0.0)) throw ConfigError("gaussian_blobs: sd and spread must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-spread, spread);
    DenseMatrix mu(centers, dims);
    for (int c = 0; c < centers; ++c)
        for (Index d = 0; d < dims; ++d) mu(c, d) = box(rng);

    std::normal_distribution<double> gauss(0.0, 1.0);
    DenseMatrix pts(n, dims);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const int c = static_cast<int>(i % centers);
        labels[static_cast<std::size_t>(i)] = c;
        for (Index d = 0; d < dims; ++d) pts(i, d) = mu(c, d) + sd * gauss(rng);
    }
    return {FeatureMatrix(std::move(pts)), std::move(labels)};
}

}  // namespace l1ssl
