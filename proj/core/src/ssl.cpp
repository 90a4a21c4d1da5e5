#include "l1ssl/ssl.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "l1ssl/error.hpp"

namespace l1ssl {

LabelMatrix LabelMatrix::from_counts(DenseMatrix counts) {
    if (!counts.allFinite()) throw ConfigError("label/count matrix has non-finite entries");
    if ((counts.array() < 0.0).any()) throw ConfigError("label/count matrix has negative entries");
    return LabelMatrix(std::move(counts));
}

LabelMatrix encode_labels(std::span<const LabelAssignment> assignments, Index n, int classes) {
    if (n < 1) throw ConfigError("encode_labels: n must be >= 1");
    if (classes < 1) throw ConfigError("encode_labels: need at least one class");
    DenseMatrix y = DenseMatrix::Zero(n, classes);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (const auto& a : assignments) {
        if (a.index < 0 || a.index >= n) {
            throw ConfigError("label index " + std::to_string(a.index) + " outside [0, " + std::to_string(n) + ")");
        }
        if (a.label < 0 || a.label >= classes) {
            throw ConfigError("class " + std::to_string(a.label) + " outside [0, " + std::to_string(classes) + ")");
        }
        if (seen[static_cast<std::size_t>(a.index)]) {
            throw ConfigError("sample " + std::to_string(a.index) + " is labeled twice");
        }
        seen[static_cast<std::size_t>(a.index)] = true;
        y(a.index, a.label) = 1.0;
    }
    return LabelMatrix(std::move(y));
}

std::vector<int> argmax_labels(const DenseMatrix& scores) {
    std::vector<int> out(static_cast<std::size_t>(scores.rows()), 0);
    for (Index i = 0; i < scores.rows(); ++i) {
        int best = 0;
        for (Index j = 1; j < scores.cols(); ++j) {
            if (scores(i, j) > scores(i, best)) best = static_cast<int>(j);
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

Solution l1_ssl_fit(const SpectralBasis& basis, const LabelMatrix& y, const SolverOptions& opts,
                    unsigned workers) {
    opts.validate();
    if (basis.n() != y.samples()) {
        throw DimensionError("l1_ssl_fit: basis has n = " + std::to_string(basis.n()) + ", labels have " +
                             std::to_string(y.samples()) + " rows");
    }
    const Index classes = y.classes();
    Solution sol;
    sol.scores = DenseMatrix::Zero(y.samples(), classes);
    sol.reports.resize(static_cast<std::size_t>(classes));

    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (Index j = next++; j < classes; j = next++) {
            try {
                SparseCode code = fista_weighted_l1(basis, y.data().col(j), opts);
                sol.scores.col(j) = basis.vectors() * code.alpha;
                sol.reports[static_cast<std::size_t>(j)] = std::move(code.report);
            } catch (const Error& e) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::make_exception_ptr(
                        Error("class " + std::to_string(j) + ": " + e.what()));
                }
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(classes)));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    sol.labels = argmax_labels(sol.scores);
    return sol;
}

Solution l2_ssl_fit(const SparseSymMatrix& laplacian, const LabelMatrix& y, double lambda) {
    if (laplacian.size() != y.samples()) throw DimensionError("l2_ssl_fit: size mismatch");
    Solution sol;
    sol.scores = DenseMatrix::Zero(y.samples(), y.classes());
    for (Index j = 0; j < y.classes(); ++j) sol.scores.col(j) = l2_ssl_solve(laplacian, y.data().col(j), lambda);
    sol.labels = argmax_labels(sol.scores);
    return sol;
}

void NoiseSpec::validate() const {
    if (labeled_per_class < 1) throw ConfigError("labels per class must be >= 1");
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
        throw ConfigError("noise fraction must lie in [0, 1], got " + std::to_string(noise_fraction));
    }
}

namespace {

void corrupt(std::vector<LabelAssignment>& out, std::vector<std::size_t> pool, double fraction, int classes,
             std::mt19937_64& rng) {
    const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(pool.size()) + 1e-9));
    if (count == 0) return;
    // Partial Fisher-Yates: the first `count` slots become a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    for (std::size_t i = 0; i < count; ++i) {
        auto& a = out[pool[i]];
        std::uniform_int_distribution<int> wrong(0, classes - 2);
        int replacement = wrong(rng);
        if (replacement >= a.label) ++replacement;
        a.label = replacement;
    }
}

}  // namespace

std::vector<LabelAssignment> inject_label_noise(std::span<const LabelAssignment> assignments,
                                                const NoiseSpec& noise_spec, int classes) {
    noise_spec.validate();
    if (classes < 2 && noise_spec.noise_fraction > 0.0) {
        throw ConfigError("label noise needs at least two classes");
    }
    std::vector<LabelAssignment> out(assignments.begin(), assignments.end());
    std::vector<std::size_t> pool(out.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::mt19937_64 rng(noise_spec.seed);
    corrupt(out, std::move(pool), noise_spec.noise_fraction, classes, rng);
    return out;
}

std::vector<LabelAssignment> inject_label_noise_per_class(std::span<const LabelAssignment> assignments,
                                                          const NoiseSpec& noise_spec, int classes) {
    noise_spec.validate();
    if (classes < 2 && noise_spec.noise_fraction > 0.0) {
        throw ConfigError("label noise needs at least two classes");
    }
    std::vector<LabelAssignment> out(assignments.begin(), assignments.end());
    std::mt19937_64 rng(noise_spec.seed);
    for (int c = 0; c < classes; ++c) {
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i].label == c) pool.push_back(i);
        corrupt(out, std::move(pool), noise_spec.noise_fraction, classes, rng);
    }
    return out;
}

std::vector<LabelAssignment> sample_labels_per_class(std::span<const int> truth, Index per_class, int classes,
                                                     std::uint64_t seed) {
    if (per_class < 1) throw ConfigError("labels per class must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<LabelAssignment> out;
    for (int c = 0; c < classes; ++c) {
        std::vector<Index> members;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (truth[i] == c) members.push_back(static_cast<Index>(i));
        if (static_cast<Index>(members.size()) < per_class) {
            throw ConfigError("class " + std::to_string(c) + " has only " + std::to_string(members.size()) +
                              " samples, cannot label " + std::to_string(per_class));
        }
        for (Index i = 0; i < per_class; ++i) {
            std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), members.size() - 1);
            std::swap(members[static_cast<std::size_t>(i)], members[pick(rng)]);
            out.push_back({members[static_cast<std::size_t>(i)], c});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    return out;
}

double evaluate(std::span<const int> predicted, std::span<const int> truth, const std::vector<bool>& mask) {
    if (predicted.size() != truth.size() || mask.size() != truth.size()) {
        throw DimensionError("evaluate: predictions, truth and mask must have equal length");
    }
    std::size_t total = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!mask[i]) continue;
        ++total;
        if (predicted[i] == truth[i]) ++hits;
    }
    if (total == 0) throw ConfigError("evaluate: evaluation mask is empty");
    return static_cast<double>(hits) / static_cast<double>(total);
}

double evaluate(const Solution& solution, std::span<const int> truth, const std::vector<bool>& mask) {
    return evaluate(solution.labels, truth, mask);
}

std::vector<bool> unlabeled_mask(Index n, std::span<const LabelAssignment> assignments) {
    std::vector<bool> mask(static_cast<std::size_t>(n), true);
    for (const auto& a : assignments) {
        if (a.index >= 0 && a.index < n) mask[static_cast<std::size_t>(a.index)] = false;
    }
    return mask;
}

Vector signed_target(const LabelMatrix& y) {
    if (y.classes() != 2) throw DimensionError("signed_target needs exactly two classes");
    return y.data().col(0) - y.data().col(1);
}

}  // namespace l1ssl
