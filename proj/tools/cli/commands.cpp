#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "l1ssl/error.hpp"
#include "l1ssl/io.hpp"
#include "l1ssl/random.hpp"

namespace l1ssl::cli {
namespace {

// Runs fn(0..count-1) on up to `workers` threads. If several jobs throw, the
// exception of the lowest job index is rethrown so failures are reproducible.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    {
        std::vector<std::jthread> pool;
        const auto threads = std::min<std::size_t>(workers, count);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(mu);
                        if (i < failed_at) {
                            failed_at = i;
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

Json header(const RunConfig& c) {
    Json j;
    j["schema"] = kMetricsSchema;
    j["command"] = to_string(c.command);
    j["config"] = to_json(c);
    return j;
}

Json smoothness_json(const SmoothnessReport& r) {
    return Json{{"l2_smoothness", r.l2_smoothness},
                {"l1_smoothness", r.l1_smoothness},
                {"fitting_error", r.fitting_error}};
}

Json solver_summary(const std::vector<SolverReport>& reports) {
    Index converged = 0, max_iters = 0;
    double max_kkt = 0.0;
    for (const auto& r : reports) {
        converged += r.converged ? 1 : 0;
        max_iters = std::max(max_iters, r.iterations);
        max_kkt = std::max(max_kkt, r.kkt_residual);
    }
    return Json{{"columns", reports.size()},
                {"converged_columns", converged},
                {"max_iterations", max_iters},
                {"max_kkt_residual", max_kkt}};
}

std::string metrics_text(const Json& j) { return j.dump(2) + "\n"; }

int class_count(std::span<const LabelAssignment> labels) {
    int top = -1;
    for (const auto& a : labels) top = std::max(top, a.label);
    if (top < 0) throw ConfigError("no labeled points given");
    return top + 1;
}

int class_count(std::span<const int> truth) {
    if (truth.empty()) throw ConfigError("ground truth is empty");
    return *std::max_element(truth.begin(), truth.end()) + 1;
}

// Rethrows graph failures with the name of the step that built the graph.
template <class Fn>
auto with_context(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const GraphError& e) {
        throw GraphError(where + ": " + e.what(), e.vertex());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(where + ": " + e.what(), e.residual());
    }
}

void check_graph_size(const RunConfig& c, Index n) {
    c.graph.validate(n);
    if (c.m > n) {
        throw ConfigError("m = " + std::to_string(c.m) + " exceeds the number of samples n = " + std::to_string(n));
    }
}

std::vector<double> column(const std::vector<MoonsTrial>& trials, double MoonsTrial::*field) {
    std::vector<double> out;
    out.reserve(trials.size());
    for (const auto& t : trials) out.push_back(t.*field);
    return out;
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw ConfigError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ConfidenceSummary confidence_95(std::span<const double> values) {
    if (values.empty()) throw ConfigError("confidence interval of an empty set");
    ConfidenceSummary s;
    const auto count = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (count - 1.0));
    }
    s.half_width = 1.96 * s.sd / std::sqrt(count);
    return s;
}

MoonsTrial run_moons_trial(const RunConfig& c, std::uint64_t run_seed) {
    MoonsTrial t;
    t.seed = run_seed;
    t.data = two_moons(c.points, c.moons_noise_sd, derive_seed(run_seed, SeedStream::dataset));
    const Index n = t.data.features.samples();
    check_graph_size(c, n);

    const SparseSymMatrix lap = with_context("two-moons graph", [&] {
        return normalized_laplacian(gaussian_knn_graph(t.data.features, c.graph));
    });
    const SpectralBasis full = build_basis(lap, n, derive_seed(run_seed, SeedStream::eigensolver));
    const SpectralBasis basis = full.truncated(c.m);

    const auto sampled =
        sample_labels_per_class(t.data.labels, c.noise.labeled_per_class, 2, derive_seed(run_seed, SeedStream::label_sample));
    NoiseSpec noise = c.noise;
    noise.seed = derive_seed(run_seed, SeedStream::label_noise);
    t.given = inject_label_noise_per_class(sampled, noise, 2);
    for (std::size_t i = 0; i < sampled.size(); ++i) t.flipped += sampled[i].label != t.given[i].label ? 1 : 0;

    const LabelMatrix y = encode_labels(t.given, n, 2);
    t.l1 = l1_ssl_fit(basis, y, c.solver);
    t.l2 = l2_ssl_fit(lap, y, c.solver.lambda);
    const auto mask = unlabeled_mask(n, t.given);
    t.accuracy_l1 = evaluate(t.l1, t.data.labels, mask);
    t.accuracy_l2 = evaluate(t.l2, t.data.labels, mask);

    const Vector target = signed_target(y);
    const SparseCode code = fista_weighted_l1(basis, target, c.solver);
    const Vector f1 = basis.vectors() * code.alpha;
    const Vector f2 = l2_ssl_solve(lap, target, c.solver.lambda);
    t.smooth_l1 = smoothness_report(full, lap, f1, target);
    t.smooth_l2 = smoothness_report(full, lap, f2, target);
    return t;
}

CommandResult cmd_moons_demo(const RunConfig& c) {
    std::vector<MoonsTrial> trials(static_cast<std::size_t>(c.runs));
    parallel_for(trials.size(), c.workers, [&](std::size_t r) { trials[r] = run_moons_trial(c, derive_seed(c.seed, r)); });

    Json j = header(c);
    Json runs = Json::array();
    int fig3 = 0;
    for (std::size_t r = 0; r < trials.size(); ++r) {
        const auto& t = trials[r];
        const bool sparser = t.smooth_l1.l1_smoothness < t.smooth_l2.l1_smoothness;
        fig3 += sparser ? 1 : 0;
        runs.push_back(Json{{"run", r},
                            {"seed", t.seed},
                            {"flipped_labels", t.flipped},
                            {"accuracy", Json{{"l1_ssl", t.accuracy_l1}, {"l2_ssl", t.accuracy_l2}}},
                            {"smoothness", Json{{"l1_ssl", smoothness_json(t.smooth_l1)},
                                                {"l2_ssl", smoothness_json(t.smooth_l2)}}},
                            {"l1_smoothness_lower", sparser},
                            {"solver", solver_summary(t.l1.reports)}});
    }
    const auto acc1 = column(trials, &MoonsTrial::accuracy_l1);
    const auto acc2 = column(trials, &MoonsTrial::accuracy_l2);
    j["runs"] = runs;
    j["summary"] = Json{
        {"median_accuracy", Json{{"l1_ssl", median(acc1)}, {"l2_ssl", median(acc2)}}},
        {"min_accuracy",
         Json{{"l1_ssl", *std::min_element(acc1.begin(), acc1.end())},
              {"l2_ssl", *std::min_element(acc2.begin(), acc2.end())}}},
        {"l1_smoothness_lower_runs", fig3},
    };

    std::ostringstream points;
    points << "run,index,x,y,truth,given,pred_l1,pred_l2\n";
    for (std::size_t r = 0; r < trials.size(); ++r) {
        const auto& t = trials[r];
        std::vector<int> given(t.data.labels.size(), -1);
        for (const auto& a : t.given) given[static_cast<std::size_t>(a.index)] = a.label;
        const auto& x = t.data.features.data();
        for (Index i = 0; i < x.rows(); ++i) {
            const auto u = static_cast<std::size_t>(i);
            points << r << ',' << i << ',' << io::format_double(x(i, 0)) << ',' << io::format_double(x(i, 1)) << ','
                   << t.data.labels[u] << ',' << given[u] << ',' << t.l1.labels[u] << ',' << t.l2.labels[u] << '\n';
        }
    }
    return {j, {{"points.csv", points.str()}, {"metrics.json", metrics_text(j)}}};
}

CommandResult cmd_classify(const RunConfig& c) {
    const FeatureMatrix x = io::read_features(c.inputs.front());
    const auto labels = io::read_labels(*c.labels);
    std::vector<int> truth;
    if (c.truth) truth = io::read_truth(*c.truth);
    const Index n = x.samples();
    if (c.truth && static_cast<Index>(truth.size()) != n) {
        throw DimensionError("truth has " + std::to_string(truth.size()) + " rows, features have " +
                             std::to_string(n));
    }
    check_graph_size(c, n);
    const int classes = class_count(labels);
    const LabelMatrix y = encode_labels(labels, n, classes);

    const SparseSymMatrix lap =
        with_context("classify", [&] { return normalized_laplacian(gaussian_knn_graph(x, c.graph)); });
    const SpectralBasis basis =
        with_context("classify", [&] { return build_basis(lap, c.m, derive_seed(c.seed, SeedStream::eigensolver)); });
    const Solution sol = with_context("classify", [&] { return l1_ssl_fit(basis, y, c.solver, c.workers); });

    Json j = header(c);
    j["data"] = Json{{"samples", n}, {"dims", x.dims()}, {"classes", classes}, {"labeled", labels.size()}};
    Json cols = Json::array();
    for (std::size_t k = 0; k < sol.reports.size(); ++k) {
        const auto& r = sol.reports[k];
        cols.push_back(Json{{"class", k},
                            {"iterations", r.iterations},
                            {"converged", r.converged},
                            {"final_objective", r.final_objective},
                            {"kkt_residual", r.kkt_residual}});
    }
    j["solver"] = cols;
    if (c.truth) {
        const auto mask = unlabeled_mask(n, labels);
        const std::vector<bool> all(static_cast<std::size_t>(n), true);
        Json ev{{"accuracy_all", evaluate(sol, truth, all)}};
        if (std::find(mask.begin(), mask.end(), true) != mask.end()) {
            ev["accuracy_unlabeled"] = evaluate(sol, truth, mask);
        }
        j["evaluation"] = ev;
    }

    std::ostringstream pred;
    io::write_predictions(pred, sol.labels);
    return {j, {{"predictions.txt", pred.str()}, {"metrics.json", metrics_text(j)}}};
}

CommandResult cmd_noise_sweep(const RunConfig& c) {
    struct Shared {
        FeatureMatrix x;
        std::vector<int> truth;
        SparseSymMatrix lap;
        SpectralBasis basis;
    };
    std::optional<Shared> shared;
    int classes = 2;
    if (!c.inputs.empty()) {
        FeatureMatrix x = io::read_features(c.inputs.front());
        std::vector<int> truth = io::read_truth(*c.truth);
        if (static_cast<Index>(truth.size()) != x.samples()) {
            throw DimensionError("truth has " + std::to_string(truth.size()) + " rows, features have " +
                                 std::to_string(x.samples()));
        }
        check_graph_size(c, x.samples());
        classes = class_count(truth);
        SparseSymMatrix lap =
            with_context("noise-sweep", [&] { return normalized_laplacian(gaussian_knn_graph(x, c.graph)); });
        SpectralBasis basis = with_context(
            "noise-sweep", [&] { return build_basis(lap, c.m, derive_seed(c.seed, SeedStream::eigensolver)); });
        shared.emplace(Shared{std::move(x), std::move(truth), std::move(lap), std::move(basis)});
    }

    const auto cells = c.noise_grid.size();
    const auto runs = static_cast<std::size_t>(c.runs);
    // acc[cell][run] for each method
    std::vector<std::vector<double>> acc1(cells, std::vector<double>(runs)), acc2 = acc1;

    parallel_for(runs, c.workers, [&](std::size_t r) {
        const std::uint64_t run_seed = derive_seed(c.seed, r);
        std::optional<Shared> local;
        const Shared* data = shared ? &*shared : nullptr;
        if (!data) {
            LabeledDataset moons = two_moons(c.points, c.moons_noise_sd, derive_seed(run_seed, SeedStream::dataset));
            check_graph_size(c, moons.features.samples());
            SparseSymMatrix lap = with_context(
                "noise-sweep", [&] { return normalized_laplacian(gaussian_knn_graph(moons.features, c.graph)); });
            SpectralBasis basis = build_basis(lap, c.m, derive_seed(run_seed, SeedStream::eigensolver));
            local.emplace(Shared{std::move(moons.features), std::move(moons.labels), std::move(lap), std::move(basis)});
            data = &*local;
        }
        const Index n = data->x.samples();
        const auto sampled = sample_labels_per_class(data->truth, c.noise.labeled_per_class, classes,
                                                     derive_seed(run_seed, SeedStream::label_sample));
        const auto mask = unlabeled_mask(n, sampled);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            NoiseSpec noise{c.noise.labeled_per_class, c.noise_grid[cell], derive_seed(run_seed, SeedStream::label_noise)};
            const auto given = inject_label_noise(sampled, noise, classes);
            const LabelMatrix y = encode_labels(given, n, classes);
            acc1[cell][r] = evaluate(l1_ssl_fit(data->basis, y, c.solver), data->truth, mask);
            acc2[cell][r] = evaluate(l2_ssl_fit(data->lap, y, c.solver.lambda), data->truth, mask);
        }
    });

    Json j = header(c);
    Json grid = Json::array();
    std::ostringstream csv;
    csv << "noise_fraction,method,mean_accuracy,ci95_half_width\n";
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const auto s1 = confidence_95(acc1[cell]);
        const auto s2 = confidence_95(acc2[cell]);
        auto method = [](const ConfidenceSummary& s, const std::vector<double>& a) {
            return Json{{"mean_accuracy", s.mean}, {"sd", s.sd}, {"ci95_half_width", s.half_width}, {"accuracies", a}};
        };
        grid.push_back(Json{{"noise_fraction", c.noise_grid[cell]},
                            {"l1_ssl", method(s1, acc1[cell])},
                            {"l2_ssl", method(s2, acc2[cell])}});
        const std::string f = io::format_double(c.noise_grid[cell]);
        csv << f << ",l1_ssl," << io::format_double(s1.mean) << ',' << io::format_double(s1.half_width) << '\n';
        csv << f << ",l2_ssl," << io::format_double(s2.mean) << ',' << io::format_double(s2.half_width) << '\n';
    }
    j["classes"] = classes;
    j["cells"] = grid;
    return {j, {{"sweep.csv", csv.str()}, {"metrics.json", metrics_text(j)}}};
}

CommandResult cmd_refine_bow(const RunConfig& c) {
    const BowMatrix visual(io::read_bow(c.inputs[0]));
    const BowMatrix textual(io::read_bow(c.inputs[1]));
    if (visual.documents() != textual.documents()) {
        throw DimensionError("visual BOW has " + std::to_string(visual.documents()) + " documents, textual has " +
                             std::to_string(textual.documents()));
    }
    c.refine_visual.validate(visual.documents());
    c.refine_textual.validate(textual.documents());

    const CoRefineResult res = with_context("refine-bow", [&] {
        return co_refine(visual, textual, c.refine_visual, c.refine_textual,
                         derive_seed(c.seed, SeedStream::eigensolver), c.workers);
    });

    auto summary = [](const BowMatrix& in, const RefineResult& r) {
        const DenseMatrix& y = in.data();
        Index changed = 0;
        double max_change = 0.0;
        for (Index i = 0; i < y.rows(); ++i) {
            for (Index k = 0; k < y.cols(); ++k) {
                const double d = std::abs(r.refined(i, k) - y(i, k));
                if (d != 0.0) ++changed;
                max_change = std::max(max_change, d);
            }
        }
        return Json{{"documents", y.rows()},
                    {"words", y.cols()},
                    {"changed_entries", changed},
                    {"max_abs_change", max_change},
                    {"solver", solver_summary(r.reports)}};
    };

    Json j = header(c);
    j["visual"] = summary(visual, res.visual);
    j["textual"] = summary(textual, res.textual);

    std::ostringstream v, t;
    io::write_bow(v, res.visual.refined);
    io::write_bow(t, res.textual.refined);
    return {j, {{"refined_visual.txt", v.str()}, {"refined_textual.txt", t.str()}, {"metrics.json", metrics_text(j)}}};
}

CommandResult cmd_eigen_dump(const RunConfig& c) {
    const FeatureMatrix x = io::read_features(c.inputs.front());
    check_graph_size(c, x.samples());
    const SparseSymMatrix lap =
        with_context("eigen-dump", [&] { return normalized_laplacian(gaussian_knn_graph(x, c.graph)); });
    EigenOptions opts;
    opts.seed = derive_seed(c.seed, SeedStream::eigensolver);
    const EigenPairs pairs = with_context("eigen-dump", [&] { return smallest_eigenpairs(lap, c.m, opts); });

    Json j = header(c);
    std::vector<double> values(pairs.values.data(), pairs.values.data() + pairs.values.size());
    j["samples"] = x.samples();
    j["eigenvalues"] = values;
    j["max_residual"] = pairs.max_residual;

    std::ostringstream dump;
    io::write_eigen_dump(dump, pairs.values, pairs.vectors);
    return {j, {{"eigen.txt", dump.str()}, {"metrics.json", metrics_text(j)}}};
}

CommandResult execute(const RunConfig& config) {
    config.validate();
    switch (config.command) {
        case Command::moons_demo: return cmd_moons_demo(config);
        case Command::classify: return cmd_classify(config);
        case Command::noise_sweep: return cmd_noise_sweep(config);
        case Command::refine_bow: return cmd_refine_bow(config);
        case Command::eigen_dump: return cmd_eigen_dump(config);
    }
    throw ConfigError("unknown command");
}

}  // namespace l1ssl::cli
