#include "run.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "l1ssl/error.hpp"
#include "l1ssl/io.hpp"

namespace l1ssl::cli {
namespace {

// Raw flag values. Each subcommand registers the subset it accepts.
struct Flags {
    double sigma = 0, lambda = 0, gamma = 0, moons_noise = 0;
    Index k = 0, m = 0, labels_per_class = 0, points = 0, max_iters = 0;
    int runs = 0;
    std::vector<double> noise_fraction;
    std::string preset;
    Overrides o;
    std::vector<std::string> inputs;
    std::string labels, truth, output;
};

struct Registered {
    std::map<std::string, CLI::Option*> opts;

    bool given(const std::string& name) const {
        const auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

void add_common(CLI::App& app, Flags& f, Registered& r) {
    r.opts["seed"] = app.add_option("--seed", f.o.seed, "master seed")->capture_default_str();
    r.opts["workers"] = app.add_option("--workers", f.o.workers, "worker threads")->capture_default_str();
    r.opts["output"] = app.add_option("--output", f.output, "output directory");
}

void add_graph(CLI::App& app, Flags& f, Registered& r) {
    r.opts["sigma"] = app.add_option("--sigma", f.sigma, "Gaussian kernel width");
    r.opts["k"] = app.add_option("--k", f.k, "nearest neighbors per vertex");
    r.opts["mutual"] = app.add_flag("--mutual", f.o.mutual, "keep only mutual k-NN edges");
}

void add_solver(CLI::App& app, Flags& f, Registered& r) {
    r.opts["lambda"] = app.add_option("--lambda", f.lambda, "regularization weight");
    r.opts["m"] = app.add_option("--m", f.m, "number of eigenvectors");
    r.opts["max_iters"] = app.add_option("--max-iters", f.max_iters, "solver iteration cap");
    r.opts["backtracking"] = app.add_flag("--backtracking", f.o.backtracking, "backtracking step size");
}

void add_preset(CLI::App& app, Flags& f, Registered& r, std::vector<std::string> allowed) {
    r.opts["preset"] = app.add_option("--preset", f.preset, "named parameter set")->check(CLI::IsMember(allowed));
}

void add_moons(CLI::App& app, Flags& f, Registered& r) {
    r.opts["points"] = app.add_option("--points", f.points, "generated two-moons size");
    r.opts["moons_noise"] = app.add_option("--moons-noise", f.moons_noise, "two-moons coordinate noise sd");
    r.opts["labels_per_class"] = app.add_option("--labels-per-class", f.labels_per_class, "labeled points per class");
    r.opts["runs"] = app.add_option("--runs", f.runs, "number of seeded runs");
}

Overrides resolve(Flags& f, const Registered& r) {
    Overrides o = f.o;
    if (r.given("sigma")) o.sigma = f.sigma;
    if (r.given("k")) o.k = f.k;
    if (r.given("lambda")) o.lambda = f.lambda;
    if (r.given("gamma")) o.gamma = f.gamma;
    if (r.given("m")) o.m = f.m;
    if (r.given("max_iters")) o.max_iters = f.max_iters;
    if (r.given("noise_fraction")) o.noise_fraction = f.noise_fraction;
    if (r.given("labels_per_class")) o.labels_per_class = f.labels_per_class;
    if (r.given("runs")) o.runs = f.runs;
    if (r.given("points")) o.points = f.points;
    if (r.given("moons_noise")) o.moons_noise = f.moons_noise;
    if (r.given("preset")) o.preset = *parse_preset(f.preset);
    for (const auto& p : f.inputs) o.inputs.emplace_back(p);
    if (r.given("labels")) o.labels = f.labels;
    if (r.given("truth")) o.truth = f.truth;
    if (r.given("output")) o.output = f.output;
    return o;
}

void write_outputs(const std::filesystem::path& dir, const std::vector<OutputFile>& files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    for (const auto& f : files) io::write_file_atomic(dir / f.name, f.contents);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph-based semi-supervised learning with L1-norm Laplacian regularization", "l1ssl"};
    app.require_subcommand(1);

    const std::vector<std::pair<Command, std::string>> names = {
        {Command::moons_demo, "two-moons demo: L1-SSL vs L2-SSL under label noise"},
        {Command::classify, "classify a feature file from a few labels"},
        {Command::noise_sweep, "accuracy over a grid of label-noise fractions"},
        {Command::refine_bow, "co-refine visual and textual bag-of-words matrices"},
        {Command::eigen_dump, "smallest eigenpairs of the normalized Laplacian"},
    };
    std::map<Command, Flags> flags;
    std::map<Command, Registered> reg;
    std::map<Command, CLI::App*> subs;
    for (const auto& [cmd, help] : names) {
        auto* sub = app.add_subcommand(std::string(to_string(cmd)), help);
        subs[cmd] = sub;
        Flags& f = flags[cmd];
        Registered& r = reg[cmd];
        add_common(*sub, f, r);
        switch (cmd) {
            case Command::moons_demo:
                add_graph(*sub, f, r);
                add_solver(*sub, f, r);
                add_moons(*sub, f, r);
                add_preset(*sub, f, r, {"mnist-style"});
                r.opts["noise_fraction"] =
                    sub->add_option("--noise-fraction", f.noise_fraction, "fraction of labels flipped per class")
                        ->expected(1);
                break;
            case Command::noise_sweep:
                add_graph(*sub, f, r);
                add_solver(*sub, f, r);
                add_moons(*sub, f, r);
                add_preset(*sub, f, r, {"mnist-style"});
                r.opts["noise_fraction"] =
                    sub->add_option("--noise-fraction", f.noise_fraction, "noise grid (repeatable)")->expected(1, -1);
                r.opts["input"] = sub->add_option("--input", f.inputs, "feature CSV (default: generated two-moons)")
                                      ->expected(1);
                r.opts["truth"] = sub->add_option("--truth", f.truth, "ground-truth classes for --input");
                break;
            case Command::classify:
                add_graph(*sub, f, r);
                add_solver(*sub, f, r);
                add_preset(*sub, f, r, {"mnist-style"});
                r.opts["input"] = sub->add_option("--input", f.inputs, "feature CSV")->expected(1)->required();
                r.opts["labels"] = sub->add_option("--labels", f.labels, "labels CSV 'index,class'")->required();
                r.opts["truth"] = sub->add_option("--truth", f.truth, "ground truth, one class per line");
                break;
            case Command::eigen_dump:
                add_graph(*sub, f, r);
                add_preset(*sub, f, r, {"mnist-style"});
                r.opts["m"] = sub->add_option("--m", f.m, "number of eigenpairs");
                r.opts["input"] = sub->add_option("--input", f.inputs, "feature CSV")->expected(1)->required();
                break;
            case Command::refine_bow:
                add_preset(*sub, f, r, {"table2-visual", "table2-textual"});
                r.opts["k"] = sub->add_option("--k", f.k, "nearest neighbors in the counterpart graph");
                r.opts["m"] = sub->add_option("--m", f.m, "number of eigenvectors");
                r.opts["lambda"] = sub->add_option("--lambda", f.lambda, "smoothing weight");
                r.opts["gamma"] = sub->add_option("--gamma", f.gamma, "fitting-error sparsity weight");
                r.opts["clamp"] =
                    sub->add_flag("--clamp-nonnegative", f.o.clamp_nonnegative, "clamp refined entries at zero");
                r.opts["input"] = sub->add_option("--input", f.inputs, "visual BOW file, then textual BOW file")
                                      ->expected(2)
                                      ->required();
                break;
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        Command cmd = Command::moons_demo;
        for (const auto& [c, sub] : subs)
            if (sub->parsed()) cmd = c;
        const RunConfig config = make_config(cmd, resolve(flags[cmd], reg[cmd]));
        const CommandResult result = execute(config);
        if (config.output) write_outputs(*config.output, result.files);
        out << result.metrics.dump(2) << '\n';
        return kSuccess;
    } catch (const GraphError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}

}  // namespace l1ssl::cli
