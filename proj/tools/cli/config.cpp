#include "config.hpp"

#include <limits>
#include <string>

#include "l1ssl/error.hpp"

namespace l1ssl::cli {

std::string_view to_string(Command command) {
    switch (command) {
        case Command::moons_demo: return "moons-demo";
        case Command::classify: return "classify";
        case Command::noise_sweep: return "noise-sweep";
        case Command::refine_bow: return "refine-bow";
        case Command::eigen_dump: return "eigen-dump";
    }
    return "unknown";
}

std::string_view to_string(Preset preset) {
    switch (preset) {
        case Preset::none: return "none";
        case Preset::mnist_style: return "mnist-style";
        case Preset::table2_visual: return "table2-visual";
        case Preset::table2_textual: return "table2-textual";
    }
    return "unknown";
}

std::optional<Preset> parse_preset(std::string_view name) {
    for (Preset p : {Preset::mnist_style, Preset::table2_visual, Preset::table2_textual}) {
        if (to_string(p) == name) return p;
    }
    return std::nullopt;
}

RunConfig moons_defaults() {
    RunConfig c;
    c.graph.sigma = 0.1;
    c.graph.k = 12;
    c.m = 3;
    c.solver.lambda = 2.0;
    c.noise.labeled_per_class = 5;
    c.noise.noise_fraction = 0.2;
    c.points = 200;
    c.moons_noise_sd = 0.1;
    return c;
}

RunConfig mnist_style_defaults() {
    RunConfig c;
    c.graph.sigma = 1.0;
    c.graph.k = 4;
    c.m = 20;
    c.solver.lambda = 0.01;
    return c;
}

RunConfig make_config(Command command, const Overrides& o) {
    const bool table2 = o.preset == Preset::table2_visual || o.preset == Preset::table2_textual;
    if (table2 && command != Command::refine_bow) {
        throw ConfigError("preset " + std::string(to_string(o.preset)) + " only applies to refine-bow");
    }
    if (o.preset == Preset::mnist_style && command == Command::refine_bow) {
        throw ConfigError("preset mnist-style does not apply to refine-bow");
    }

    RunConfig c;
    switch (command) {
        case Command::moons_demo:
            c = o.preset == Preset::mnist_style ? mnist_style_defaults() : moons_defaults();
            c.noise.noise_fraction = 0.2;
            c.runs = 25;
            break;
        case Command::noise_sweep:
            c = (o.preset == Preset::mnist_style || !o.inputs.empty()) ? mnist_style_defaults() : moons_defaults();
            c.noise_grid = {0.0, 0.1, 0.2, 0.3, 0.4};
            c.runs = 10;
            break;
        case Command::classify:
        case Command::eigen_dump:
        case Command::refine_bow:
            c = mnist_style_defaults();
            break;
    }
    c.command = command;
    c.preset = o.preset;

    if (o.preset == Preset::table2_visual) c.refine_textual = c.refine_visual;
    if (o.preset == Preset::table2_textual) c.refine_visual = c.refine_textual;

    if (o.sigma) c.graph.sigma = *o.sigma;
    if (o.k) c.graph.k = *o.k;
    if (o.lambda) c.solver.lambda = *o.lambda;
    if (o.m) c.m = *o.m;
    if (o.max_iters) c.solver.max_iters = *o.max_iters;
    if (o.mutual) c.graph.symmetrization = Symmetrization::mutual;
    if (o.backtracking) c.solver.step = StepRule::backtracking;
    for (RefineConfig* r : {&c.refine_visual, &c.refine_textual}) {
        if (o.k) r->k = *o.k;
        if (o.m) r->m = *o.m;
        if (o.lambda) r->lambda = *o.lambda;
        if (o.gamma) r->gamma = *o.gamma;
        r->clamp_nonnegative = o.clamp_nonnegative;
    }
    if (o.noise_fraction) {
        if (command == Command::noise_sweep) {
            c.noise_grid = *o.noise_fraction;
        } else {
            if (o.noise_fraction->size() != 1) throw ConfigError("--noise-fraction takes one value here");
            c.noise.noise_fraction = o.noise_fraction->front();
        }
    }
    if (o.labels_per_class) c.noise.labeled_per_class = *o.labels_per_class;
    if (o.runs) c.runs = *o.runs;
    if (o.points) c.points = *o.points;
    if (o.moons_noise) c.moons_noise_sd = *o.moons_noise;

    c.seed = o.seed;
    c.noise.seed = o.seed;
    c.workers = o.workers;
    c.inputs = o.inputs;
    c.labels = o.labels;
    c.truth = o.truth;
    c.output = o.output;
    return c;
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void RunConfig::validate() const {
    const std::string name(to_string(command));
    require(runs >= 1, name + ": --runs must be >= 1");
    require(workers >= 1, name + ": --workers must be >= 1");
    require(m >= 1, name + ": --m must be >= 1");

    const bool generated = command == Command::moons_demo || (command == Command::noise_sweep && inputs.empty());
    if (command != Command::refine_bow) {
        // k < n is rechecked once the data size is known.
        graph.validate(generated ? points : std::numeric_limits<Index>::max());
        solver.validate();
    }
    if (generated) {
        require(points >= 4 && points % 2 == 0, name + ": --points must be even and >= 4");
        require(moons_noise_sd >= 0.0, name + ": --moons-noise must be >= 0");
        require(m <= points, name + ": --m must not exceed --points");
    }

    switch (command) {
        case Command::moons_demo:
            require(inputs.empty(), "moons-demo generates its own data and takes no --input");
            noise.validate();
            break;
        case Command::noise_sweep:
            require(!noise_grid.empty(), "noise-sweep: the noise grid is empty");
            for (double f : noise_grid) {
                require(f >= 0.0 && f <= 1.0, "noise-sweep: noise fractions must lie in [0, 1]");
            }
            require(inputs.size() <= 1, "noise-sweep takes at most one --input");
            require(inputs.empty() || truth.has_value(), "noise-sweep: --input requires --truth");
            require(noise.labeled_per_class >= 1, "noise-sweep: --labels-per-class must be >= 1");
            break;
        case Command::classify:
            require(inputs.size() == 1, "classify needs exactly one --input feature file");
            require(labels.has_value(), "classify needs --labels");
            require(output.has_value(), "classify needs --output");
            break;
        case Command::eigen_dump:
            require(inputs.size() == 1, "eigen-dump needs exactly one --input feature file");
            require(output.has_value(), "eigen-dump needs --output");
            break;
        case Command::refine_bow:
            require(inputs.size() == 2, "refine-bow needs two --input files (visual, then textual)");
            require(output.has_value(), "refine-bow needs --output");
            // Document count is unknown until the files are read.
            refine_visual.validate(std::numeric_limits<Index>::max());
            refine_textual.validate(std::numeric_limits<Index>::max());
            break;
    }
}

namespace {

Json refine_json(const RefineConfig& r) {
    return Json{{"lambda", r.lambda}, {"gamma", r.gamma}, {"k", r.k}, {"m", r.m},
                {"clamp_nonnegative", r.clamp_nonnegative}};
}

}  // namespace

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = to_string(c.command);
    j["preset"] = to_string(c.preset);
    j["seed"] = c.seed;
    if (c.command == Command::refine_bow) {
        j["visual"] = refine_json(c.refine_visual);
        j["textual"] = refine_json(c.refine_textual);
    } else {
        j["graph"] = Json{{"kernel", "gaussian"},
                          {"sigma", c.graph.sigma},
                          {"k", c.graph.k},
                          {"symmetrization",
                           c.graph.symmetrization == Symmetrization::mutual ? "mutual" : "union"}};
    }
    if (c.command == Command::eigen_dump) {
        j["m"] = c.m;
    } else if (c.command != Command::refine_bow) {
        j["solver"] = Json{{"lambda", c.solver.lambda},
                           {"m", c.m},
                           {"max_iters", c.solver.max_iters},
                           {"rel_tol", c.solver.rel_tol},
                           {"kkt_tol", c.solver.kkt_tol},
                           {"step", c.solver.step == StepRule::backtracking ? "backtracking" : "exact_one"}};
    }
    if (c.command == Command::moons_demo || c.command == Command::noise_sweep) {
        Json noise{{"labels_per_class", c.noise.labeled_per_class}};
        if (c.command == Command::moons_demo) {
            noise["noise_fraction"] = c.noise.noise_fraction;
        } else {
            noise["grid"] = c.noise_grid;
        }
        j["noise"] = noise;
        j["runs"] = c.runs;
        if (c.inputs.empty()) j["dataset"] = Json{{"kind", "two-moons"}, {"points", c.points}, {"noise_sd", c.moons_noise_sd}};
    }
    Json inputs = Json::array();
    for (const auto& p : c.inputs) inputs.push_back(p.generic_string());
    j["inputs"] = inputs;
    if (c.labels) j["labels"] = c.labels->generic_string();
    if (c.truth) j["truth"] = c.truth->generic_string();
    return j;
}

}  // namespace l1ssl::cli
