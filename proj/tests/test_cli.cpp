#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "l1ssl/error.hpp"
#include "l1ssl/io.hpp"
#include "run.hpp"

using namespace l1ssl;
using namespace l1ssl::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("l1ssl_cli_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// Two well separated clusters of `per` points each, written as features,
// labels (every `stride`-th point) and truth.
void write_clusters(const TempDir& dir, int per, int stride) {
    std::ostringstream x, labels, truth;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < per; ++i) {
            const int idx = c * per + i;
            x << (c * 10.0 + 0.1 * i) << ',' << (0.05 * (i % 3)) << '\n';
            truth << c << '\n';
            if (i % stride == 0) labels << idx << ',' << c << '\n';
        }
    write(dir / "x.csv", x.str());
    write(dir / "labels.csv", labels.str());
    write(dir / "truth.txt", truth.str());
}

}  // namespace

TEST(Config, CommandDefaults) {
    const auto moons = make_config(Command::moons_demo, {});
    EXPECT_EQ(moons.runs, 25);
    EXPECT_EQ(moons.noise.labeled_per_class, 5);
    EXPECT_EQ(moons.noise.noise_fraction, 0.2);
    EXPECT_EQ(moons.points, 200);

    Overrides o;
    o.inputs = {"x.csv"};
    o.labels = "l.csv";
    o.output = "out";
    const auto cls = make_config(Command::classify, o);
    EXPECT_EQ(cls.graph.k, 4);
    EXPECT_EQ(cls.solver.lambda, 0.01);
    EXPECT_EQ(cls.m, 20);

    const auto sweep = make_config(Command::noise_sweep, {});
    EXPECT_EQ(sweep.noise_grid, (std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4}));
}

TEST(Config, PresetRules) {
    Overrides o;
    o.preset = Preset::table2_visual;
    EXPECT_THROW(make_config(Command::moons_demo, o), Error);
    o.inputs = {"v.txt", "t.txt"};
    o.output = "out";
    o.gamma = 0.02;
    const auto c = make_config(Command::refine_bow, o);
    EXPECT_EQ(c.refine_visual.lambda, 0.010);
    EXPECT_EQ(c.refine_textual.lambda, 0.010);
    EXPECT_EQ(c.refine_visual.gamma, 0.02);
    EXPECT_EQ(c.refine_textual.gamma, 0.02);
}

TEST(ConfidenceInterval, HandComputation) {
    const std::vector<double> v{0.9, 0.8, 1.0, 0.7};
    const auto s = confidence_95(v);
    const double mean = 0.85;
    const double var = (0.0025 + 0.0025 + 0.0225 + 0.0225) / 3.0;
    EXPECT_NEAR(s.mean, mean, 1e-15);
    EXPECT_NEAR(s.sd, std::sqrt(var), 1e-15);
    EXPECT_NEAR(s.half_width, 1.96 * std::sqrt(var) / 2.0, 1e-15);
    const std::vector<double> one{0.5};
    EXPECT_EQ(confidence_95(one).half_width, 0.0);
    EXPECT_EQ(median({3.0, 1.0, 2.0, 10.0}), 2.5);
}

TEST(MoonsDemo, SchemaKeys) {
    TempDir dir;
    const auto r = invoke({"moons-demo", "--runs", "3", "--output", dir.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::ordered_json::parse(r.out);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"schema", "command", "config", "runs", "summary"}));
    EXPECT_EQ(j["schema"], kMetricsSchema);
    EXPECT_EQ(j["runs"].size(), 3u);
    for (const auto& run : j["runs"]) {
        EXPECT_EQ(run["flipped_labels"], 2);
        for (const char* m : {"l1_ssl", "l2_ssl"}) {
            EXPECT_TRUE(run["accuracy"].contains(m));
            for (const char* k : {"l2_smoothness", "l1_smoothness", "fitting_error"})
                EXPECT_GE(run["smoothness"][m][k].get<double>(), 0.0);
        }
    }
    for (const char* k : {"median_accuracy", "min_accuracy", "l1_smoothness_lower_runs"})
        EXPECT_TRUE(j["summary"].contains(k));
    EXPECT_EQ(slurp(dir / "metrics.json"), r.out);
    const auto points = slurp(dir / "points.csv");
    EXPECT_EQ(std::count(points.begin(), points.end(), '\n'), 1 + 3 * 200);
    EXPECT_EQ(r.out.find(dir.path().string()), std::string::npos);
}

TEST(MoonsDemo, DeterministicAcrossInvocationsAndWorkers) {
    TempDir a, b;
    const auto r1 = invoke({"moons-demo", "--runs", "4", "--seed", "9", "--output", a.path().string()});
    const auto r2 = invoke({"moons-demo", "--runs", "4", "--seed", "9", "--workers", "3", "--output", b.path().string()});
    ASSERT_EQ(r1.code, 0);
    ASSERT_EQ(r2.code, 0);
    // workers is a scheduling knob and does not appear in the document
    EXPECT_EQ(r1.out, r2.out);
    EXPECT_EQ(slurp(a / "points.csv"), slurp(b / "points.csv"));
    const auto r3 = invoke({"moons-demo", "--runs", "4", "--seed", "10"});
    EXPECT_NE(r1.out, r3.out);
}

TEST(MoonsDemo, CleanLabelsClassifyWell) {
    // Short smoke run; the full 25-run bar lives in the acceptance binary.
    const auto r = invoke({"moons-demo", "--runs", "5", "--noise-fraction", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_GE(j["summary"]["median_accuracy"]["l1_ssl"].get<double>(), 0.95);
    EXPECT_GE(j["summary"]["median_accuracy"]["l2_ssl"].get<double>(), 0.95);
}

TEST(MoonsDemo, AddingRunsKeepsEarlierRuns) {
    const auto a = nlohmann::json::parse(invoke({"moons-demo", "--runs", "2"}).out);
    const auto b = nlohmann::json::parse(invoke({"moons-demo", "--runs", "3"}).out);
    EXPECT_EQ(a["runs"][0], b["runs"][0]);
    EXPECT_EQ(a["runs"][1], b["runs"][1]);
}

TEST(ExitCodes, UsageAndConfigErrors) {
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"no-such-command"}).code, 1);
    EXPECT_EQ(invoke({"moons-demo", "--lambda", "-1"}).code, 1);
    EXPECT_EQ(invoke({"moons-demo", "--k", "0"}).code, 1);
    EXPECT_EQ(invoke({"moons-demo", "--noise-fraction", "1.5"}).code, 1);
    EXPECT_EQ(invoke({"moons-demo", "--preset", "table2-visual"}).code, 1);
    EXPECT_EQ(invoke({"classify", "--input", "x.csv"}).code, 1);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(ExitCodes, InvalidConfigWritesNothing) {
    TempDir dir;
    const auto out = dir / "out";
    EXPECT_EQ(invoke({"moons-demo", "--runs", "0", "--output", out.string()}).code, 1);
    EXPECT_FALSE(fs::exists(out));
    write(dir / "x.csv", "0,0\n1,1\n2,2\n");
    write(dir / "labels.csv", "0,0\n9,1\n");
    EXPECT_EQ(invoke({"classify", "--input", (dir / "x.csv").string(), "--labels", (dir / "labels.csv").string(),
                      "--k", "1", "--m", "2", "--output", out.string()})
                  .code,
              1);
    EXPECT_FALSE(fs::exists(out));
}

TEST(ExitCodes, IsolatedVertexIsNumericalFailure) {
    TempDir dir;
    // Far-away point with tiny sigma: every weight to it underflows.
    write(dir / "x.csv", "0,0\n0.01,0\n0.02,0\n1000,0\n");
    write(dir / "labels.csv", "0,0\n2,1\n");
    const auto r = invoke({"classify", "--input", (dir / "x.csv").string(), "--labels", (dir / "labels.csv").string(),
                           "--k", "1", "--m", "2", "--sigma", "0.01", "--output", (dir / "out").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("3"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Classify, MalformedRowNamesTheLine) {
    TempDir dir;
    write(dir / "x.csv", "0,0\n1,oops\n");
    write(dir / "labels.csv", "0,0\n");
    const auto r = invoke({"classify", "--input", (dir / "x.csv").string(), "--labels", (dir / "labels.csv").string(),
                           "--output", (dir / "out").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Classify, FullyLabeledReproducesLabels) {
    TempDir dir;
    write_clusters(dir, 15, 1);
    const auto r = invoke({"classify", "--input", (dir / "x.csv").string(), "--labels", (dir / "labels.csv").string(),
                           "--truth", (dir / "truth.txt").string(), "--m", "30", "--lambda", "0.001", "--output",
                           (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir / "out" / "predictions.txt"), slurp(dir / "truth.txt"));
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["evaluation"]["accuracy_all"], 1.0);
    EXPECT_FALSE(j["evaluation"].contains("accuracy_unlabeled"));
}

TEST(Classify, FewLabelsAndNoTruth) {
    TempDir dir;
    write_clusters(dir, 20, 7);
    const auto r = invoke({"classify", "--input", (dir / "x.csv").string(), "--labels", (dir / "labels.csv").string(),
                           "--m", "5", "--output", (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j.contains("evaluation"));
    EXPECT_EQ(j["data"]["labeled"], 6);
    EXPECT_EQ(slurp(dir / "out" / "predictions.txt"), slurp(dir / "truth.txt"));
}

TEST(NoiseSweep, SingleCellAndTrend) {
    const auto zero = nlohmann::json::parse(invoke({"noise-sweep", "--noise-fraction", "0", "--runs", "3"}).out);
    ASSERT_EQ(zero["cells"].size(), 1u);
    EXPECT_GE(zero["cells"][0]["l1_ssl"]["mean_accuracy"].get<double>(), 0.95);

    const auto r = invoke({"noise-sweep", "--noise-fraction", "0", "0.4", "--runs", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    for (const char* m : {"l1_ssl", "l2_ssl"}) {
        EXPECT_GE(j["cells"][0][m]["mean_accuracy"].get<double>(), j["cells"][1][m]["mean_accuracy"].get<double>());
        const auto acc = j["cells"][1][m]["accuracies"].get<std::vector<double>>();
        const auto s = confidence_95(acc);
        EXPECT_EQ(j["cells"][1][m]["ci95_half_width"].get<double>(), s.half_width);
    }
}

TEST(NoiseSweep, FileInputNeedsTruth) {
    TempDir dir;
    write_clusters(dir, 20, 7);
    EXPECT_EQ(invoke({"noise-sweep", "--input", (dir / "x.csv").string()}).code, 1);
    const auto r = invoke({"noise-sweep", "--input", (dir / "x.csv").string(), "--truth",
                           (dir / "truth.txt").string(), "--m", "5", "--runs", "2", "--noise-fraction", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["cells"][0]["l1_ssl"]["mean_accuracy"], 1.0);
}

TEST(RefineBow, ZeroParametersRoundTripFiles) {
    TempDir dir;
    DenseMatrix v = DenseMatrix::Zero(20, 6), t = DenseMatrix::Zero(20, 6);
    for (Index i = 0; i < 20; ++i) {
        v(i, i % 6) = 0.1 + 0.01 * static_cast<double>(i);
        t(i, (i / 10) * 3) = 1.0;
        t(i, 1 + (i / 10) * 3) = 2.0;
    }
    std::ostringstream vs, ts;
    io::write_bow(vs, v);
    io::write_bow(ts, t);
    write(dir / "v.txt", vs.str());
    write(dir / "t.txt", ts.str());
    const auto out = dir / "out";
    const auto r = invoke({"refine-bow", "--input", (dir / "v.txt").string(), (dir / "t.txt").string(), "--lambda",
                           "0", "--gamma", "0", "--k", "3", "--m", "4", "--output", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(out / "refined_visual.txt"), vs.str());
    EXPECT_EQ(slurp(out / "refined_textual.txt"), ts.str());
    EXPECT_EQ(nlohmann::json::parse(r.out)["visual"]["changed_entries"], 0);

    const auto again = invoke({"refine-bow", "--input", (dir / "v.txt").string(), (dir / "t.txt").string(), "--k",
                               "3", "--m", "4", "--output", out.string()});
    ASSERT_EQ(again.code, 0) << again.err;
    const auto other = dir / "other";
    const auto third = invoke({"refine-bow", "--input", (dir / "v.txt").string(), (dir / "t.txt").string(), "--k",
                               "3", "--m", "4", "--output", other.string()});
    ASSERT_EQ(third.code, 0) << third.err;
    EXPECT_EQ(again.out, third.out);
    EXPECT_EQ(slurp(out / "refined_visual.txt"), slurp(other / "refined_visual.txt"));
    EXPECT_EQ(invoke({"refine-bow", "--input", (dir / "v.txt").string(), (dir / "t.txt").string()}).code, 1);
}

TEST(RefineBow, MismatchedDocumentCounts) {
    TempDir dir;
    write(dir / "v.txt", "3 2 1\n0 0 1\n");
    write(dir / "t.txt", "4 2 1\n0 0 1\n");
    const auto r = invoke({"refine-bow", "--input", (dir / "v.txt").string(), (dir / "t.txt").string(), "--output",
                           (dir / "out").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(EigenDump, TwoPointGraph) {
    TempDir dir;
    write(dir / "x.csv", "0,0\n1,0\n");
    const auto r = invoke({"eigen-dump", "--input", (dir / "x.csv").string(), "--k", "1", "--m", "2", "--output",
                           (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto values = nlohmann::json::parse(r.out)["eigenvalues"].get<std::vector<double>>();
    ASSERT_EQ(values.size(), 2u);
    EXPECT_NEAR(values[0], 0.0, 1e-12);
    EXPECT_NEAR(values[1], 2.0, 1e-12);
    std::istringstream dump(slurp(dir / "out" / "eigen.txt"));
    Index n = 0, m = 0;
    dump >> n >> m;
    EXPECT_EQ(n, 2);
    EXPECT_EQ(m, 2);
}

TEST(EigenDump, ConnectedGraphHasZeroEigenvalueAndRejectsLargeM) {
    TempDir dir;
    write_clusters(dir, 20, 7);
    const auto r = invoke({"eigen-dump", "--input", (dir / "x.csv").string(), "--k", "25", "--m", "3",
                           "--sigma", "5", "--output", (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LT(nlohmann::json::parse(r.out)["eigenvalues"][0].get<double>(), 1e-8);
    EXPECT_EQ(invoke({"eigen-dump", "--input", (dir / "x.csv").string(), "--m", "41", "--output",
                      (dir / "out2").string()})
                  .code,
              1);
    EXPECT_FALSE(fs::exists(dir / "out2"));
}
