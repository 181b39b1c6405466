#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "thalparc");
    std::ostringstream out, err;
    const int status = thalparc::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("thalparc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string make_synth() {
        const auto r = run({"synth", "--set", "n_subjects=6", "--set", "voxels_per_subject=60", "--set",
                            "n_clusters=5", "--set", "overlap_fraction=0.05", "--output-dir", path("data")});
        EXPECT_EQ(r.status, 0) << r.err;
        return path("data/synth.tsv");
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, SynthCrossvalArtifacts) {
    const auto data = make_synth();
    EXPECT_TRUE(fs::exists(path("data/synth.spec")));
    const auto r = run({"crossval", "--data", data, "--folds", "3", "--epochs", "30", "--k", "10",
                        "--deterministic", "--seed", "7", "--output-dir", path("cv")});
    ASSERT_EQ(r.status, 0) << r.err;
    for (const char* f : {"crossval.tsv", "summary.txt", "config.resolved", "fold_1/model.bin",
                          "fold_3/scaler.tsv", "fold_2/predictions.tsv"}) {
        EXPECT_TRUE(fs::exists(path(std::string("cv/") + f))) << f;
    }
    const auto table = slurp(path("cv/crossval.tsv"));
    EXPECT_EQ(table.substr(0, table.find('\n')), "Label\tOverall\tAN\tCL\tCM\tLD\tLP\tMD\tPuA\tPuI\tVA\tVLP\tVLa\tVPL\tVPM");
    // No staging leftovers.
    for (const auto& e : fs::directory_iterator(path("cv"))) {
        EXPECT_EQ(e.path().filename().string().find(".thalparc-staging"), std::string::npos);
    }
    // The resolved config reproduces the run.
    const auto again = run({"crossval", "--config", path("cv/config.resolved"), "--output-dir", path("cv2")});
    ASSERT_EQ(again.status, 0) << again.err;
    EXPECT_EQ(slurp(path("cv/crossval.tsv")), slurp(path("cv2/crossval.tsv")));
    EXPECT_EQ(slurp(path("cv/fold_1/model.bin")), slurp(path("cv2/fold_1/model.bin")));
}

TEST_F(CliTest, OverridesBeatConfigFile) {
    const auto data = make_synth();
    std::ofstream(path("run.cfg")) << "data=" << data << "\nepochs=500\nfolds=3\nk=10\ndim=3\n";
    const auto r = run({"fit", "--config", path("run.cfg"), "--epochs", "20", "--output-dir", path("fit")});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto resolved = slurp(path("fit/config.resolved"));
    EXPECT_NE(resolved.find("epochs=20\n"), std::string::npos);
    EXPECT_NE(resolved.find("dim=3\n"), std::string::npos);
    const auto latent = slurp(path("fit/latent.tsv"));
    EXPECT_EQ(latent.substr(0, latent.find('\n')), "subject\ti\tj\tk\tz1\tz2\tz3\tlabels");
}

TEST_F(CliTest, FitClassifyPlot) {
    const auto data = make_synth();
    ASSERT_EQ(run({"fit", "--data", data, "--epochs", "20", "--output-dir", path("fit")}).status, 0);
    const auto c = run({"classify", "--model-dir", path("fit"), "--k", "10", "--output-dir", path("cls")});
    ASSERT_EQ(c.status, 0) << c.err;
    EXPECT_TRUE(fs::exists(path("cls/scores.tsv")));
    const auto m = run({"classify", "--model-dir", path("fit"), "--k", "10", "--mask-mode", "--output-dir", path("mask")});
    ASSERT_EQ(m.status, 0) << m.err;
    const auto pred = slurp(path("mask/predictions.tsv"));
    EXPECT_EQ(std::count(pred.begin(), pred.end(), '\n'), 361);
    EXPECT_FALSE(fs::exists(path("mask/scores.tsv")));

    ASSERT_EQ(run({"plot", "--latent", path("fit/latent.tsv"), "--output-dir", path("plot")}).status, 0);
    const auto svg = slurp(path("plot/embedding.svg"));
    EXPECT_NE(svg.find("width=\"1000\" height=\"1000\""), std::string::npos);
    for (const char* code : {"AN", "CL", "CM", "LD", "LP", "MD", "PuA", "PuI", "VA", "VLa", "VLP", "VPL", "VPM"}) {
        EXPECT_NE(svg.find(std::string(">") + code + "</text>"), std::string::npos) << code;
    }
    std::size_t circles = 0;
    for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
    EXPECT_EQ(circles, 360u);
}

TEST_F(CliTest, FiveDimensionalModelNeedsExplicitK) {
    const auto data = make_synth();
    ASSERT_EQ(run({"fit", "--data", data, "--dim", "5", "--epochs", "20", "--output-dir", path("fit")}).status, 0);
    const auto r = run({"classify", "--model-dir", path("fit"), "--output-dir", path("cls")});
    EXPECT_NE(r.status, 0);
    EXPECT_EQ(r.err.rfind("error: code=explicit-k-required msg=", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
    EXPECT_FALSE(fs::exists(path("cls/predictions.tsv")));
    EXPECT_EQ(run({"classify", "--model-dir", path("fit"), "--k", "10", "--output-dir", path("cls")}).status, 0);
}

TEST_F(CliTest, FailureLeavesNoPartialOutput) {
    const auto data = make_synth();
    // k larger than any training set fails in the first fold after nothing was published.
    const auto r = run({"crossval", "--data", data, "--folds", "3", "--epochs", "10", "--k", "100000",
                        "--output-dir", path("cv")});
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.err.rfind("error: code=invalid-argument msg=fold 1: ", 0), 0u) << r.err;
    ASSERT_TRUE(fs::exists(path("cv")));
    EXPECT_TRUE(fs::is_empty(path("cv")));
}

TEST_F(CliTest, UsageAndInputErrors) {
    EXPECT_EQ(run({}).status, 2);
    EXPECT_EQ(run({"crossval", "--bogus"}).status, 2);
    const auto missing = run({"crossval", "--data", path("nope.tsv"), "--output-dir", path("o")});
    EXPECT_EQ(missing.status, 1);
    EXPECT_EQ(missing.err.rfind("error: code=io ", 0), 0u);
    const auto groups = run({"fit", "--data", path("nope.tsv"), "--groups", "base,dwi"});
    EXPECT_EQ(groups.err.rfind("error: code=invalid-argument ", 0), 0u);
}

TEST_F(CliTest, OutputDirFromEnvironment) {
    ::setenv("THALPARC_OUT_DIR", path("envout").c_str(), 1);
    const auto r = run({"synth", "--set", "n_subjects=2", "--set", "voxels_per_subject=20"});
    ::unsetenv("THALPARC_OUT_DIR");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(fs::exists(path("envout/synth.tsv")));
}

TEST_F(CliTest, FeaturesFromTensors) {
    std::ofstream t(path("tensors.tsv"));
    t << "subject\ti\tj\tk\tdxx\tdyy\tdzz\tdxy\tdxz\tdyz\n";
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) t << "s1\t" << i << '\t' << j << "\t0\t" << 2 + i << "\t1\t1\t0\t0\t0\n";
    t << "s1\t0\t0\t1\t0\t0\t0\t0\t0\t0\n";
    t.close();
    const auto r = run({"features", "--input", path("tensors.tsv"), "--output-dir", path("feat")});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto out = slurp(path("feat/features.tsv"));
    EXPECT_EQ(out.substr(0, out.find('\n')),
              "subject\ti\tj\tk\tfa\tmd\trd\tad\ttr\tmode\twestin_cl\twestin_cp\twestin_cs"
              "\tknut1\tknut2\tknut3\tknut4\tknut5\tknut_edge");
    // First voxel: eigenvalues (2, 1, 1).
    std::istringstream lines(out);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    std::vector<std::string> fields;
    std::istringstream cells(first);
    for (std::string f; std::getline(cells, f, '\t');) fields.push_back(f);
    ASSERT_EQ(fields.size(), 19u);
    EXPECT_NEAR(std::stod(fields[4]), 0.40824829046386, 1e-12);
    EXPECT_NEAR(std::stod(fields[9]), 1.0, 1e-12);  // mode of a prolate tensor
    EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 8);
}
