#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "perispec/cli.hpp"

using namespace perispec;

namespace {

const std::string kData = PERISPEC_DATA_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name + ".json"; }

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "perispec_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_json(const std::filesystem::path& path, const Json& j) { std::ofstream(path) << j.dump(); }

std::string error_code_of(const Run& r) { return parse_json_text(r.err, "stderr")["error"]["code"].get<std::string>(); }

}  // namespace

TEST(Cli, SpectrumExample) {
    const auto r = run({"spectrum", "--matrix", data("diag_peripheral")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "{\"radius\":1.0,\"points\":[[1.0,0.0],[0.0,1.0],[-1.0,0.0]]}\n");
}

TEST(Cli, JordanEvalOfIdempotentIsTwiceIt) {
    const auto r = run({"jordan-eval", "--signature", "1,2", "--matrices", data("idempotent") + "," + data("idempotent")});
    ASSERT_EQ(r.code, 0);
    const Json body = parse_json_text(r.out, "stdout");
    EXPECT_EQ(matrix_from_json(body["product"]), 2.0 * read_matrix_file(data("idempotent")));
    EXPECT_EQ(body["spectrum"]["points"], Json::parse("[[2.0,0.0]]"));
}

TEST(Cli, JordanEvalRejectsWrongOperandCount) {
    const auto r = run({"jordan-eval", "--signature", "1,2,3", "--matrices", data("idempotent")});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, RankWitnessChain) {
    const auto r = run({"rank-witness", "--matrix", data("chain3"), "--r", "1", "--s", "2"});
    ASSERT_EQ(r.code, 0);
    const Json body = parse_json_text(r.out, "stdout");
    EXPECT_EQ(body["case_label"], "L2.1-(iii)-s=2r");
    std::vector<Complex> roots;
    for (int j = 0; j < 3; ++j) roots.push_back(std::cbrt(2.0) * std::polar(1.0, 2.0 * std::numbers::pi * j / 3));
    EXPECT_TRUE(spectra_equal(spectrum_from_json(body["spectrum"]), make_spectrum(roots), 1e-9));
}

TEST(Cli, RankWitnessAbsentIsNegative) {
    EXPECT_EQ(run({"rank-witness", "--matrix", data("rank_one"), "--r", "1", "--s", "2"}).code, 1);
    EXPECT_EQ(run({"rank-witness", "--matrix", data("square_zero4"), "--r", "0", "--s", "1"}).code, 1);
    EXPECT_EQ(run({"rank-witness", "--matrix", data("rank_one"), "--r", "1", "--s", "2", "--search", "300"}).code, 1);
    EXPECT_EQ(run({"rank-witness", "--matrix", data("chain3"), "--r", "1", "--s", "1"}).code, 2);
}

TEST(Cli, RecoverSelfTest) {
    const auto r = run({"recover", "--oracle-matrix", data("operator4"), "--r", "1", "--s", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_LE(parse_json_text(r.out, "stdout")["max_error"].get<double>(), 1e-8);
    EXPECT_EQ(run({"recover", "--oracle-matrix", data("operator4"), "--r", "0", "--s", "2"}).code, 2);
}

TEST(Cli, VerifyPassesAndFails) {
    EXPECT_EQ(run({"verify", "--signature", "1,2", "--map", "sim", "--lambda-re", "-1", "--T", data("T3"), "--samples",
                   "200", "--seed", "7"})
                  .code,
              0);
    const auto bad = run({"verify", "--signature", "1,2", "--map", "sim", "--lambda-re", "2", "--samples", "200"});
    ASSERT_EQ(bad.code, 1);
    const Json body = parse_json_text(bad.out, "stdout");
    EXPECT_FALSE(body["passed"].get<bool>());
    EXPECT_EQ(body["counterexample"]["inputs"].size(), 2u);
}

TEST(Cli, ReconstructCanonicalForms) {
    const auto sim = run({"reconstruct", "--r", "0", "--s", "1", "--map-file", data("map_similarity")});
    ASSERT_EQ(sim.code, 0) << sim.err;
    EXPECT_EQ(parse_json_text(sim.out, "stdout")["variant"], "similarity");
    const auto tr = run({"reconstruct", "--r", "0", "--s", "2", "--map-file", data("map_transpose")});
    ASSERT_EQ(tr.code, 0) << tr.err;
    EXPECT_EQ(parse_json_text(tr.out, "stdout")["variant"], "transpose-similarity");
    const auto wrong_m = run({"reconstruct", "--r", "1", "--s", "2", "--map-file", data("map_transpose")});
    EXPECT_EQ(wrong_m.code, 1);
    EXPECT_FALSE(parse_json_text(wrong_m.out, "stdout")["counterexample"].is_null());
}

TEST(Cli, ReconstructTwoPhaseTable) {
    const auto schedule = run({"reconstruct", "--r", "0", "--s", "1", "--dim", "3", "--emit-schedule", "--seed", "5"});
    ASSERT_EQ(schedule.code, 0);
    const BlackBoxMap phi = cli::map_from_json(read_json_file(data("map_similarity")));
    const Json queries = parse_json_text(schedule.out, "schedule")["queries"];
    Json table = Json::array();
    for (const auto& q : queries) {
        const CMatrix a = matrix_from_json(q);
        table.push_back({{"input", q}, {"output", matrix_to_json(phi(a))}});
    }
    const auto path = scratch("table.json");
    write_json(path, {{"table", table}});
    const auto rec = run({"reconstruct", "--r", "0", "--s", "1", "--map-file", path.string(), "--seed", "5"});
    ASSERT_EQ(rec.code, 0) << rec.err;
    EXPECT_NEAR(parse_json_text(rec.out, "stdout")["lambda"][0].get<double>(), -1.0, 1e-10);

    // a different seed asks for inputs the table does not have
    const auto miss = run({"reconstruct", "--r", "0", "--s", "1", "--map-file", path.string(), "--seed", "6"});
    EXPECT_EQ(miss.code, 2);
    EXPECT_EQ(error_code_of(miss), "malformed_input");
}

TEST(Cli, ProbeTwoPhaseTable) {
    const auto schedule = run({"probe", "--s", "1", "--dim", "3", "--emit-schedule"});
    ASSERT_EQ(schedule.code, 0);
    const Json queries = parse_json_text(schedule.out, "schedule")["queries"];
    for (const auto* name : {"map_similarity", "map_conjugating"}) {
        const BlackBoxMap phi = cli::map_from_json(read_json_file(data(name)));
        Json table = Json::array();
        for (const auto& q : queries)
            table.push_back({{"input", q}, {"output", matrix_to_json(phi(matrix_from_json(q)))}});
        const auto path = scratch(std::string(name) + "_probe.json");
        write_json(path, {{"table", table}});
        const auto r = run({"probe", "--s", "1", "--map-file", path.string()});
        EXPECT_EQ(r.code, std::string(name) == "map_similarity" ? 0 : 1) << r.out << r.err;
    }
}

TEST(Cli, ProbeAlphas) {
    const auto r = run({"probe", "--s", "1", "--map-file", data("map_conjugating"), "--alphas", "-1,0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(run({"probe", "--s", "1", "--map-file", data("map_conjugating"), "--alphas", "0,1"}).code, 1);
    EXPECT_EQ(run({"probe", "--s", "1", "--map-file", data("map_conjugating"), "--alphas", "x"}).code, 2);
}

TEST(Cli, MalformedInputs) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"spectrum", "--matrix", data("ragged")},
             {"spectrum", "--matrix", data("nonfinite")},
             {"spectrum", "--matrix", data("does_not_exist")},
             {"spectrum"},
             {"nonsense"},
             {"jordan-eval", "--signature", "1,2,1,2", "--matrices", data("idempotent") + "," + data("idempotent")},
             {"verify", "--signature", "1,2", "--map", "rotate"},
             {"verify", "--signature", "1,2", "--lambda-re", "0"},
         }) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 2) << args.front();
        EXPECT_FALSE(r.err.empty());
        EXPECT_NO_THROW(error_code_of(r));
    }
    const auto r = run({"spectrum", "--matrix", data("ragged")});
    EXPECT_EQ(error_code_of(r), "malformed_input");
}

TEST(Cli, DeterministicOutput) {
    const std::vector<std::vector<std::string>> commands = {
        {"verify", "--signature", "1,2,3", "--lambda-re", "1", "--dim", "4", "--samples", "50", "--seed", "3"},
        {"reconstruct", "--r", "1", "--s", "2", "--map-file", data("map_similarity"), "--seed", "9"},
        {"rank-witness", "--matrix", data("operator4"), "--r", "0", "--s", "1"},
        {"verify", "--signature", "1,2", "--lambda-re", "1.5", "--samples", "50", "--seed", "3"},
    };
    for (const auto& args : commands) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, OutFlagWritesFile) {
    const auto path = scratch("spectrum_out.json");
    const auto r = run({"spectrum", "--matrix", data("diag_peripheral"), "--out", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(read_json_file(path.string())["radius"].get<double>(), 1.0);
}

TEST(JsonIo, MatrixRoundTripIsExact) {
    MatrixSampler rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        CMatrix a = rng.gaussian_matrix(1 + rng.index(5), 1 + rng.index(5));
        a(0, 0) = Complex(std::numeric_limits<double>::denorm_min(), -1e300);
        const CMatrix back = matrix_from_json(parse_json_text(matrix_to_json(a).dump(), "round trip"));
        ASSERT_EQ(back, a);
    }
}

TEST(JsonIo, RejectsBadShapes) {
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows":1,"cols":2,"data":[[[1,0]]]})")), Error);
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"data":[[[1]]]})")), Error);
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows":0,"cols":1,"data":[]})")), Error);
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"data":[[["a",0]]]})")), Error);
    EXPECT_THROW(parse_json_text("{", "inline"), Error);
}
