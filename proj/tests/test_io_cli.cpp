#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "ssnmf/bench.hpp"
#include "ssnmf/commands.hpp"
#include "ssnmf/instances.hpp"
#include "ssnmf/io.hpp"
#include "support.hpp"

using namespace ssnmf;
using namespace ssnmf::testing;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("ssnmf_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SSNMF_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Matrix three_materials() {
    Matrix W(3, 3);
    W << 0.7, 0.1, 0.2,  //
        0.2, 0.8, 0.1,   //
        0.1, 0.1, 0.7;
    return W;
}

}  // namespace

TEST(Csv, RoundTripIsBitExact) {
    std::mt19937_64 rng(81);
    Matrix M = random_matrix(rng, 4, 7, -1e3, 1e3);
    M(0, 0) = 1e-300;
    M(1, 1) = 0.1;
    M(2, 2) = -0.0;
    M(3, 3) = 123456789.123456789;
    std::stringstream buf;
    print_csv(buf, M);
    const Matrix back = parse_csv(buf);
    ASSERT_EQ(back.rows(), M.rows());
    ASSERT_EQ(back.cols(), M.cols());
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) EXPECT_EQ(back(i, j), M(i, j));
    }
}

TEST(Csv, ToleratesSpacesAndBlankLines) {
    std::stringstream in(" 1, 2.5 ,3\r\n\n4,+5,6e-1\n");
    const Matrix M = parse_csv(in);
    EXPECT_EQ(M.rows(), 2);
    EXPECT_EQ(M(1, 1), 5.0);
    EXPECT_EQ(M(1, 2), 0.6);
}

TEST(Csv, DiagnosticsNameTheCell) {
    std::stringstream bad("1,2,3\n4,x5,6\n");
    try {
        parse_csv(bad, "data.csv");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("data.csv:2:2"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("x5"), std::string::npos);
    }
    std::stringstream empty_cell("1,,3\n");
    EXPECT_THROW(parse_csv(empty_cell), ParseError);
    std::stringstream nan("1,nan\n");
    EXPECT_THROW(parse_csv(nan), ParseError);
    std::stringstream inf("inf,1\n");
    EXPECT_THROW(parse_csv(inf), ParseError);
    std::stringstream ragged("1,2\n3\n");
    EXPECT_THROW(parse_csv(ragged), DimensionMismatch);
    std::stringstream nothing("\n\n");
    EXPECT_THROW(parse_csv(nothing), ParseError);
    EXPECT_THROW(read_csv("/nonexistent/m.csv"), IoError);
}

TEST(Pgm, ScalesAndRoundTrips) {
    TempDir dir;
    write_pgm(dir / "a.pgm", GrayImage{3, 2, {0.0, 0.5, 1.0, 0.25, 0.75, 1.0}});
    const GrayImage a = read_pgm(dir / "a.pgm");
    EXPECT_EQ(a.width, 3u);
    EXPECT_EQ(a.height, 2u);
    EXPECT_EQ(a.pixels, (std::vector<double>{0, 128, 255, 64, 191, 255}));
    write_pgm(dir / "c.pgm", GrayImage{2, 2, {0.3, 0.3, 0.3, 0.3}});
    EXPECT_EQ(read_pgm(dir / "c.pgm").pixels, (std::vector<double>(4, 255.0)));
    write_pgm(dir / "z.pgm", GrayImage{2, 1, {0.0, 0.0}});
    EXPECT_EQ(read_pgm(dir / "z.pgm").pixels, (std::vector<double>(2, 0.0)));
    EXPECT_THROW(write_pgm(dir / "bad.pgm", GrayImage{2, 2, {1.0}}), GeometryMismatch);
}

TEST(Pgm, ReadsAsciiWithComments) {
    TempDir dir;
    write_text(dir / "p2.pgm", "P2\n# comment\n2 2\n15\n0 5\n10 15\n");
    EXPECT_EQ(read_pgm(dir / "p2.pgm").pixels, (std::vector<double>{0, 5, 10, 15}));
    write_text(dir / "bad.pgm", "P6\n1 1\n255\n");
    EXPECT_THROW(read_pgm(dir / "bad.pgm"), ParseError);
}

TEST(SetCoverJson, ParsesAndValidates) {
    const auto inst = parse_setcover_json(R"({"n": 5, "subsets": [[2,4],[1,2,3],[3,4],[4,5]], "K": 2})");
    EXPECT_EQ(inst.n, 5u);
    EXPECT_EQ(inst.m(), 4u);
    EXPECT_EQ(inst.subsets[1], (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_THROW(parse_setcover_json(R"({"n": 2, "subsets": [[1],[2]], "K": 3})"), SchemaError);
    EXPECT_THROW(parse_setcover_json(R"({"n": 2, "subsets": [[1],[2]]})"), SchemaError);
    EXPECT_THROW(parse_setcover_json(R"({"n": 2, "subsets": [[1],[-2]], "K": 1})"), SchemaError);
    EXPECT_THROW(parse_setcover_json(R"({"n": 2, "subsets": [1, 2], "K": 1})"), SchemaError);
    EXPECT_THROW(parse_setcover_json("{not json"), SchemaError);
}

TEST(Bench, MedianRule) {
    EXPECT_EQ(median({3.0}), 3.0);
    EXPECT_EQ(median({4.0, 1.0, 3.0}), 3.0);
    EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
    EXPECT_THROW(median({}), BadParams);
}

TEST(Bench, SingleTrial) {
    const auto rep = run_bench(BenchParams{3, 25, 5, 2}, 1, 7);
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_EQ(rep.trials, 1u);
    EXPECT_EQ(rep.median_candidates, static_cast<double>(rep.rows[0].candidates));
    EXPECT_EQ(rep.median_runtime_s, rep.rows[0].runtime_s);
    EXPECT_EQ(rep.rows[0].seed, 7u);
    EXPECT_EQ(rep.recovery_rate, 1.0);
}

TEST(Bench, ReportRowsReproduceSummary) {
    SolverConfig cfg;
    cfg.threads = 3;
    const auto rep = run_bench(BenchParams{3, 25, 5, 2}, 6, 100, cfg);
    std::stringstream csv;
    write_bench_csv(csv, {rep});
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "m,n,r,k,seed,candidates,runtime_s,recovered");
    std::vector<double> candidates, runtimes;
    std::uint64_t expected_seed = 100;
    while (std::getline(csv, line)) {
        std::stringstream fields(line);
        std::vector<std::string> f;
        for (std::string x; std::getline(fields, x, ',');) f.push_back(x);
        ASSERT_EQ(f.size(), 8u);
        EXPECT_EQ(std::stoull(f[4]), expected_seed++);
        candidates.push_back(std::stod(f[5]));
        runtimes.push_back(std::stod(f[6]));
    }
    EXPECT_EQ(median(candidates), rep.median_candidates);
    EXPECT_EQ(median(runtimes), rep.median_runtime_s);
}

TEST(Bench, GridParsing) {
    const auto grid = parse_grid("3,25,5,2; 4,30,6,3");
    ASSERT_EQ(grid.size(), 2u);
    EXPECT_EQ(grid[1].r, 6u);
    EXPECT_THROW(parse_grid("3,25,5"), BadParams);
    EXPECT_THROW(parse_grid("3,25,5,2,1"), BadParams);
    EXPECT_THROW(parse_grid("a,b,c,d"), BadParams);
    EXPECT_THROW(parse_grid(""), BadParams);
    EXPECT_THROW(run_bench(BenchParams{3, 25, 5, 2}, 0, 0), BadParams);
}

TEST(Commands, SolveFixtureFindsInteriorVertex) {
    TempDir dir;
    write_csv(dir / "m.csv", 2.0 * interior_vertex_fixture().M);  // solve rescales columns itself
    std::ostringstream log;
    SolveOptions opt;
    opt.input = dir / "m.csv";
    opt.k = 2;
    opt.out_prefix = dir / "run_";
    EXPECT_EQ(cmd_solve(opt, log), kExitOk);
    const IndexSet J = read_index_file(dir / "run_J.txt");
    EXPECT_EQ(J.size(), 4u);
    EXPECT_TRUE(J.contains(3));
    const Matrix H = read_csv(dir / "run_H.csv");
    const Matrix M = read_csv(dir / "m.csv");
    EXPECT_LE(residual_norm(M, J, H), 1e-12 * M.norm());
    const auto summary = nlohmann::json::parse(read_text(dir / "run_summary.json"));
    EXPECT_EQ(summary["J"].size(), 4u);
    EXPECT_EQ(summary["index_base"], 0);
}

TEST(Commands, SnpaOnlyMatchesOnSeparableInput) {
    TempDir dir;
    write_csv(dir / "m.csv", gen_synthetic(4, 20, 4, 4, 3).M);
    std::ostringstream log;
    SolveOptions opt;
    opt.input = dir / "m.csv";
    opt.k = 4;
    opt.out_prefix = dir / "full_";
    cmd_solve(opt, log);
    opt.snpa_only = true;
    opt.out_prefix = dir / "snpa_";
    cmd_solve(opt, log);
    EXPECT_EQ(read_index_file(dir / "full_J.txt"), read_index_file(dir / "snpa_J.txt"));
}

TEST(Commands, StrictNormalizeRejectsRawInput) {
    TempDir dir;
    write_csv(dir / "m.csv", 3.0 * gen_synthetic(3, 10, 3, 3, 1).M);
    std::ostringstream log;
    SolveOptions opt;
    opt.input = dir / "m.csv";
    opt.out_prefix = dir / "x_";
    opt.strict_normalize = true;
    EXPECT_THROW(cmd_solve(opt, log), NotNormalized);
}

TEST(Commands, ReduceIllustratedInstance) {
    TempDir dir;
    write_text(dir / "sc.json", R"({"n": 5, "subsets": [[2,4],[1,2,3],[3,4],[4,5]], "K": 2})");
    std::ostringstream log;
    EXPECT_EQ(cmd_reduce(ReduceOptions{dir / "sc.json", dir / "red.csv"}, log), kExitOk);
    const auto meta = nlohmann::json::parse(read_text(dir / "red.json"));
    EXPECT_EQ(meta["r"], 13);
    EXPECT_TRUE(meta["lemma_distinct"].get<bool>());
    EXPECT_TRUE(meta["lemma_hull"].get<bool>());
    EXPECT_EQ(meta["blocks"]["M3"]["end"].get<int>() - meta["blocks"]["M3"]["begin"].get<int>(), 11);
    EXPECT_EQ(read_csv(dir / "red.csv").cols(), 20);
    write_text(dir / "bad.json", R"({"n": 2, "subsets": [[1],[2]], "K": 3})");
    EXPECT_THROW(cmd_reduce(ReduceOptions{dir / "bad.json", dir / "bad.csv"}, log), SchemaError);
}

TEST(Commands, UnmixPlantedImage) {
    TempDir dir;
    std::mt19937_64 rng(82);
    write_csv(dir / "img.csv", planted_image(rng, three_materials(), 8, 8));
    std::ostringstream log;
    UnmixOptions opt;
    opt.inputs = {dir / "img.csv"};
    opt.k = 2;
    opt.delta = 0.04;
    opt.width = 8;
    opt.height = 8;
    opt.out_dir = dir / "out";
    EXPECT_EQ(cmd_unmix(opt, log), kExitOk);
    const auto summary = nlohmann::json::parse(read_text(dir / "out/summary.json"));
    EXPECT_LE(summary["residual_rel"].get<double>(), 0.04);
    EXPECT_EQ(summary["J"].size(), 3u);
    for (int i = 0; i < 3; ++i) {
        const GrayImage map = read_pgm(dir / ("out/maps/" + std::to_string(i) + ".pgm"));
        EXPECT_EQ(map.width, 8u);
        EXPECT_EQ(map.height, 8u);
    }
    EXPECT_FALSE(fs::exists(dir / "out/maps/3.pgm"));
    EXPECT_EQ(read_csv(dir / "out/H.csv").rows(), 3);
}

TEST(Commands, UnmixPgmStack) {
    TempDir dir;
    std::mt19937_64 rng(83);
    const Matrix M = planted_image(rng, three_materials(), 6, 5);
    std::vector<std::string> bands;
    for (Eigen::Index b = 0; b < 3; ++b) {
        bands.push_back(dir / ("band" + std::to_string(b) + ".pgm"));
        // Raw levels so the stack keeps the relative band intensities.
        std::ofstream out(bands.back(), std::ios::binary);
        out << "P5\n6 5\n255\n";
        for (Eigen::Index j = 0; j < M.cols(); ++j) out.put(static_cast<char>(std::lround(M(b, j) * 255.0)));
    }
    std::ostringstream log;
    UnmixOptions opt;
    opt.inputs = bands;
    opt.k = 2;
    opt.delta = 0.04;
    opt.out_dir = dir / "out";
    EXPECT_EQ(cmd_unmix(opt, log), kExitOk);
    EXPECT_TRUE(fs::exists(dir / "out/maps/0.pgm"));
    opt.width = 7;
    EXPECT_THROW(cmd_unmix(opt, log), GeometryMismatch);
}

TEST(Commands, UnmixGeometryMismatch) {
    TempDir dir;
    write_csv(dir / "img.csv", Matrix::Ones(3, 10));
    std::ostringstream log;
    UnmixOptions opt;
    opt.inputs = {dir / "img.csv"};
    opt.width = 3;
    opt.height = 3;
    opt.out_dir = dir / "out";
    EXPECT_THROW(cmd_unmix(opt, log), GeometryMismatch);
}

TEST(Commands, UnmixConstantImage) {
    TempDir dir;
    write_csv(dir / "img.csv", Matrix::Constant(3, 12, 0.4));
    std::ostringstream log;
    UnmixOptions opt;
    opt.inputs = {dir / "img.csv"};
    opt.width = 4;
    opt.height = 3;
    opt.out_dir = dir / "out";
    EXPECT_EQ(cmd_unmix(opt, log), kExitOk);
    EXPECT_EQ(read_index_file(dir / "out/J.txt").size(), 1u);
    const GrayImage map = read_pgm(dir / "out/maps/0.pgm");
    EXPECT_EQ(map.pixels, std::vector<double>(12, 255.0));
}

TEST(Cli, ExitCodes) {
    TempDir dir;
    write_text(dir / "bad.csv", "1,2\n3,oops\n");
    EXPECT_EQ(run_cli("solve " + dir / "bad.csv" + " --k 2 --out " + dir / "x_"), kExitUsage);
    EXPECT_EQ(run_cli("solve --k 2"), kExitUsage);
    EXPECT_EQ(run_cli("frobnicate"), kExitUsage);
    EXPECT_EQ(run_cli("gen --fixture --out " + dir / "fx.csv"), kExitOk);
    EXPECT_EQ(run_cli("solve " + dir / "fx.csv" + " --k 2 --out " + dir / "fx_"), kExitOk);
    EXPECT_EQ(read_index_file(dir / "fx_J.txt").size(), 4u);
    write_text(dir / "sc.json", R"({"n": 2, "subsets": [[1],[2]], "K": 1})");
    EXPECT_EQ(run_cli("reduce " + dir / "sc.json" + " --out " + dir / "red.csv"), kExitOk);
    EXPECT_EQ(run_cli("bench --grid 3,12,4,2 --trials 2 --seed 5 --out " + dir / "bench.csv"), kExitOk);
    EXPECT_NE(read_text(dir / "bench.csv").find("3,12,4,2,6,"), std::string::npos);
}

TEST(Cli, ExitCodeMapping) {
    EXPECT_EQ(exit_code_for(Infeasible("x")), kExitInfeasible);
    EXPECT_EQ(exit_code_for(ParseError("x")), kExitUsage);
    EXPECT_EQ(exit_code_for(GeometryMismatch("x")), kExitUsage);
}
