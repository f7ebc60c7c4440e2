#include <iostream>

#include "CLI11.hpp"
#include "ssnmf/commands.hpp"
#include "ssnmf/errors.hpp"

int main(int argc, char** argv) {
    using namespace ssnmf;
    CLI::App app{"Sparse separable NMF: vertex extraction, benchmarks, reductions and unmixing"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic k-sparse r-separable matrix");
    gen_cmd->add_option("--m", gen.m, "Rows")->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Columns")->capture_default_str();
    gen_cmd->add_option("--r", gen.r, "Vertices")->capture_default_str();
    gen_cmd->add_option("--k", gen.k, "Sparsity")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    gen_cmd->add_flag("--fixture", gen.fixture, "Write the interior-vertex fixture instead");
    gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

    SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "Extract vertex columns from a CSV matrix");
    solve_cmd->add_option("input", solve.input, "Input CSV (rows = features, columns = points)")->required();
    solve_cmd->add_option("--k", solve.k, "Sparsity")->capture_default_str();
    solve_cmd->add_option("--delta", solve.delta, "Relative residual tolerance")->capture_default_str();
    solve_cmd->add_option("--out", solve.out_prefix, "Output prefix for J.txt, H.csv, summary.json")->required();
    solve_cmd->add_flag("--snpa-only", solve.snpa_only, "Run SNPA alone");
    solve_cmd->add_flag("--strict-normalize", solve.strict_normalize, "Reject columns without unit l1 norm");
    solve_cmd->add_option("--threads", solve.threads, "Worker threads")->capture_default_str();

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run seeded synthetic benchmarks");
    bench_cmd->add_option("--grid", bench.grid, "Rows m,n,r,k separated by ';'")->capture_default_str();
    bench_cmd->add_option("--trials", bench.trials, "Trials per row")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "First seed")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Per-trial report CSV")->required();
    bench_cmd->add_option("--threads", bench.threads, "Concurrent trials")->capture_default_str();

    ReduceOptions reduce;
    auto* reduce_cmd = app.add_subcommand("reduce", "Build the SET-COVER reduction matrix");
    reduce_cmd->add_option("input", reduce.input, "SET-COVER JSON {n, subsets, K}")->required();
    reduce_cmd->add_option("--out", reduce.out, "Output CSV; metadata goes next to it as .json")->required();

    UnmixOptions unmix;
    std::size_t width = 0, height = 0;
    auto* unmix_cmd = app.add_subcommand("unmix", "Unmix an image and write abundance maps");
    unmix_cmd->add_option("inputs", unmix.inputs, "One CSV (bands x pixels) or one PGM per band")->required();
    unmix_cmd->add_option("--k", unmix.k, "Sparsity")->capture_default_str();
    unmix_cmd->add_option("--delta", unmix.delta, "Relative residual tolerance")->capture_default_str();
    auto* width_opt = unmix_cmd->add_option("--width", width, "Image width");
    auto* height_opt = unmix_cmd->add_option("--height", height, "Image height");
    unmix_cmd->add_option("--out", unmix.out_dir, "Output directory")->required();
    unmix_cmd->add_flag("--strict-normalize", unmix.strict_normalize, "Reject columns without unit l1 norm");
    unmix_cmd->add_option("--threads", unmix.threads, "Worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_cmd) return cmd_gen(gen, std::cout);
        if (*solve_cmd) return cmd_solve(solve, std::cout);
        if (*bench_cmd) return cmd_bench(bench, std::cout);
        if (*reduce_cmd) return cmd_reduce(reduce, std::cout);
        if (*width_opt) unmix.width = width;
        if (*height_opt) unmix.height = height;
        return cmd_unmix(unmix, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}
