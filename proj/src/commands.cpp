#include "ssnmf/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "ssnmf/bench.hpp"
#include "ssnmf/brassens.hpp"
#include "ssnmf/instances.hpp"
#include "ssnmf/io.hpp"
#include "ssnmf/snpa.hpp"

namespace ssnmf {

namespace {

using Index = Eigen::Index;
using nlohmann::json;
namespace fs = std::filesystem;

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path);
}

json to_json(const IndexSet& J) { return json(J.indices()); }

void ensure_parent(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

bool has_extension(const std::string& path, const char* ext) {
    std::string e = fs::path(path).extension().string();
    for (char& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e == ext;
}

}  // namespace

std::string with_extension(const std::string& path, const std::string& ext) {
    return fs::path(path).replace_extension(ext).string();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const Infeasible*>(&e) != nullptr) return kExitInfeasible;
    return kExitUsage;
}

SolveResult solve_matrix(const Matrix& M, std::size_t k, double delta, bool snpa_only, bool strict,
                         const SolverConfig& cfg) {
    require_finite(M);
    Matrix Mn;
    std::vector<double> scales;
    if (strict) {
        SolverConfig check = cfg;
        check.strict_normalize = true;
        check_normalized(M, check);
        Mn = M;
        scales.assign(static_cast<std::size_t>(M.cols()), 1.0);
    } else {
        NormalizedColumns normalized = l1_normalize_columns(M);
        Mn = std::move(normalized.columns);
        scales = std::move(normalized.scales);
    }

    SolveResult result;
    if (snpa_only) {
        SelectionResult sel = snpa(Mn, StopRule{std::nullopt, delta}, cfg);
        result.J = sel.selected;
        result.H = std::move(sel.H);
        result.candidates = result.exterior = result.J;
        const double norm = Mn.norm();
        result.residual_rel = norm > 0.0 ? residual_norm(Mn, result.J, result.H) / norm : 0.0;
    } else {
        BrassensOutput out = brassens(Mn, k, delta, cfg);
        result.J = out.J;
        result.H = std::move(out.H);
        result.candidates = out.candidates;
        result.exterior = out.exterior;
        result.residual_rel = out.residual_rel;
    }

    // Mn(:, j) = M(:, j) / s_j, so M(:, j) ~ sum_i M(:, J_i) H(i, j) s_j / s_{J_i}.
    for (Index i = 0; i < result.H.rows(); ++i) {
        const double source = scales[result.J[static_cast<std::size_t>(i)]];
        for (Index j = 0; j < result.H.cols(); ++j) result.H(i, j) *= scales[static_cast<std::size_t>(j)] / source;
    }
    return result;
}

int cmd_gen(const GenOptions& opt, std::ostream& log) {
    if (opt.out.empty()) throw BadParams("--out is required");
    const SyntheticInstance inst =
        opt.fixture ? interior_vertex_fixture() : gen_synthetic(opt.m, opt.n, opt.r, opt.k, opt.seed);
    ensure_parent(opt.out);
    write_csv(opt.out, inst.M);
    const std::string planted = with_extension(opt.out, ".planted.txt");
    const std::string h_path = with_extension(opt.out, ".H.csv");
    write_index_file(planted, inst.planted_J);
    write_csv(h_path, inst.H);
    log << "wrote " << inst.M.rows() << "x" << inst.M.cols() << " matrix to " << opt.out << " (seed "
        << inst.params.seed << "), planted indices to " << planted << '\n';
    return kExitOk;
}

int cmd_solve(const SolveOptions& opt, std::ostream& log) {
    if (opt.input.empty()) throw BadParams("an input CSV is required");
    const Matrix M = read_csv(opt.input);
    SolverConfig cfg;
    cfg.threads = opt.threads;

    const auto start = std::chrono::steady_clock::now();
    const SolveResult res = solve_matrix(M, opt.k, opt.delta, opt.snpa_only, opt.strict_normalize, cfg);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ensure_parent(opt.out_prefix + "J.txt");
    write_index_file(opt.out_prefix + "J.txt", res.J);
    write_csv(opt.out_prefix + "H.csv", res.H);
    const json summary = {
        {"input", opt.input},
        {"rows", M.rows()},
        {"cols", M.cols()},
        {"k", opt.k},
        {"delta", opt.delta},
        {"algorithm", opt.snpa_only ? "snpa" : "brassens"},
        {"J", to_json(res.J)},
        {"candidates", to_json(res.candidates)},
        {"exterior", to_json(res.exterior)},
        {"residual_rel", res.residual_rel},
        {"runtime_s", runtime},
        {"index_base", 0},
    };
    write_json(opt.out_prefix + "summary.json", summary);
    log << "selected " << res.J.size() << " columns (" << res.candidates.size()
        << " candidates), relative residual " << res.residual_rel << '\n';
    return kExitOk;
}

int cmd_bench(const BenchOptions& opt, std::ostream& log) {
    if (opt.out.empty()) throw BadParams("--out is required");
    const std::vector<BenchParams> grid = parse_grid(opt.grid);
    SolverConfig cfg;
    cfg.threads = opt.threads;

    std::vector<BenchReport> reports;
    json summary = json::array();
    for (const BenchParams& p : grid) {
        reports.push_back(run_bench(p, opt.trials, opt.seed, cfg));
        const BenchReport& rep = reports.back();
        log << "m=" << p.m << " n=" << p.n << " r=" << p.r << " k=" << p.k << ": recovery "
            << rep.recovery_rate << ", median candidates " << rep.median_candidates << ", median runtime "
            << rep.median_runtime_s << " s over " << rep.trials << " trials (seed0 " << opt.seed << ")\n";
        json errors = json::array();
        for (const TrialRow& row : rep.rows) {
            if (!row.error.empty()) errors.push_back({{"seed", row.seed}, {"error", row.error}});
        }
        summary.push_back({{"m", p.m},
                           {"n", p.n},
                           {"r", p.r},
                           {"k", p.k},
                           {"trials", rep.trials},
                           {"seed0", opt.seed},
                           {"median_candidates", rep.median_candidates},
                           {"median_runtime_s", rep.median_runtime_s},
                           {"recovery_rate", rep.recovery_rate},
                           {"errors", errors}});
    }

    ensure_parent(opt.out);
    std::ofstream out(opt.out);
    if (!out) throw IoError("cannot open " + opt.out + " for writing");
    write_bench_csv(out, reports);
    if (!out) throw IoError("failed writing " + opt.out);
    write_json(with_extension(opt.out, ".summary.json"), summary);
    return kExitOk;
}

int cmd_reduce(const ReduceOptions& opt, std::ostream& log) {
    if (opt.input.empty() || opt.out.empty()) throw BadParams("an input JSON and --out are required");
    const SetCoverInstance inst = read_setcover_json(opt.input);
    const ReductionOutput red = setcover_to_ssnmf(inst);
    const bool distinct = check_lemma_distinct(red);
    const bool hull = check_lemma_hull(red);

    ensure_parent(opt.out);
    write_csv(opt.out, red.M);

    json blocks = json::object();
    json columns = json::array();
    for (std::size_t c = 0; c < red.columns.size(); ++c) {
        const ColumnTag& tag = red.columns[c];
        const char* name = to_string(tag.block);
        const std::string group = tag.block == Block::Origin || tag.block == Block::MinusOne ? "M3" : name;
        if (!blocks.contains(group)) blocks[group] = {{"begin", c}, {"end", c + 1}};
        blocks[group]["end"] = c + 1;
        json entry = {{"block", name}};
        if (tag.block == Block::M1 || tag.block == Block::M3) entry["subset"] = tag.subset + 1;
        if (tag.block == Block::M2 || tag.block == Block::M3) entry["element"] = tag.element;
        columns.push_back(entry);
    }
    const json meta = {
        {"n", inst.n},
        {"m", inst.m()},
        {"K", inst.K},
        {"r", red.r},
        {"a", red.a},
        {"h", red.h},
        {"b", red.b},
        {"blocks", blocks},
        {"columns", columns},
        {"lemma_distinct", distinct},
        {"lemma_hull", hull},
    };
    const std::string meta_path = with_extension(opt.out, ".json");
    write_json(meta_path, meta);
    log << "r = " << red.r << ", " << red.M.cols() << " columns; distinct columns: " << (distinct ? "ok" : "FAILED")
        << ", hull: " << (hull ? "ok" : "FAILED") << "; metadata in " << meta_path << '\n';
    return distinct && hull ? kExitOk : kExitLemma;
}

int cmd_unmix(const UnmixOptions& opt, std::ostream& log) {
    if (opt.inputs.empty() || opt.out_dir.empty()) throw BadParams("input files and --out are required");
    Matrix M;
    std::size_t width = 0, height = 0;
    if (opt.inputs.size() == 1 && !has_extension(opt.inputs[0], ".pgm")) {
        if (!opt.width || !opt.height) throw BadParams("CSV input needs --width and --height");
        M = read_csv(opt.inputs[0]);
        width = *opt.width;
        height = *opt.height;
    } else {
        std::vector<GrayImage> bands;
        for (const std::string& path : opt.inputs) {
            if (!has_extension(path, ".pgm")) throw BadParams("a band stack must consist of .pgm files: " + path);
            bands.push_back(read_pgm(path));
            if (bands.back().width != bands.front().width || bands.back().height != bands.front().height) {
                throw GeometryMismatch(path + " does not have the size of " + opt.inputs.front());
            }
        }
        width = bands.front().width;
        height = bands.front().height;
        if ((opt.width && *opt.width != width) || (opt.height && *opt.height != height)) {
            throw GeometryMismatch("--width/--height disagree with the PGM size " + std::to_string(width) + "x" +
                                   std::to_string(height));
        }
        M.resize(static_cast<Index>(bands.size()), static_cast<Index>(width * height));
        for (std::size_t b = 0; b < bands.size(); ++b) {
            for (std::size_t p = 0; p < width * height; ++p) {
                M(static_cast<Index>(b), static_cast<Index>(p)) = bands[b].pixels[p];
            }
        }
    }
    if (width * height != static_cast<std::size_t>(M.cols())) {
        throw GeometryMismatch(std::to_string(width) + "x" + std::to_string(height) + " = " +
                               std::to_string(width * height) + " pixels, but the data has " +
                               std::to_string(M.cols()) + " columns");
    }

    // Black pixels carry no material; they are left out and get zero abundance.
    IndexSet lit;
    for (Index j = 0; j < M.cols(); ++j) {
        if (M.col(j).lpNorm<1>() > 0.0) lit.push_back(static_cast<std::size_t>(j));
    }
    if (lit.empty()) throw ZeroColumn(0);

    SolverConfig cfg;
    cfg.threads = opt.threads;
    const SolveResult res = solve_matrix(select_columns(M, lit), opt.k, opt.delta, false, opt.strict_normalize, cfg);

    IndexSet J;
    for (std::size_t j : res.J) J.push_back(lit[j]);
    Matrix H = Matrix::Zero(res.H.rows(), M.cols());
    for (std::size_t t = 0; t < lit.size(); ++t) H.col(static_cast<Index>(lit[t])) = res.H.col(static_cast<Index>(t));

    const fs::path dir(opt.out_dir);
    fs::create_directories(dir / "maps");
    write_csv((dir / "H.csv").string(), H);
    write_index_file((dir / "J.txt").string(), J);
    for (Index i = 0; i < H.rows(); ++i) {
        GrayImage map{width, height, std::vector<double>(width * height)};
        for (Index j = 0; j < H.cols(); ++j) map.pixels[static_cast<std::size_t>(j)] = H(i, j);
        write_pgm((dir / "maps" / (std::to_string(i) + ".pgm")).string(), map);
    }
    const json summary = {
        {"bands", M.rows()},
        {"width", width},
        {"height", height},
        {"k", opt.k},
        {"delta", opt.delta},
        {"J", to_json(J)},
        {"candidates", res.candidates.size()},
        {"residual_rel", res.residual_rel},
        {"index_base", 0},
    };
    write_json((dir / "summary.json").string(), summary);
    log << "extracted " << J.size() << " materials, relative residual " << res.residual_rel << "; maps in "
        << (dir / "maps").string() << '\n';
    return kExitOk;
}

}  // namespace ssnmf
