#include "ssnmf/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ssnmf/brassens.hpp"
#include "ssnmf/parallel.hpp"

namespace ssnmf {

double median(std::vector<double> values) {
    if (values.empty()) throw BadParams("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

void summarize(BenchReport& report) {
    report.trials = report.rows.size();
    if (report.rows.empty()) throw BadParams("a bench report needs at least one trial");
    std::vector<double> candidates, runtimes;
    std::size_t recovered = 0;
    for (const TrialRow& row : report.rows) {
        candidates.push_back(static_cast<double>(row.candidates));
        runtimes.push_back(row.runtime_s);
        recovered += row.recovered ? 1 : 0;
    }
    report.median_candidates = median(candidates);
    report.median_runtime_s = median(runtimes);
    report.recovery_rate = static_cast<double>(recovered) / static_cast<double>(report.rows.size());
}

BenchReport run_bench(const BenchParams& params, std::size_t trials, std::uint64_t seed0, const SolverConfig& cfg) {
    if (trials < 1) throw BadParams("trials must be >= 1");
    BenchReport report;
    report.params = params;
    report.rows.resize(trials);

    SolverConfig inner = cfg;
    inner.threads = 1;
    parallel_for(trials, cfg.threads, [&](std::size_t t) {
        TrialRow& row = report.rows[t];
        row.params = params;
        row.seed = seed0 + t;
        const SyntheticInstance inst = gen_synthetic(params.m, params.n, params.r, params.k, row.seed);
        const auto start = std::chrono::steady_clock::now();
        // Rounded to the reported precision so the CSV reproduces the medians.
        const auto elapsed = [&] {
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return std::round(s * 1000.0) / 1000.0;
        };
        try {
            const BrassensOutput out = brassens(inst.M, params.k, 0.0, inner);
            row.runtime_s = elapsed();
            row.candidates = out.candidates.size();
            row.recovered = verify_recovery(out.J, inst.planted_J, inst.M);
        } catch (const Error& e) {
            row.runtime_s = elapsed();
            row.error = e.what();
        }
    });
    summarize(report);
    return report;
}

std::vector<BenchParams> parse_grid(const std::string& grid) {
    std::vector<BenchParams> rows;
    std::stringstream all(grid);
    std::string item;
    while (std::getline(all, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t values[4];
        std::stringstream fields(item);
        std::string field;
        std::size_t count = 0;
        while (std::getline(fields, field, ',')) {
            const auto first = field.find_first_not_of(" \t");
            const auto last = field.find_last_not_of(" \t");
            const std::string text = first == std::string::npos ? "" : field.substr(first, last - first + 1);
            std::size_t v = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (count >= 4 || text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
                throw BadParams("grid row '" + item + "' must be four integers m,n,r,k");
            }
            values[count++] = v;
        }
        if (count != 4) throw BadParams("grid row '" + item + "' must be four integers m,n,r,k");
        rows.push_back(BenchParams{values[0], values[1], values[2], values[3]});
    }
    if (rows.empty()) throw BadParams("empty grid");
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchReport>& reports) {
    out << "m,n,r,k,seed,candidates,runtime_s,recovered\n";
    char runtime[32];
    for (const BenchReport& report : reports) {
        for (const TrialRow& row : report.rows) {
            std::snprintf(runtime, sizeof runtime, "%.3f", row.runtime_s);
            out << row.params.m << ',' << row.params.n << ',' << row.params.r << ',' << row.params.k << ','
                << row.seed << ',' << row.candidates << ',' << runtime << ',' << (row.recovered ? 1 : 0) << '\n';
        }
    }
}

}  // namespace ssnmf
