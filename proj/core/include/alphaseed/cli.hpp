#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "alphaseed/cross_validation.hpp"

namespace alphaseed {

enum class OutputFormat { table, json, csv };

struct CliConfig {
    std::string data_path;
    int k = 10;
    double C = 1.0;
    double gamma = 1.0;
    KernelKind kernel = KernelKind::gaussian;
    double epsilon = 1e-3;
    std::int64_t max_iterations = 100'000'000;
    std::vector<Strategy> strategies;
    std::uint64_t fold_seed = 1;
    std::uint64_t rng_seed = 1;
    OutputFormat format = OutputFormat::table;
    std::size_t cache_bytes = 256u << 20;
    bool loocv = false;
    bool no_timing = false; // zero wall-clock fields so outputs diff byte-exactly
    bool parallel = false;
};

// table: aligned comparison with a speedup column against the zero baseline;
// csv: header strategy,fold,init_s,train_s,iterations,correct,total with one
// row per (strategy, fold) plus a totals row per strategy;
// json: array of report objects.
std::string emit_report(const std::vector<CvReport>& reports, OutputFormat format);

// Full CLI: parse flags, run every requested strategy over one shared fold
// plan and kernel cache, print the report. Exit codes: 0 ok, 2 bad
// configuration, 3 unreadable or malformed data.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace alphaseed
