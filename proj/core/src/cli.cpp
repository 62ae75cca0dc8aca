#include "alphaseed/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "alphaseed/errors.hpp"

namespace alphaseed {

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

void zero_timing(CvReport& report) {
    report.total_init_seconds = 0.0;
    report.total_rest_seconds = 0.0;
    for (auto& fm : report.per_fold) {
        fm.init_seconds = 0.0;
        fm.train_seconds = 0.0;
    }
}

std::string emit_table(const std::vector<CvReport>& reports) {
    const CvReport* zero = nullptr;
    for (const auto& r : reports)
        if (r.strategy == "zero") zero = &r;

    std::ostringstream out;
    out << "strategy      init_s      rest_s     total_s   iterations   accuracy_%   speedup\n";
    for (const auto& r : reports) {
        char line[256];
        std::string speedup = "-";
        if (zero && zero->total_seconds() > 0.0 && r.total_seconds() > 0.0)
            speedup = fmt("%.2fx", zero->total_seconds() / r.total_seconds());
        std::snprintf(line, sizeof(line), "%-9s %10.4f  %10.4f  %10.4f  %11lld  %11.4f  %8s\n",
                      r.strategy.c_str(), r.total_init_seconds, r.total_rest_seconds,
                      r.total_seconds(), static_cast<long long>(r.total_iterations),
                      r.accuracy_percent, speedup.c_str());
        out << line;
    }
    if (std::any_of(reports.begin(), reports.end(), [](const CvReport& r) { return !r.all_converged; }))
        out << "warning: at least one fold did not converge within max_iterations\n";
    return out.str();
}

std::string emit_csv(const std::vector<CvReport>& reports) {
    std::ostringstream out;
    out << "strategy,fold,init_s,train_s,iterations,correct,total\n";
    for (const auto& r : reports) {
        int correct = 0, total = 0;
        for (const auto& fm : r.per_fold) {
            out << r.strategy << ',' << fm.fold << ',' << fmt("%.9g", fm.init_seconds) << ','
                << fmt("%.9g", fm.train_seconds) << ',' << fm.iterations << ',' << fm.test_correct
                << ',' << fm.test_total << '\n';
            correct += fm.test_correct;
            total += fm.test_total;
        }
        out << r.strategy << ",total," << fmt("%.9g", r.total_init_seconds) << ','
            << fmt("%.9g", r.total_rest_seconds) << ',' << r.total_iterations << ',' << correct << ','
            << total << '\n';
    }
    return out.str();
}

nlohmann::ordered_json report_to_json(const CvReport& r) {
    nlohmann::ordered_json j;
    j["strategy"] = r.strategy;
    j["k"] = r.k;
    j["C"] = r.C;
    j["gamma"] = r.gamma;
    j["kernel"] = r.kernel;
    j["epsilon"] = r.epsilon;
    j["fold_seed"] = r.fold_seed;
    j["rng_seed"] = r.rng_seed;
    j["accuracy_percent"] = r.accuracy_percent;
    j["total_iterations"] = r.total_iterations;
    j["total_init_seconds"] = r.total_init_seconds;
    j["total_rest_seconds"] = r.total_rest_seconds;
    j["all_converged"] = r.all_converged;
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (const auto& fm : r.per_fold) {
        nlohmann::ordered_json f;
        f["fold"] = fm.fold;
        f["init_seconds"] = fm.init_seconds;
        f["train_seconds"] = fm.train_seconds;
        f["iterations"] = fm.iterations;
        f["test_correct"] = fm.test_correct;
        f["test_total"] = fm.test_total;
        f["converged"] = fm.converged;
        f["failed"] = fm.failed;
        folds.push_back(std::move(f));
    }
    j["per_fold"] = std::move(folds);
    j["decision_values"] = r.decision_values;
    j["predicted"] = r.predicted;
    return j;
}

} // namespace

std::string emit_report(const std::vector<CvReport>& reports, OutputFormat format) {
    if (reports.empty()) throw ConfigError("no reports to emit");
    switch (format) {
    case OutputFormat::table: return emit_table(reports);
    case OutputFormat::csv: return emit_csv(reports);
    case OutputFormat::json: {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : reports) arr.push_back(report_to_json(r));
        return arr.dump(2) + "\n";
    }
    }
    throw ConfigError("unknown output format");
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"k-fold cross-validation for kernel SVMs with warm-started alphas"};
    app.get_formatter()->column_width(34);

    CliConfig cfg;
    std::string strategies_csv = "zero,sir";
    std::string kernel_name = "gaussian";
    std::string format_name = "table";

    app.add_option("--data", cfg.data_path, "dataset file (sparse \"label dim:value ...\" lines)")
        ->required();
    app.add_option("--k", cfg.k, "number of folds (>= 3)");
    app.add_option("--C", cfg.C, "penalty parameter");
    app.add_option("--gamma", cfg.gamma, "gaussian kernel width");
    app.add_option("--kernel", kernel_name, "kernel: gaussian | linear");
    app.add_option("--epsilon", cfg.epsilon, "KKT stopping tolerance");
    app.add_option("--max-iterations", cfg.max_iterations, "per-fold iteration cap");
    app.add_option("--strategies", strategies_csv,
                   "comma-separated: zero|ato|mir|sir|avg|top, or \"all\"");
    app.add_option("--fold-seed", cfg.fold_seed, "seed for the fold shuffle");
    app.add_option("--rng-seed", cfg.rng_seed, "seed for strategy-internal randomness");
    app.add_option("--format", format_name, "output: table | json | csv");
    app.add_option("--cache-bytes", cfg.cache_bytes, "kernel row cache budget");
    app.add_flag("--loocv", cfg.loocv, "leave-one-out cross-validation (k = n)");
    app.add_flag("--no-timing", cfg.no_timing, "zero wall-clock fields for reproducible output");
    app.add_flag("--parallel", cfg.parallel, "run strategies on separate threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (kernel_name == "gaussian") cfg.kernel = KernelKind::gaussian;
        else if (kernel_name == "linear") cfg.kernel = KernelKind::linear;
        else throw ConfigError("unknown kernel \"" + kernel_name + "\"");

        if (format_name == "table") cfg.format = OutputFormat::table;
        else if (format_name == "json") cfg.format = OutputFormat::json;
        else if (format_name == "csv") cfg.format = OutputFormat::csv;
        else throw ConfigError("unknown format \"" + format_name + "\"");

        cfg.strategies = parse_strategy_list(strategies_csv);
        if (!cfg.loocv && cfg.k < 3) throw ConfigError("k must be >= 3");
        if (!(cfg.C > 0.0)) throw ConfigError("C must be positive");
        if (cfg.kernel == KernelKind::gaussian && !(cfg.gamma > 0.0))
            throw ConfigError("gamma must be positive");
        if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
        if (const char* env = std::getenv("ALPHASEED_CACHE_BYTES")) {
            char* endp = nullptr;
            const unsigned long long v = std::strtoull(env, &endp, 10);
            if (endp == env || *endp != '\0')
                throw ConfigError("ALPHASEED_CACHE_BYTES is not a number");
            cfg.cache_bytes = static_cast<std::size_t>(v);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const Dataset ds = load_dataset(cfg.data_path);
        KernelSpec spec{cfg.kernel, cfg.gamma};
        const KernelEvaluator kern(ds, spec, cfg.cache_bytes);
        const FoldPlan plan = cfg.loocv ? make_loocv_plan(ds) : make_folds(ds, cfg.k, cfg.fold_seed);

        CvConfig cv_cfg;
        cv_cfg.solver.epsilon = cfg.epsilon;
        cv_cfg.solver.max_iterations = cfg.max_iterations;
        cv_cfg.rng_seed = cfg.rng_seed;

        std::vector<CvReport> reports(cfg.strategies.size());
        std::vector<std::exception_ptr> errors(cfg.strategies.size());
        auto run_one = [&](std::size_t i) {
            try {
                reports[i] = run_cv(kern, plan, cfg.C, cfg.strategies[i], cv_cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        };
        if (cfg.parallel) {
            std::vector<std::thread> workers;
            workers.reserve(cfg.strategies.size());
            for (std::size_t i = 0; i < cfg.strategies.size(); ++i) workers.emplace_back(run_one, i);
            for (auto& w : workers) w.join();
        } else {
            for (std::size_t i = 0; i < cfg.strategies.size(); ++i) run_one(i);
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);

        if (cfg.no_timing)
            for (auto& r : reports) zero_timing(r);
        out << emit_report(reports, cfg.format);
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace alphaseed
