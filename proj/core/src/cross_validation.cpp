#include "alphaseed/cross_validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "alphaseed/errors.hpp"

namespace alphaseed {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool has_both_labels(const Dataset& ds, const std::vector<int>& ids) {
    bool pos = false, neg = false;
    for (int id : ids) (ds[id].label > 0 ? pos : neg) = true;
    return pos && neg;
}

} // namespace

CvReport run_cv(const KernelEvaluator& kern, const FoldPlan& plan, double C, Strategy strategy,
                const CvConfig& config) {
    const Dataset& ds = kern.dataset();
    const int n = ds.size();
    if (static_cast<int>(plan.assignment.size()) != n)
        throw ConfigError("fold plan does not match the dataset size");
    if (plan.k < 3) throw ConfigError("k must be >= 3");
    if (!(C > 0.0)) throw ConfigError("C must be positive");

    CvReport report;
    report.strategy = strategy_name(strategy);
    report.k = plan.k;
    report.C = C;
    report.gamma = kern.spec().gamma;
    report.kernel = kern.spec().kind == KernelKind::gaussian ? "gaussian" : "linear";
    report.epsilon = config.solver.epsilon;
    report.fold_seed = plan.seed;
    report.rng_seed = config.rng_seed;
    report.decision_values.assign(static_cast<std::size_t>(n), 0.0);
    report.predicted.assign(static_cast<std::size_t>(n), 0);

    SeedingConfig seeding_cfg;
    seeding_cfg.rng_seed = config.rng_seed;
    seeding_cfg.ato_max_rounds = config.ato_max_rounds;
    seeding_cfg.epsilon = config.solver.epsilon;

    std::optional<SvmState> prev;
    int correct_total = 0;

    for (int round = 1; round <= plan.k; ++round) {
        FoldMetrics fm;
        fm.fold = round;
        const std::vector<int> test_ids = plan.fold_ids(round - 1);
        fm.test_total = static_cast<int>(test_ids.size());

        // Seeding (its own wall-clock bucket).
        SeedResult seeded;
        if (round == 1 || !prev.has_value()) {
            FoldTransition first;
            for (int id = 0; id < n; ++id) {
                if (plan.assignment[static_cast<std::size_t>(id)] == round - 1)
                    first.removed.push_back(id); // unused by seed_zero
                else
                    first.shared.push_back(id);
            }
            seeded = seed_zero(first, C);
            seeded.strategy = strategy;
        } else {
            const FoldTransition trans = make_transition(plan, round - 1);
            seeded = seed(strategy, &prev.value(), trans, kern, seeding_cfg, C);
        }
        fm.init_seconds = seeded.init_seconds;
        fm.seed_residual = seeded.constraint_residual;

        // Everything else: state setup, solve, prediction.
        const auto t0 = Clock::now();
        if (!has_both_labels(ds, seeded.ids)) {
            fm.failed = true;
            fm.converged = false;
            fm.train_seconds = seconds_since(t0);
            report.per_fold.push_back(fm);
            report.all_converged = false;
            prev.reset();
            continue;
        }

        SvmState state = init_state(kern, std::move(seeded.ids), C, seeded.alpha);
        state = solve(std::move(state), kern, config.solver);
        fm.iterations = state.iterations;
        fm.converged = state.converged;
        fm.kkt_gap = kkt_gap(state);
        if (!state.converged) report.all_converged = false;

        for (int id : test_ids) {
            const double dv = decision_value_for_id(state, kern, id);
            const int label = dv < 0.0 ? -1 : +1;
            report.decision_values[static_cast<std::size_t>(id)] = dv;
            report.predicted[static_cast<std::size_t>(id)] = label;
            if (label == ds[id].label) ++fm.test_correct;
        }
        fm.train_seconds = seconds_since(t0);

        correct_total += fm.test_correct;
        report.per_fold.push_back(fm);
        prev = std::move(state);
    }

    for (const FoldMetrics& fm : report.per_fold) {
        report.total_iterations += fm.iterations;
        report.total_init_seconds += fm.init_seconds;
        report.total_rest_seconds += fm.train_seconds;
    }
    report.accuracy_percent = 100.0 * static_cast<double>(correct_total) / static_cast<double>(n);
    return report;
}

CvReport run_loocv(const KernelEvaluator& kern, double C, Strategy strategy, const CvConfig& config) {
    return run_cv(kern, make_loocv_plan(kern.dataset()), C, strategy, config);
}

} // namespace alphaseed
