#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alphaseed/seeding.hpp"
#include "alphaseed/solver.hpp"

namespace alphaseed {

struct FoldMetrics {
    int fold = 0; // 1-based round
    double init_seconds = 0.0;
    double train_seconds = 0.0; // partitioning + solve + prediction
    std::int64_t iterations = 0;
    int test_correct = 0;
    int test_total = 0;
    bool converged = true;
    bool failed = false; // e.g. single-label training set
    double kkt_gap = 0.0;
    double seed_residual = 0.0;
};

struct CvReport {
    std::string strategy;
    int k = 0;
    double C = 1.0;
    double gamma = 0.0;
    std::string kernel;
    double epsilon = 1e-3;
    std::uint64_t fold_seed = 0;
    std::uint64_t rng_seed = 0;

    std::vector<FoldMetrics> per_fold;
    std::int64_t total_iterations = 0;
    double total_init_seconds = 0.0;
    double total_rest_seconds = 0.0;
    double accuracy_percent = 0.0; // pooled over all instances
    bool all_converged = true;

    // Per-instance results; each instance is tested in exactly one fold.
    std::vector<double> decision_values;
    std::vector<int> predicted;

    double total_seconds() const { return total_init_seconds + total_rest_seconds; }
};

struct CvConfig {
    SolverConfig solver;
    std::uint64_t rng_seed = 0;
    int ato_max_rounds = 100;
};

// Runs the k-round protocol: round 1 trains from a zero seed, round h+1 is
// seeded from round h's converged state through the chosen strategy. A fold
// whose training set holds a single label is recorded as failed and the
// chain restarts from a zero seed.
CvReport run_cv(const KernelEvaluator& kern, const FoldPlan& plan, double C, Strategy strategy,
                const CvConfig& config);

// k = n cross-validation.
CvReport run_loocv(const KernelEvaluator& kern, double C, Strategy strategy, const CvConfig& config);

} // namespace alphaseed
