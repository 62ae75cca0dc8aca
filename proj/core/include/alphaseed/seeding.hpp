#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alphaseed/solver.hpp"

namespace alphaseed {

enum class Strategy { zero, ato, mir, sir, avg, top };

Strategy parse_strategy(const std::string& name); // throws ConfigError on unknown
std::string strategy_name(Strategy s);
// Comma-separated names; "all" expands to zero,ato,mir,sir,avg,top.
std::vector<Strategy> parse_strategy_list(const std::string& csv);

// Index sets between two consecutive cross-validation rounds: `shared` stays
// in the training set, `removed` leaves it (the next test fold), `added`
// joins it (the previous test fold).
struct FoldTransition {
    std::vector<int> shared;
    std::vector<int> removed;
    std::vector<int> added;
};

// Transition from round h to round h+1, 1 <= h <= k-1: added = round h's
// test fold, removed = round h+1's test fold.
FoldTransition make_transition(const FoldPlan& plan, int round_h);

// Initial alpha vector for the next training set (shared u added).
struct SeedResult {
    std::vector<int> ids; // ascending
    std::vector<double> alpha;
    double init_seconds = 0.0;
    double constraint_residual = 0.0; // |sum y*alpha| before the final correction
    Strategy strategy = Strategy::zero;
};

struct SeedingConfig {
    std::uint64_t rng_seed = 0;
    int ato_max_rounds = 100;
    // Slack used when testing f against the previous bias (f == b membership
    // and the "instance reached its target" check).
    double epsilon = 1e-3;
};

SeedResult seed_zero(const FoldTransition& trans, double C);

// Per-round diagnostics of the iterative strategy.
struct AtoTrace {
    std::vector<double> eta;            // step size per outer round, in (0, 1]
    std::vector<double> removed_weight; // sum of removed alphas at the start of each round
    int rounds = 0;
    bool capped = false;
};

// Iteratively drives the removed alphas to zero and the added ones toward
// their optimal values, adjusting the free instances so the optimality
// indicators stay pinned to the previous bias.
SeedResult seed_ato(const SvmState& prev, const FoldTransition& trans, const KernelEvaluator& kern,
                    const SeedingConfig& config, AtoTrace* trace = nullptr);

// Keeps the shared alphas, replaces the removed set by the added set at once
// through a least-squares fit of the added alphas, then repairs feasibility.
// `raw_added` receives the unclipped least-squares solution when given.
SeedResult seed_mir(const SvmState& prev, const FoldTransition& trans, const KernelEvaluator& kern,
                    std::vector<double>* raw_added = nullptr);

struct SirTrace {
    std::vector<std::pair<int, int>> matches; // (removed id, added id)
    int random_fallbacks = 0;
    int dropped = 0; // removed support vectors with no replacement left
};

// Replaces each removed support vector by its most kernel-similar unused
// added instance with the same label; random unused fallback otherwise.
SeedResult seed_sir(const SvmState& prev, const FoldTransition& trans, const KernelEvaluator& kern,
                    const SeedingConfig& config, SirTrace* trace = nullptr);

// Leave-one-out baselines, applied per removed instance sequentially.
// The result covers prev's active ids minus `removed`.
SeedResult seed_avg(const SvmState& prev, std::span<const int> removed, double C);
SeedResult seed_top(const SvmState& prev, std::span<const int> removed, const KernelEvaluator& kern);

// Clips alpha into [0, C], then water-fills: uniformly shifts all y_t*alpha_t
// of the still-adjustable entries, freezing saturated ones, until
// sum y_t*alpha_t == target (to 1e-12*C*|T|). Throws FeasibilityError when
// the target is outside [-C*#neg, +C*#pos].
std::vector<double> adjust_alpha_t(std::vector<double> alpha_t, std::span<const int> y_t, double target,
                                   double C);

// Strategy dispatcher used by the cross-validation harness. Measures wall
// time, pads avg/top results with zero-alpha added instances, and falls back
// to seed_zero when a strategy cannot produce a feasible seed. `prev` may be
// null only for Strategy::zero.
SeedResult seed(Strategy strategy, const SvmState* prev, const FoldTransition& trans,
                const KernelEvaluator& kern, const SeedingConfig& config, double C);

} // namespace alphaseed
