#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "alphaseed/kernel.hpp"

namespace alphaseed {

struct SolverConfig {
    double epsilon = 1e-3;                     // KKT stopping tolerance
    std::int64_t max_iterations = 100'000'000; // per solve call
    std::int64_t f_recompute_interval = 1000;  // drift guard for the incremental f
};

// Warm-startable dual solver state over one active training subset.
// alpha are the dual weights; f the per-instance optimality indicators
// f_i = sum_j alpha_j y_j K(x_i, x_j) - y_i.
struct SvmState {
    std::vector<int> ids; // active instance ids, ascending
    std::vector<int> y;   // labels, parallel to ids
    std::vector<double> alpha;
    std::vector<double> f;
    double b = 0.0;
    double C = 1.0;
    std::int64_t iterations = 0;
    bool converged = false;

    int size() const { return static_cast<int>(ids.size()); }
};

// KKT index sets by alpha value: middle = {0 < a < C},
// upper = {y=+1, a=0} u {y=-1, a=C}, lower = {y=+1, a=C} u {y=-1, a=0}.
struct IndexPartition {
    std::vector<int> upper, middle, lower; // instance ids
};

IndexPartition partition(const SvmState& state);

// max f over (lower u middle) minus min f over (upper u middle);
// <= 0 at the exact optimum, <= epsilon at an accepted one.
double kkt_gap(const SvmState& state);

// Builds a consistent state: validates that alpha0 is inside the box and
// |sum y*alpha| <= 1e-9*C*n, then computes f exactly from alpha0.
// Throws FeasibilityError naming the violated constraint otherwise.
SvmState init_state(const KernelEvaluator& kern, std::vector<int> active_ids, double C,
                    std::span<const double> alpha0);

using SolveObserver = std::function<void(const SvmState&)>;

// Maximal-violating-pair SMO. One iteration = one two-alpha update; the
// final convergence check that performs no update is not counted. On
// convergence f has just been recomputed from scratch and b is filled in
// via compute_bias. Hitting max_iterations returns the state with
// converged = false.
SvmState solve(SvmState state, const KernelEvaluator& kern, const SolverConfig& config,
               const SolveObserver& after_step = nullptr);

// Mean of f over the middle set; midpoint of min-upper/max-lower f when the
// middle set is empty. Throws StateError on an empty active set.
double compute_bias(const SvmState& state);

// Dual objective: sum(alpha) - 1/2 alpha' Q alpha.
double objective(const SvmState& state, const KernelEvaluator& kern);

// sum_j alpha_j y_j K(x, x_j) - b.
double decision_value(const SvmState& state, const KernelEvaluator& kern, const Instance& x);
double decision_value_for_id(const SvmState& state, const KernelEvaluator& kern, int id);

// Sign of the decision value; exact zero breaks to +1.
int predict(const SvmState& state, const KernelEvaluator& kern, const Instance& x);
int predict_for_id(const SvmState& state, const KernelEvaluator& kern, int id);

} // namespace alphaseed
