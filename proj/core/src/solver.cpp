#include "alphaseed/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphaseed/errors.hpp"

namespace alphaseed {

namespace {

constexpr double kCurvatureFloor = 1e-12;

// Movable-up set I_u u I_m: y=+1 with alpha<C, or y=-1 with alpha>0.
bool in_up_set(int y, double a, double C) { return y > 0 ? a < C : a > 0.0; }
// Movable-down set I_l u I_m: y=+1 with alpha>0, or y=-1 with alpha<C.
bool in_low_set(int y, double a, double C) { return y > 0 ? a > 0.0 : a < C; }

void recompute_f(SvmState& state, const KernelEvaluator& kern) {
    const int m = state.size();
    std::vector<double> g(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
        const double aj = state.alpha[static_cast<std::size_t>(j)];
        if (aj == 0.0) continue;
        const double coef = aj * state.y[static_cast<std::size_t>(j)];
        auto row = kern.row(state.ids[static_cast<std::size_t>(j)]);
        for (int p = 0; p < m; ++p)
            g[static_cast<std::size_t>(p)] += coef * (*row)[static_cast<std::size_t>(state.ids[static_cast<std::size_t>(p)])];
    }
    for (int p = 0; p < m; ++p)
        state.f[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(p)] - state.y[static_cast<std::size_t>(p)];
}

struct Pair {
    int up = -1;  // argmin f over I_u u I_m
    int low = -1; // argmax f over I_l u I_m
    double gap = -std::numeric_limits<double>::infinity();
};

Pair select_pair(const SvmState& state) {
    Pair pair;
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    const int m = state.size();
    for (int p = 0; p < m; ++p) {
        const auto up = static_cast<std::size_t>(p);
        const double a = state.alpha[up];
        const double fv = state.f[up];
        const int y = state.y[up];
        if (in_up_set(y, a, state.C) && fv < fmin) {
            fmin = fv;
            pair.up = p;
        }
        if (in_low_set(y, a, state.C) && fv > fmax) {
            fmax = fv;
            pair.low = p;
        }
    }
    if (pair.up >= 0 && pair.low >= 0) pair.gap = fmax - fmin;
    return pair;
}

} // namespace

IndexPartition partition(const SvmState& state) {
    IndexPartition part;
    for (int p = 0; p < state.size(); ++p) {
        const auto up = static_cast<std::size_t>(p);
        const double a = state.alpha[up];
        const int y = state.y[up];
        const int id = state.ids[up];
        if (a > 0.0 && a < state.C)
            part.middle.push_back(id);
        else if ((y > 0 && a == 0.0) || (y < 0 && a == state.C))
            part.upper.push_back(id);
        else
            part.lower.push_back(id);
    }
    return part;
}

double kkt_gap(const SvmState& state) {
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < state.size(); ++p) {
        const auto up = static_cast<std::size_t>(p);
        if (in_up_set(state.y[up], state.alpha[up], state.C)) fmin = std::min(fmin, state.f[up]);
        if (in_low_set(state.y[up], state.alpha[up], state.C)) fmax = std::max(fmax, state.f[up]);
    }
    if (!std::isfinite(fmin) || !std::isfinite(fmax)) return 0.0; // one side empty: nothing movable
    return fmax - fmin;
}

SvmState init_state(const KernelEvaluator& kern, std::vector<int> active_ids, double C,
                    std::span<const double> alpha0) {
    if (active_ids.empty()) throw StateError("active id set is empty");
    if (!(C > 0.0)) throw ConfigError("C must be positive");
    if (alpha0.size() != active_ids.size())
        throw FeasibilityError("alpha0 length does not match the active id count");

    const Dataset& ds = kern.dataset();
    SvmState state;
    state.ids = std::move(active_ids);
    state.C = C;
    const int m = state.size();
    state.y.reserve(static_cast<std::size_t>(m));
    for (int id : state.ids) {
        if (id < 0 || id >= ds.size())
            throw IndexError("active id " + std::to_string(id) + " out of range");
        state.y.push_back(ds[id].label);
    }

    double sum_ya = 0.0;
    for (int p = 0; p < m; ++p) {
        const double a = alpha0[static_cast<std::size_t>(p)];
        if (!std::isfinite(a)) throw FeasibilityError("alpha0 contains a non-finite entry");
        if (a < 0.0 || a > C)
            throw FeasibilityError("box constraint violated: alpha[" +
                                   std::to_string(state.ids[static_cast<std::size_t>(p)]) + "] = " +
                                   std::to_string(a) + " outside [0, " + std::to_string(C) + "]");
        sum_ya += state.y[static_cast<std::size_t>(p)] * a;
    }
    const double tol = 1e-9 * C * m;
    if (std::abs(sum_ya) > tol)
        throw FeasibilityError("equality constraint violated: sum y*alpha = " +
                               std::to_string(sum_ya) + " exceeds tolerance " + std::to_string(tol));

    state.alpha.assign(alpha0.begin(), alpha0.end());
    state.f.resize(static_cast<std::size_t>(m));
    recompute_f(state, kern);
    state.iterations = 0;
    state.converged = false;
    return state;
}

SvmState solve(SvmState state, const KernelEvaluator& kern, const SolverConfig& config,
               const SolveObserver& after_step) {
    if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    const double C = state.C;
    const int m = state.size();
    std::int64_t steps = 0;
    std::int64_t since_recompute = 0;

    state.converged = false;
    while (true) {
        Pair pair = select_pair(state);
        if (pair.up < 0 || pair.low < 0 || pair.gap <= config.epsilon) {
            // Re-check against an exactly recomputed f before accepting.
            recompute_f(state, kern);
            pair = select_pair(state);
            if (pair.up < 0 || pair.low < 0 || pair.gap <= config.epsilon) {
                state.converged = true;
                break;
            }
        }
        if (steps >= config.max_iterations) break;

        const auto u = static_cast<std::size_t>(pair.up);
        const auto l = static_cast<std::size_t>(pair.low);
        const int idu = state.ids[u];
        const int idl = state.ids[l];
        auto row_u = kern.row(idu);
        auto row_l = kern.row(idl);

        const double kuu = (*row_u)[static_cast<std::size_t>(idu)];
        const double kll = (*row_l)[static_cast<std::size_t>(idl)];
        const double kul = (*row_u)[static_cast<std::size_t>(idl)];
        double curv = kuu + kll - 2.0 * kul;
        if (curv < kCurvatureFloor) curv = kCurvatureFloor;

        const double du_max = state.y[u] > 0 ? C - state.alpha[u] : state.alpha[u];
        const double dl_max = state.y[l] > 0 ? state.alpha[l] : C - state.alpha[l];
        const double d = std::min({pair.gap / curv, du_max, dl_max});

        // Snap to the bound when the step is box-limited, keeping the
        // partition (alpha == 0 / alpha == C) exact.
        if (d == du_max)
            state.alpha[u] = state.y[u] > 0 ? C : 0.0;
        else
            state.alpha[u] += state.y[u] * d;
        if (d == dl_max)
            state.alpha[l] = state.y[l] > 0 ? 0.0 : C;
        else
            state.alpha[l] -= state.y[l] * d;

        for (int p = 0; p < m; ++p) {
            const auto up = static_cast<std::size_t>(p);
            const auto id = static_cast<std::size_t>(state.ids[up]);
            state.f[up] += d * ((*row_u)[id] - (*row_l)[id]);
        }

        ++steps;
        ++state.iterations;
        ++since_recompute;
        if (config.f_recompute_interval > 0 && since_recompute >= config.f_recompute_interval) {
            recompute_f(state, kern);
            since_recompute = 0;
        }
        if (after_step) after_step(state);
    }

    state.b = compute_bias(state);
    return state;
}

double compute_bias(const SvmState& state) {
    if (state.size() == 0) throw StateError("cannot compute bias of an empty state");
    double middle_sum = 0.0;
    int middle_count = 0;
    double min_upper = std::numeric_limits<double>::infinity();
    double max_lower = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < state.size(); ++p) {
        const auto up = static_cast<std::size_t>(p);
        const double a = state.alpha[up];
        const double fv = state.f[up];
        const int y = state.y[up];
        if (a > 0.0 && a < state.C) {
            middle_sum += fv;
            ++middle_count;
        } else if ((y > 0 && a == 0.0) || (y < 0 && a == state.C)) {
            min_upper = std::min(min_upper, fv);
        } else {
            max_lower = std::max(max_lower, fv);
        }
    }
    if (middle_count > 0) return middle_sum / middle_count;
    if (std::isfinite(min_upper) && std::isfinite(max_lower)) return 0.5 * (min_upper + max_lower);
    if (std::isfinite(min_upper)) return min_upper;
    return max_lower;
}

double objective(const SvmState& state, const KernelEvaluator& kern) {
    const int m = state.size();
    double linear = 0.0;
    double quad = 0.0;
    for (int i = 0; i < m; ++i) {
        const double ai = state.alpha[static_cast<std::size_t>(i)];
        if (ai == 0.0) continue;
        linear += ai;
        auto row = kern.row(state.ids[static_cast<std::size_t>(i)]);
        const double yi = state.y[static_cast<std::size_t>(i)];
        for (int j = 0; j < m; ++j) {
            const double aj = state.alpha[static_cast<std::size_t>(j)];
            if (aj == 0.0) continue;
            const double qij =
                yi * state.y[static_cast<std::size_t>(j)] * (*row)[static_cast<std::size_t>(state.ids[static_cast<std::size_t>(j)])];
            quad += ai * aj * qij;
        }
    }
    return linear - 0.5 * quad;
}

double decision_value(const SvmState& state, const KernelEvaluator& kern, const Instance& x) {
    double g = 0.0;
    for (int p = 0; p < state.size(); ++p) {
        const auto up = static_cast<std::size_t>(p);
        const double a = state.alpha[up];
        if (a == 0.0) continue;
        g += a * state.y[up] * kern.value_against(state.ids[up], x);
    }
    return g - state.b;
}

double decision_value_for_id(const SvmState& state, const KernelEvaluator& kern, int id) {
    auto row = kern.row(id);
    double g = 0.0;
    for (int p = 0; p < state.size(); ++p) {
        const auto up = static_cast<std::size_t>(p);
        const double a = state.alpha[up];
        if (a == 0.0) continue;
        g += a * state.y[up] * (*row)[static_cast<std::size_t>(state.ids[up])];
    }
    return g - state.b;
}

int predict(const SvmState& state, const KernelEvaluator& kern, const Instance& x) {
    return decision_value(state, kern, x) < 0.0 ? -1 : +1;
}

int predict_for_id(const SvmState& state, const KernelEvaluator& kern, int id) {
    return decision_value_for_id(state, kern, id) < 0.0 ? -1 : +1;
}

} // namespace alphaseed
