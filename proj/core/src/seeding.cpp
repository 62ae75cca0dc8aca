#include "alphaseed/seeding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "alphaseed/errors.hpp"
#include "alphaseed/linalg.hpp"

namespace alphaseed {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double clamp_box(double a, double C) { return std::min(C, std::max(0.0, a)); }

double sum_y_alpha(std::span<const int> y, std::span<const double> alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) s += y[i] * alpha[i];
    return s;
}

// id -> position map over the dataset id range; -1 for absent ids.
std::vector<int> position_index(int dataset_size, std::span<const int> ids) {
    std::vector<int> pos(static_cast<std::size_t>(dataset_size), -1);
    for (std::size_t p = 0; p < ids.size(); ++p) {
        const int id = ids[p];
        if (id < 0 || id >= dataset_size)
            throw IndexError("id " + std::to_string(id) + " out of range");
        pos[static_cast<std::size_t>(id)] = static_cast<int>(p);
    }
    return pos;
}

std::vector<int> sorted_union(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

Strategy parse_strategy(const std::string& name) {
    if (name == "zero") return Strategy::zero;
    if (name == "ato") return Strategy::ato;
    if (name == "mir") return Strategy::mir;
    if (name == "sir") return Strategy::sir;
    if (name == "avg") return Strategy::avg;
    if (name == "top") return Strategy::top;
    throw ConfigError("unknown strategy \"" + name + "\" (expected zero|ato|mir|sir|avg|top)");
}

std::string strategy_name(Strategy s) {
    switch (s) {
    case Strategy::zero: return "zero";
    case Strategy::ato: return "ato";
    case Strategy::mir: return "mir";
    case Strategy::sir: return "sir";
    case Strategy::avg: return "avg";
    case Strategy::top: return "top";
    }
    return "?";
}

std::vector<Strategy> parse_strategy_list(const std::string& csv) {
    std::vector<Strategy> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find(',', start);
        if (end == std::string::npos) end = csv.size();
        std::string tok = csv.substr(start, end - start);
        if (!tok.empty()) {
            if (tok == "all") {
                for (auto s : {Strategy::zero, Strategy::ato, Strategy::mir, Strategy::sir,
                               Strategy::avg, Strategy::top})
                    out.push_back(s);
            } else {
                out.push_back(parse_strategy(tok));
            }
        }
        if (end == csv.size()) break;
        start = end + 1;
    }
    if (out.empty()) throw ConfigError("empty strategy list");
    return out;
}

FoldTransition make_transition(const FoldPlan& plan, int round_h) {
    if (round_h < 1 || round_h > plan.k - 1)
        throw ConfigError("transition round must be in [1, k-1], got " + std::to_string(round_h));
    FoldTransition trans;
    const int added_fold = round_h - 1;  // test fold of round h rejoins
    const int removed_fold = round_h;    // test fold of round h+1 leaves
    for (int id = 0; id < static_cast<int>(plan.assignment.size()); ++id) {
        const int fold = plan.assignment[static_cast<std::size_t>(id)];
        if (fold == added_fold)
            trans.added.push_back(id);
        else if (fold == removed_fold)
            trans.removed.push_back(id);
        else
            trans.shared.push_back(id);
    }
    return trans;
}

std::vector<double> adjust_alpha_t(std::vector<double> alpha_t, std::span<const int> y_t, double target,
                                   double C) {
    if (alpha_t.size() != y_t.size()) throw FeasibilityError("alpha/label length mismatch");
    const int n = static_cast<int>(alpha_t.size());
    if (n == 0) {
        if (target != 0.0) throw FeasibilityError("cannot reach a nonzero target with no entries");
        return alpha_t;
    }

    int npos = 0;
    for (int y : y_t) npos += y > 0 ? 1 : 0;
    const int nneg = n - npos;
    const double tol = 1e-12 * C * n;
    if (target < -C * nneg - tol || target > C * npos + tol)
        throw FeasibilityError("adjustment target " + std::to_string(target) +
                               " outside the reachable range [" + std::to_string(-C * nneg) + ", " +
                               std::to_string(C * npos) + "]");

    for (double& a : alpha_t) a = clamp_box(a, C);

    const int max_rounds = 2 * n + 16;
    for (int round = 0; round < max_rounds; ++round) {
        double cur = 0.0;
        for (int i = 0; i < n; ++i)
            cur += y_t[static_cast<std::size_t>(i)] * alpha_t[static_cast<std::size_t>(i)];
        const double diff = target - cur;
        if (std::abs(diff) <= tol) return alpha_t;

        // Entries still able to move y*alpha toward the target.
        std::vector<int> movable;
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const bool can = diff > 0.0
                                 ? (y_t[ui] > 0 ? alpha_t[ui] < C : alpha_t[ui] > 0.0)
                                 : (y_t[ui] > 0 ? alpha_t[ui] > 0.0 : alpha_t[ui] < C);
            if (can) movable.push_back(i);
        }
        if (movable.empty())
            throw FeasibilityError("no adjustable entries left; residual " + std::to_string(diff));

        const double share = diff / static_cast<double>(movable.size());
        bool clamped = false;
        for (int i : movable) {
            const auto ui = static_cast<std::size_t>(i);
            double next = alpha_t[ui] + y_t[ui] * share;
            if (next < 0.0) {
                next = 0.0;
                clamped = true;
            } else if (next > C) {
                next = C;
                clamped = true;
            }
            alpha_t[ui] = next;
        }
        // An unclamped round absorbs the whole difference up to rounding.
        if (!clamped) return alpha_t;
    }
    throw FeasibilityError("alpha adjustment failed to converge");
}

SeedResult seed_zero(const FoldTransition& trans, double C) {
    if (!(C > 0.0)) throw ConfigError("C must be positive");
    SeedResult res;
    res.strategy = Strategy::zero;
    res.ids = sorted_union(trans.shared, trans.added);
    res.alpha.assign(res.ids.size(), 0.0);
    res.constraint_residual = 0.0;
    return res;
}

// ---------------------------------------------------------------------------
// ATO
// ---------------------------------------------------------------------------

namespace {

enum class Zone : char { upper, middle, lower };

Zone zone_by_f(double f, double b, double tol) {
    if (f > b + tol) return Zone::upper;
    if (f < b - tol) return Zone::lower;
    return Zone::middle;
}

bool meets_bias_condition(double alpha, int y, double f, double b, double C, double tol) {
    if (alpha > 0.0 && alpha < C) return std::abs(f - b) <= tol;
    const bool upper = (y > 0 && alpha == 0.0) || (y < 0 && alpha == C);
    return upper ? f >= b - tol : f <= b + tol;
}

} // namespace

SeedResult seed_ato(const SvmState& prev, const FoldTransition& trans, const KernelEvaluator& kern,
                    const SeedingConfig& config, AtoTrace* trace) {
    const double C = prev.C;
    const double b = prev.b;
    const double tol = config.epsilon;
    const Dataset& ds = kern.dataset();

    // Working universe: everything the step touches (previous training set
    // plus the incoming fold), position-indexed.
    const std::vector<int> ids = sorted_union(prev.ids, trans.added);
    const int N = static_cast<int>(ids.size());
    std::vector<int> y(static_cast<std::size_t>(N));
    std::vector<double> alpha(static_cast<std::size_t>(N), 0.0);
    std::vector<double> f(static_cast<std::size_t>(N), 0.0);
    std::vector<char> is_removed(static_cast<std::size_t>(N), 0);
    std::vector<char> is_incoming(static_cast<std::size_t>(N), 0);
    std::vector<char> is_tracked(static_cast<std::size_t>(N), 0);

    const std::vector<int> upos = position_index(ds.size(), ids);
    for (int p = 0; p < N; ++p) y[static_cast<std::size_t>(p)] = ds[ids[static_cast<std::size_t>(p)]].label;

    for (int pp = 0; pp < prev.size(); ++pp) {
        const int p = upos[static_cast<std::size_t>(prev.ids[static_cast<std::size_t>(pp)])];
        alpha[static_cast<std::size_t>(p)] = prev.alpha[static_cast<std::size_t>(pp)];
        f[static_cast<std::size_t>(p)] = prev.f[static_cast<std::size_t>(pp)];
        is_tracked[static_cast<std::size_t>(p)] = 1;
    }
    for (int id : trans.removed) {
        const int p = id >= 0 && id < ds.size() ? upos[static_cast<std::size_t>(id)] : -1;
        if (p < 0 || !is_tracked[static_cast<std::size_t>(p)])
            throw IndexError("removed id " + std::to_string(id) + " not in the previous state");
        is_removed[static_cast<std::size_t>(p)] = 1;
        is_tracked[static_cast<std::size_t>(p)] = 0;
    }
    for (int id : trans.added) {
        const int p = upos[static_cast<std::size_t>(id)];
        is_incoming[static_cast<std::size_t>(p)] = 1;
        // Indicator of an incoming instance under the previous alphas.
        auto row = kern.row(id);
        double g = 0.0;
        for (int pp = 0; pp < prev.size(); ++pp) {
            const double a = prev.alpha[static_cast<std::size_t>(pp)];
            if (a == 0.0) continue;
            g += a * prev.y[static_cast<std::size_t>(pp)] *
                 (*row)[static_cast<std::size_t>(prev.ids[static_cast<std::size_t>(pp)])];
        }
        f[static_cast<std::size_t>(p)] = g - y[static_cast<std::size_t>(p)];
    }

    // Zones over the tracked set, initially by alpha.
    std::vector<Zone> zone(static_cast<std::size_t>(N), Zone::middle);
    for (int p = 0; p < N; ++p) {
        const auto up = static_cast<std::size_t>(p);
        if (!is_tracked[up]) continue;
        const double a = alpha[up];
        if (a > 0.0 && a < C)
            zone[up] = Zone::middle;
        else if ((y[up] > 0 && a == 0.0) || (y[up] < 0 && a == C))
            zone[up] = Zone::upper;
        else
            zone[up] = Zone::lower;
    }

    int rounds = 0;
    while (true) {
        std::vector<int> removed_live;
        double removed_sum = 0.0;
        for (int p = 0; p < N; ++p)
            if (is_removed[static_cast<std::size_t>(p)] && alpha[static_cast<std::size_t>(p)] > 0.0) {
                removed_live.push_back(p);
                removed_sum += alpha[static_cast<std::size_t>(p)];
            }
        if (removed_live.empty()) break;
        if (rounds >= config.ato_max_rounds) {
            // Stop shrinking; drop the surviving weight and repair below.
            for (int p : removed_live) alpha[static_cast<std::size_t>(p)] = 0.0;
            if (trace) trace->capped = true;
            break;
        }
        ++rounds;
        if (trace) trace->removed_weight.push_back(removed_sum);

        std::vector<int> middle_list;
        std::vector<int> incoming_list;
        for (int p = 0; p < N; ++p) {
            if (is_tracked[static_cast<std::size_t>(p)] && zone[static_cast<std::size_t>(p)] == Zone::middle)
                middle_list.push_back(p);
            if (is_incoming[static_cast<std::size_t>(p)]) incoming_list.push_back(p);
        }

        // Per-unit-step alpha changes of the incoming and removed blocks.
        std::vector<double> coef_incoming(incoming_list.size());
        for (std::size_t i = 0; i < incoming_list.size(); ++i)
            coef_incoming[i] = C - alpha[static_cast<std::size_t>(incoming_list[i])];
        std::vector<double> coef_removed(removed_live.size());
        for (std::size_t i = 0; i < removed_live.size(); ++i)
            coef_removed[i] = -alpha[static_cast<std::size_t>(removed_live[i])];

        // Free-instance response that keeps their indicators pinned:
        // [y_M'; Q_MM] phi = [y_T'; Q_MT](C1 - a_T) - [y_R'; Q_MR] a_R.
        std::vector<double> phi(middle_list.size(), 0.0);
        if (!middle_list.empty()) {
            const int M = static_cast<int>(middle_list.size());
            DenseMatrix G(M + 1, M);
            std::vector<double> rhs(static_cast<std::size_t>(M) + 1, 0.0);
            for (int c = 0; c < M; ++c)
                G.at(0, c) = y[static_cast<std::size_t>(middle_list[static_cast<std::size_t>(c)])];
            double rhs0 = 0.0;
            for (std::size_t i = 0; i < incoming_list.size(); ++i)
                rhs0 += y[static_cast<std::size_t>(incoming_list[i])] * coef_incoming[i];
            for (std::size_t i = 0; i < removed_live.size(); ++i)
                rhs0 += y[static_cast<std::size_t>(removed_live[i])] * coef_removed[i];
            rhs[0] = rhs0;

            for (int r = 0; r < M; ++r) {
                const int pm = middle_list[static_cast<std::size_t>(r)];
                const int ym = y[static_cast<std::size_t>(pm)];
                auto row = kern.row(ids[static_cast<std::size_t>(pm)]);
                for (int c = 0; c < M; ++c) {
                    const int pc = middle_list[static_cast<std::size_t>(c)];
                    G.at(r + 1, c) = ym * y[static_cast<std::size_t>(pc)] *
                                     (*row)[static_cast<std::size_t>(ids[static_cast<std::size_t>(pc)])];
                }
                double acc = 0.0;
                for (std::size_t i = 0; i < incoming_list.size(); ++i) {
                    const int pt = incoming_list[i];
                    acc += ym * y[static_cast<std::size_t>(pt)] *
                           (*row)[static_cast<std::size_t>(ids[static_cast<std::size_t>(pt)])] * coef_incoming[i];
                }
                for (std::size_t i = 0; i < removed_live.size(); ++i) {
                    const int pr = removed_live[i];
                    acc += ym * y[static_cast<std::size_t>(pr)] *
                           (*row)[static_cast<std::size_t>(ids[static_cast<std::size_t>(pr)])] * coef_removed[i];
                }
                rhs[static_cast<std::size_t>(r) + 1] = acc;
            }
            phi = solve_least_squares(G, rhs);
        }

        // Per-unit-step indicator change, for every instance in the universe.
        std::vector<double> slope(static_cast<std::size_t>(N), 0.0);
        auto add_column = [&](int pcol, double alpha_delta) {
            if (alpha_delta == 0.0) return;
            const double coef = alpha_delta * y[static_cast<std::size_t>(pcol)];
            auto row = kern.row(ids[static_cast<std::size_t>(pcol)]);
            for (int p = 0; p < N; ++p)
                slope[static_cast<std::size_t>(p)] +=
                    coef * (*row)[static_cast<std::size_t>(ids[static_cast<std::size_t>(p)])];
        };
        for (std::size_t i = 0; i < incoming_list.size(); ++i) add_column(incoming_list[i], coef_incoming[i]);
        for (std::size_t i = 0; i < removed_live.size(); ++i) add_column(removed_live[i], coef_removed[i]);
        for (std::size_t i = 0; i < middle_list.size(); ++i) add_column(middle_list[i], -phi[i]);

        // Step size: first tracked indicator that crosses the bias, capped at
        // the full step and at the free-instance box limits.
        double eta = 1.0;
        for (int p = 0; p < N; ++p) {
            const auto up = static_cast<std::size_t>(p);
            if (!is_tracked[up] || zone[up] == Zone::middle) continue;
            const double s = slope[up];
            if (s == 0.0) continue;
            const double cross = (b - f[up]) / s;
            if (cross > 0.0 && cross < eta) eta = cross;
        }
        for (std::size_t i = 0; i < middle_list.size(); ++i) {
            const double ph = phi[i];
            const double a = alpha[static_cast<std::size_t>(middle_list[i])];
            double cap = -1.0;
            if (ph > 0.0) cap = a / ph;
            else if (ph < 0.0) cap = (C - a) / (-ph);
            if (cap > 0.0 && cap < eta) eta = cap;
        }

        if (trace) trace->eta.push_back(eta);

        // Apply the step; a full step lands exactly on the bounds.
        for (std::size_t i = 0; i < incoming_list.size(); ++i) {
            const auto p = static_cast<std::size_t>(incoming_list[i]);
            alpha[p] = eta >= 1.0 ? C : alpha[p] + eta * coef_incoming[i];
        }
        for (std::size_t i = 0; i < removed_live.size(); ++i) {
            const auto p = static_cast<std::size_t>(removed_live[i]);
            alpha[p] = eta >= 1.0 ? 0.0 : (1.0 - eta) * alpha[p];
        }
        std::vector<std::pair<int, double>> clamp_fix; // position, actual minus nominal delta
        for (std::size_t i = 0; i < middle_list.size(); ++i) {
            const auto p = static_cast<std::size_t>(middle_list[i]);
            const double nominal = -eta * phi[i];
            const double next = clamp_box(alpha[p] + nominal, C);
            const double actual = next - alpha[p];
            if (actual != nominal) clamp_fix.emplace_back(middle_list[i], actual - nominal);
            alpha[p] = next;
        }

        for (int p = 0; p < N; ++p) f[static_cast<std::size_t>(p)] += eta * slope[static_cast<std::size_t>(p)];
        for (const auto& [pcol, delta] : clamp_fix) {
            const double coef = delta * y[static_cast<std::size_t>(pcol)];
            auto row = kern.row(ids[static_cast<std::size_t>(pcol)]);
            for (int p = 0; p < N; ++p)
                f[static_cast<std::size_t>(p)] +=
                    coef * (*row)[static_cast<std::size_t>(ids[static_cast<std::size_t>(p)])];
        }

        // Absorb incoming instances whose indicator already sits where the
        // optimality condition puts it.
        for (std::size_t i = 0; i < incoming_list.size(); ++i) {
            const auto p = static_cast<std::size_t>(incoming_list[i]);
            if (meets_bias_condition(alpha[p], y[p], f[p], b, C, tol)) {
                is_incoming[p] = 0;
                is_tracked[p] = 1;
            }
        }

        for (int p = 0; p < N; ++p) {
            const auto up = static_cast<std::size_t>(p);
            if (is_tracked[up]) zone[up] = zone_by_f(f[up], b, tol);
        }
    }

    if (trace) trace->rounds = rounds;

    // Assemble over shared u added and repair the equality constraint.
    SeedResult res;
    res.strategy = Strategy::ato;
    res.ids = sorted_union(trans.shared, trans.added);
    res.alpha.resize(res.ids.size());
    std::vector<int> out_y(res.ids.size());
    for (std::size_t i = 0; i < res.ids.size(); ++i) {
        const int p = upos[static_cast<std::size_t>(res.ids[i])];
        res.alpha[i] = alpha[static_cast<std::size_t>(p)];
        out_y[i] = y[static_cast<std::size_t>(p)];
    }

    const double residual = sum_y_alpha(out_y, res.alpha);
    res.constraint_residual = std::abs(residual);
    const double repair_tol = 1e-12 * C * static_cast<double>(res.ids.size());
    if (std::abs(residual) > repair_tol) {
        // Shift the added instances plus the free shared ones; widen to the
        // whole vector if that subset cannot reach the target.
        const std::vector<int> added_pos = position_index(ds.size(), trans.added);
        std::vector<int> adjustable;
        for (std::size_t i = 0; i < res.ids.size(); ++i) {
            const bool is_added = added_pos[static_cast<std::size_t>(res.ids[i])] >= 0;
            const bool is_free = res.alpha[i] > 0.0 && res.alpha[i] < C;
            if (is_added || is_free) adjustable.push_back(static_cast<int>(i));
        }
        auto repair_over = [&](const std::vector<int>& subset) {
            std::vector<double> sub_a(subset.size());
            std::vector<int> sub_y(subset.size());
            double sub_sum = 0.0;
            for (std::size_t i = 0; i < subset.size(); ++i) {
                sub_a[i] = res.alpha[static_cast<std::size_t>(subset[i])];
                sub_y[i] = out_y[static_cast<std::size_t>(subset[i])];
                sub_sum += sub_y[i] * sub_a[i];
            }
            sub_a = adjust_alpha_t(std::move(sub_a), sub_y, sub_sum - residual, C);
            for (std::size_t i = 0; i < subset.size(); ++i)
                res.alpha[static_cast<std::size_t>(subset[i])] = sub_a[i];
        };
        try {
            repair_over(adjustable);
        } catch (const FeasibilityError&) {
            std::vector<int> all(res.ids.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
            repair_over(all); // rethrows to the dispatcher if still unreachable
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// MIR
// ---------------------------------------------------------------------------

SeedResult seed_mir(const SvmState& prev, const FoldTransition& trans, const KernelEvaluator& kern,
                    std::vector<double>* raw_added) {
    const double C = prev.C;
    const double b = prev.b;
    const Dataset& ds = kern.dataset();
    const std::vector<int> prev_pos = position_index(ds.size(), prev.ids);

    auto pos_of = [&](int id) {
        const int p = id >= 0 && id < ds.size() ? prev_pos[static_cast<std::size_t>(id)] : -1;
        if (p < 0) throw IndexError("id " + std::to_string(id) + " not in the previous state");
        return p;
    };

    SeedResult res;
    res.strategy = Strategy::mir;
    res.ids = sorted_union(trans.shared, trans.added);

    const int S = static_cast<int>(trans.shared.size());
    const int T = static_cast<int>(trans.added.size());

    std::vector<double> alpha_shared(static_cast<std::size_t>(S));
    for (int i = 0; i < S; ++i)
        alpha_shared[static_cast<std::size_t>(i)] =
            prev.alpha[static_cast<std::size_t>(pos_of(trans.shared[static_cast<std::size_t>(i)]))];

    double target = 0.0; // sum of y*alpha over the removed block
    for (int id : trans.removed)
        target += ds[id].label * prev.alpha[static_cast<std::size_t>(pos_of(id))];

    std::vector<double> alpha_added(static_cast<std::size_t>(T), 0.0);
    if (T > 0) {
        // One row per shared instance (its wanted indicator change) plus the
        // equality-constraint row.
        DenseMatrix A(S + 1, T);
        std::vector<double> rhs(static_cast<std::size_t>(S) + 1, 0.0);

        // Removed-block contribution to each shared indicator.
        std::vector<double> removed_g(static_cast<std::size_t>(S), 0.0);
        for (int id : trans.removed) {
            const double a = prev.alpha[static_cast<std::size_t>(pos_of(id))];
            if (a == 0.0) continue;
            const double coef = a * ds[id].label;
            auto row = kern.row(id);
            for (int i = 0; i < S; ++i)
                removed_g[static_cast<std::size_t>(i)] +=
                    coef * (*row)[static_cast<std::size_t>(trans.shared[static_cast<std::size_t>(i)])];
        }

        for (int c = 0; c < T; ++c) {
            const int tid = trans.added[static_cast<std::size_t>(c)];
            const int yt = ds[tid].label;
            auto row = kern.row(tid);
            for (int i = 0; i < S; ++i) {
                const int sid = trans.shared[static_cast<std::size_t>(i)];
                A.at(i, c) = ds[sid].label * yt * (*row)[static_cast<std::size_t>(sid)];
            }
            A.at(S, c) = yt;
        }

        for (int i = 0; i < S; ++i) {
            const int sid = trans.shared[static_cast<std::size_t>(i)];
            const int sp = pos_of(sid);
            const double a = prev.alpha[static_cast<std::size_t>(sp)];
            const double fi = prev.f[static_cast<std::size_t>(sp)];
            const int yi = ds[sid].label;
            // Pin the free instances; pull the bounded ones to the bias.
            const double want_df = (a > 0.0 && a < C) ? 0.0 : b - fi;
            rhs[static_cast<std::size_t>(i)] = yi * want_df + yi * removed_g[static_cast<std::size_t>(i)];
        }
        rhs[static_cast<std::size_t>(S)] = target;

        alpha_added = solve_least_squares(A, rhs);
    }
    if (raw_added) *raw_added = alpha_added;

    // Residual with the raw least-squares solution in place.
    double raw_sum = 0.0;
    for (int i = 0; i < S; ++i)
        raw_sum += ds[trans.shared[static_cast<std::size_t>(i)]].label * alpha_shared[static_cast<std::size_t>(i)];
    for (int c = 0; c < T; ++c)
        raw_sum += ds[trans.added[static_cast<std::size_t>(c)]].label * alpha_added[static_cast<std::size_t>(c)];
    res.constraint_residual = std::abs(raw_sum);

    if (T > 0) {
        std::vector<int> y_added(static_cast<std::size_t>(T));
        for (int c = 0; c < T; ++c)
            y_added[static_cast<std::size_t>(c)] = ds[trans.added[static_cast<std::size_t>(c)]].label;
        alpha_added = adjust_alpha_t(std::move(alpha_added), y_added, target, C);
    }

    const std::vector<int> shared_pos = position_index(ds.size(), trans.shared);
    const std::vector<int> added_pos = position_index(ds.size(), trans.added);
    res.alpha.resize(res.ids.size());
    for (std::size_t i = 0; i < res.ids.size(); ++i) {
        const int id = res.ids[i];
        if (shared_pos[static_cast<std::size_t>(id)] >= 0)
            res.alpha[i] = alpha_shared[static_cast<std::size_t>(shared_pos[static_cast<std::size_t>(id)])];
        else
            res.alpha[i] = alpha_added[static_cast<std::size_t>(added_pos[static_cast<std::size_t>(id)])];
    }
    return res;
}

// ---------------------------------------------------------------------------
// SIR
// ---------------------------------------------------------------------------

SeedResult seed_sir(const SvmState& prev, const FoldTransition& trans, const KernelEvaluator& kern,
                    const SeedingConfig& config, SirTrace* trace) {
    const double C = prev.C;
    const Dataset& ds = kern.dataset();
    const std::vector<int> prev_pos = position_index(ds.size(), prev.ids);

    struct Removal {
        int id;
        double alpha;
    };
    std::vector<Removal> removals;
    double target = 0.0;
    for (int id : trans.removed) {
        const int p = id >= 0 && id < ds.size() ? prev_pos[static_cast<std::size_t>(id)] : -1;
        if (p < 0) throw IndexError("removed id " + std::to_string(id) + " not in the previous state");
        const double a = prev.alpha[static_cast<std::size_t>(p)];
        target += ds[id].label * a;
        if (a > 0.0) removals.push_back({id, a});
    }
    // Largest weights pick their replacement first; ties by id for determinism.
    std::sort(removals.begin(), removals.end(), [](const Removal& a, const Removal& b) {
        if (a.alpha != b.alpha) return a.alpha > b.alpha;
        return a.id < b.id;
    });

    const int T = static_cast<int>(trans.added.size());
    std::vector<double> alpha_added(static_cast<std::size_t>(T), 0.0);
    std::vector<char> used(static_cast<std::size_t>(T), 0);
    std::mt19937_64 rng(config.rng_seed);

    for (const Removal& rem : removals) {
        const int yp = ds[rem.id].label;
        int best = -1;
        double best_k = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < T; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            const int qid = trans.added[static_cast<std::size_t>(c)];
            if (ds[qid].label != yp) continue;
            const double k = kern.value(rem.id, qid);
            if (k > best_k) { // ids ascend, so ties keep the smaller id
                best_k = k;
                best = c;
            }
        }
        if (best < 0) {
            // No same-label candidate left: pick any unused one at random.
            std::vector<int> unused;
            for (int c = 0; c < T; ++c)
                if (!used[static_cast<std::size_t>(c)]) unused.push_back(c);
            if (unused.empty()) {
                if (trace) ++trace->dropped;
                continue; // weight dropped; repaired below
            }
            best = unused[static_cast<std::size_t>(rng() % unused.size())];
            if (trace) ++trace->random_fallbacks;
        }
        alpha_added[static_cast<std::size_t>(best)] = rem.alpha;
        used[static_cast<std::size_t>(best)] = 1;
        if (trace) trace->matches.emplace_back(rem.id, trans.added[static_cast<std::size_t>(best)]);
    }

    SeedResult res;
    res.strategy = Strategy::sir;
    res.ids = sorted_union(trans.shared, trans.added);

    std::vector<int> y_added(static_cast<std::size_t>(T));
    for (int c = 0; c < T; ++c)
        y_added[static_cast<std::size_t>(c)] = ds[trans.added[static_cast<std::size_t>(c)]].label;

    double shared_sum = 0.0;
    for (int id : trans.shared)
        shared_sum += ds[id].label * prev.alpha[static_cast<std::size_t>(prev_pos[static_cast<std::size_t>(id)])];
    res.constraint_residual = std::abs(shared_sum + sum_y_alpha(y_added, alpha_added));

    if (T > 0) {
        try {
            alpha_added = adjust_alpha_t(std::move(alpha_added), y_added, target, C);
        } catch (const FeasibilityError&) {
            // The added fold cannot carry the removed weight (e.g. all labels
            // flipped); restart the next round from scratch instead.
            SeedResult zero = seed_zero(trans, C);
            zero.strategy = Strategy::sir;
            zero.constraint_residual = res.constraint_residual;
            if (trace) *trace = SirTrace{};
            return zero;
        }
    }

    const std::vector<int> shared_pos = position_index(ds.size(), trans.shared);
    const std::vector<int> added_pos = position_index(ds.size(), trans.added);
    res.alpha.resize(res.ids.size());
    for (std::size_t i = 0; i < res.ids.size(); ++i) {
        const int id = res.ids[i];
        if (shared_pos[static_cast<std::size_t>(id)] >= 0)
            res.alpha[i] = prev.alpha[static_cast<std::size_t>(prev_pos[static_cast<std::size_t>(id)])];
        else
            res.alpha[i] = alpha_added[static_cast<std::size_t>(added_pos[static_cast<std::size_t>(id)])];
    }
    return res;
}

// ---------------------------------------------------------------------------
// AVG / TOP
// ---------------------------------------------------------------------------

namespace {

struct RemovedEntry {
    int id;
    int y;
    double alpha;
};

struct Remainder {
    std::vector<int> ids;
    std::vector<int> y;
    std::vector<double> alpha;
    std::vector<RemovedEntry> removed;
};

Remainder split_remainder(const SvmState& prev, std::span<const int> removed) {
    std::vector<int> rem_sorted(removed.begin(), removed.end());
    std::sort(rem_sorted.begin(), rem_sorted.end());
    if (std::adjacent_find(rem_sorted.begin(), rem_sorted.end()) != rem_sorted.end())
        throw IndexError("duplicate id in the removed set");

    Remainder st;
    for (int p = 0; p < prev.size(); ++p) {
        const int id = prev.ids[static_cast<std::size_t>(p)];
        if (std::binary_search(rem_sorted.begin(), rem_sorted.end(), id)) {
            st.removed.push_back({id, prev.y[static_cast<std::size_t>(p)], prev.alpha[static_cast<std::size_t>(p)]});
        } else {
            st.ids.push_back(id);
            st.y.push_back(prev.y[static_cast<std::size_t>(p)]);
            st.alpha.push_back(prev.alpha[static_cast<std::size_t>(p)]);
        }
    }
    if (st.removed.size() != rem_sorted.size())
        throw IndexError("a removed id is not part of the previous state");
    return st;
}

// Measures the residual left by the distribution loops, then water-fills the
// whole remainder back to feasibility.
SeedResult finish_remainder(Remainder st, Strategy tag, double C) {
    SeedResult res;
    res.strategy = tag;
    res.ids = std::move(st.ids);
    const double residual = sum_y_alpha(st.y, st.alpha);
    res.constraint_residual = std::abs(residual);
    const double tol = 1e-12 * C * static_cast<double>(std::max<std::size_t>(1, st.alpha.size()));
    if (std::abs(residual) > tol) st.alpha = adjust_alpha_t(std::move(st.alpha), st.y, 0.0, C);
    res.alpha = std::move(st.alpha);
    return res;
}

} // namespace

SeedResult seed_avg(const SvmState& prev, std::span<const int> removed, double C) {
    Remainder st = split_remainder(prev, removed);
    const int m = static_cast<int>(st.ids.size());
    const double tiny = 1e-15 * C * std::max(1, m);

    for (const RemovedEntry& rem : st.removed) {
        if (rem.alpha == 0.0) continue;
        double mass = rem.y * rem.alpha; // y*alpha to hand over to the remainder
        while (std::abs(mass) > tiny) {
            std::vector<int> free;
            for (int i = 0; i < m; ++i)
                if (st.alpha[static_cast<std::size_t>(i)] > 0.0 && st.alpha[static_cast<std::size_t>(i)] < C)
                    free.push_back(i);
            if (free.empty()) break; // leftover handled by the terminal correction
            const double share = mass / static_cast<double>(free.size());
            bool clamped = false;
            for (int i : free) {
                const auto ui = static_cast<std::size_t>(i);
                double next = st.alpha[ui] + st.y[ui] * share;
                if (next < 0.0) {
                    next = 0.0;
                    clamped = true;
                } else if (next > C) {
                    next = C;
                    clamped = true;
                }
                mass -= st.y[ui] * (next - st.alpha[ui]);
                st.alpha[ui] = next;
            }
            if (!clamped) break;
        }
    }
    return finish_remainder(std::move(st), Strategy::avg, C);
}

SeedResult seed_top(const SvmState& prev, std::span<const int> removed, const KernelEvaluator& kern) {
    const double C = prev.C;
    Remainder st = split_remainder(prev, removed);
    const int m = static_cast<int>(st.ids.size());
    const double tiny = 1e-15 * C * std::max(1, m);

    for (const RemovedEntry& rem : st.removed) {
        if (rem.alpha == 0.0) continue;
        auto row = kern.row(rem.id);
        std::vector<int> order(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double ka = (*row)[static_cast<std::size_t>(st.ids[static_cast<std::size_t>(a)])];
            const double kb = (*row)[static_cast<std::size_t>(st.ids[static_cast<std::size_t>(b)])];
            if (ka != kb) return ka > kb;
            return st.ids[static_cast<std::size_t>(a)] < st.ids[static_cast<std::size_t>(b)];
        });

        double mass = rem.y * rem.alpha;
        for (int i : order) {
            if (std::abs(mass) <= tiny) break;
            const auto ui = static_cast<std::size_t>(i);
            const double next = clamp_box(st.alpha[ui] + st.y[ui] * mass, C);
            mass -= st.y[ui] * (next - st.alpha[ui]);
            st.alpha[ui] = next;
        }
        // Exhausted ranking with leftover mass falls through to the terminal
        // correction in finish_remainder.
    }
    return finish_remainder(std::move(st), Strategy::top, C);
}

// ---------------------------------------------------------------------------
// Dispatcher
// ---------------------------------------------------------------------------

namespace {

SeedResult pad_with_added(SeedResult base, const FoldTransition& trans) {
    std::vector<int> ids = sorted_union(base.ids, trans.added);
    std::vector<double> alpha(ids.size(), 0.0);
    std::size_t bi = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (bi < base.ids.size() && base.ids[bi] == ids[i]) {
            alpha[i] = base.alpha[bi];
            ++bi;
        }
    }
    base.ids = std::move(ids);
    base.alpha = std::move(alpha);
    return base;
}

} // namespace

SeedResult seed(Strategy strategy, const SvmState* prev, const FoldTransition& trans,
                const KernelEvaluator& kern, const SeedingConfig& config, double C) {
    if (strategy == Strategy::zero || prev == nullptr) {
        SeedResult res = seed_zero(trans, C);
        res.strategy = strategy;
        res.init_seconds = 0.0; // the baseline has no seeding work by definition
        return res;
    }

    const auto t0 = Clock::now();
    SeedResult res;
    try {
        switch (strategy) {
        case Strategy::ato: res = seed_ato(*prev, trans, kern, config); break;
        case Strategy::mir: res = seed_mir(*prev, trans, kern); break;
        case Strategy::sir: res = seed_sir(*prev, trans, kern, config); break;
        case Strategy::avg: res = pad_with_added(seed_avg(*prev, trans.removed, prev->C), trans); break;
        case Strategy::top: res = pad_with_added(seed_top(*prev, trans.removed, kern), trans); break;
        case Strategy::zero: break; // handled above
        }
    } catch (const FeasibilityError&) {
        res = seed_zero(trans, C);
        res.strategy = strategy;
    }
    res.init_seconds = seconds_since(t0);
    return res;
}

} // namespace alphaseed
