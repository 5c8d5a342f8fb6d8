#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "sgs/payoff.hpp"
#include "sgs/split.hpp"

namespace sgs {

/// A pair of stationary deterministic strategies together with the outcome
/// statistic of the pair from every initial state. Solutions returned by
/// the solvers satisfy the saddle inequalities against every stationary
/// deterministic deviation, at every initial state.
struct Solution {
    DSStrategy max_strategy;
    DSStrategy min_strategy;
    std::vector<EvaluatedOutcome> values;
};

struct SolveOptions {
    /// Guard for strategy enumerations (pairs in the oracle, policies in
    /// one-player solving and in the simple-parity certification).
    Int max_profiles = Int(1000000);
    /// Choose the branch action by solving the frozen split MDP, as in the
    /// inductive construction, instead of taking the argmax of the branch
    /// values at the separation state. Both picks are optimal; the argmax
    /// avoids enumerating policies of the split arena and is the default.
    bool literal_branch_choice = false;
    /// Worker threads for the oracle's value table.
    int jobs = 1;
};

struct TraceEntry {
    int depth = 0;
    std::string kind;    // base | one-player | split | branch | memo
    int arena_size = 0;
    bool inductive = false;  // true for branch entries of the size induction
    std::string detail;
};

struct SolveStats {
    long subgames_solved = 0;
    long one_player_calls = 0;
    long memo_hits = 0;
};

struct SolveReport {
    std::optional<Solution> solution;
    std::string failure;
    std::vector<TraceEntry> trace;
    SolveStats stats;
};

struct SaddleWitness {
    int state = 0;
    Player player = Player::Max;  // who can improve
    DSStrategy deviation;
    EvaluatedOutcome base, improved;
};

/// Checks both saddle inequalities of the pair against every stationary
/// deterministic deviation at every initial state; empty result means the
/// pair is optimal within that class.
inline std::optional<SaddleWitness> verify_saddle(const Arena& a, const Preference& pref,
                                                  const DSStrategy& sigma,
                                                  const DSStrategy& tau) {
    std::vector<EvaluatedOutcome> base = evaluate_all(a, make_profile(sigma, tau), pref);
    DSEnumerator max_e(a, Player::Max);
    while (auto dev = max_e.next()) {
        std::vector<EvaluatedOutcome> got = evaluate_all(a, make_profile(*dev, tau), pref);
        for (int s = 0; s < a.num_states(); ++s) {
            Comparison c = compare(pref, got[s], base[s]);
            if (c == Comparison::Greater || c == Comparison::Incomparable)
                return SaddleWitness{s, Player::Max, *dev, base[s], got[s]};
        }
    }
    DSEnumerator min_e(a, Player::Min);
    while (auto dev = min_e.next()) {
        std::vector<EvaluatedOutcome> got = evaluate_all(a, make_profile(sigma, *dev), pref);
        for (int s = 0; s < a.num_states(); ++s) {
            Comparison c = compare(pref, base[s], got[s]);
            if (c == Comparison::Greater || c == Comparison::Incomparable)
                return SaddleWitness{s, Player::Min, *dev, base[s], got[s]};
        }
    }
    return std::nullopt;
}

namespace detail {

inline Profile owner_profile(const Arena& a, Player owner, const DSStrategy& own,
                             const DSStrategy& other) {
    if (owner == Player::Max) return make_profile(own, other);
    return make_profile(other, own);
}

/// better(candidate, incumbent) under the owner's direction.
inline bool improves(const Preference& pref, Player owner, const EvaluatedOutcome& cand,
                     const EvaluatedOutcome& incumbent) {
    Comparison c = compare(pref, cand, incumbent);
    if (c == Comparison::Incomparable)
        throw PreferenceNotTotalEnoughError(
            "preference " + payoff_name(pref) +
            " cannot rank two outcomes needed by the solver: " + outcome_to_string(cand) +
            " vs " + outcome_to_string(incumbent));
    return owner == Player::Max ? c == Comparison::Greater : c == Comparison::Less;
}

/// The arena on (state, running max priority) pairs, priorities replaced by
/// the running max. The simple parity objective of the original arena is
/// the plain parity objective here, which is positionally solvable; it is
/// the exact certificate used to detect that no stationary strategy is
/// optimal for stochastic simple parity.
inline Arena running_max_arena(const Arena& a, std::vector<int>& start_of_state) {
    std::vector<std::pair<int, int>> nodes;  // (state, max)
    std::map<std::pair<int, int>, int> index;
    auto intern = [&](int s, int m) {
        auto [it, fresh] = index.try_emplace({s, m}, static_cast<int>(nodes.size()));
        if (fresh) nodes.emplace_back(s, m);
        return it->second;
    };
    start_of_state.assign(a.num_states(), -1);
    for (int s = 0; s < a.num_states(); ++s) start_of_state[s] = intern(s, a.priority(s));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [s, m] = nodes[i];
        for (const Transition& t : a.transitions())
            if (t.from == s) intern(t.to, std::max(m, a.priority(t.to)));
    }
    std::vector<std::string> names;
    std::vector<Player> owners;
    std::vector<int> prios;
    for (auto [s, m] : nodes) {
        names.push_back(a.state_name(s) + "@" + std::to_string(m));
        owners.push_back(a.owner(s));
        prios.push_back(m);
    }
    std::vector<Transition> ts;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [s, m] = nodes[i];
        for (const Transition& t : a.transitions())
            if (t.from == s)
                ts.push_back({static_cast<int>(i), t.action,
                              index.at({t.to, std::max(m, a.priority(t.to))}), t.prob,
                              t.reward});
    }
    return Arena(std::move(names), std::move(owners), a.action_names(), std::move(ts),
                 std::move(prios));
}

struct OnePlayerResult {
    DSStrategy strategy;
    std::vector<EvaluatedOutcome> values;  // of (strategy, forced opponent)
};

inline OnePlayerResult one_player_enumerate(const Arena& a, Player owner,
                                            const Preference& pref, const Int& bound) {
    const DSStrategy other = forced_strategy(a, opponent(owner));
    DSEnumerator en(a, owner);
    if (en.count() > bound)
        throw EnumerationBoundError("one-player enumeration exceeds " + bound.str() +
                                    " strategies");
    std::vector<DSStrategy> all;
    std::vector<std::vector<EvaluatedOutcome>> vals;
    while (auto ds = en.next()) {
        vals.push_back(evaluate_all(a, owner_profile(a, owner, *ds, other), pref));
        all.push_back(std::move(*ds));
    }
    // per-state optimum over all strategies of the owner
    std::vector<EvaluatedOutcome> best = vals[0];
    for (std::size_t i = 1; i < all.size(); ++i)
        for (int s = 0; s < a.num_states(); ++s)
            if (improves(pref, owner, vals[i][s], best[s])) best[s] = vals[i][s];
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool uniform = true;
        for (int s = 0; s < a.num_states() && uniform; ++s)
            uniform = compare(pref, vals[i][s], best[s]) == Comparison::Equal;
        if (uniform) return {all[i], vals[i]};
    }
    throw NoUniformOptimumError(
        "no deterministic stationary strategy of " + std::string(player_name(owner)) +
        " is optimal from every state simultaneously");
}

}  // namespace detail

/// Solves a one-player arena by policy enumeration: returns the
/// lexicographically first stationary deterministic strategy that is
/// optimal among such strategies from every initial state.
///
/// Optimality among all strategies follows for payoffs whose one-player
/// games are known to be positional (mean, parity, discounted). Simple
/// parity is not positional on stochastic arenas; for it the result is
/// certified against the running-max reduction and NoUniformOptimum is
/// raised when memory strictly improves on every stationary strategy.
inline DSStrategy one_player_solve(const Arena& a, Player owner, const Preference& pref,
                                   const SolveOptions& opts = {}) {
    ControlKind kind = control_kind(a);
    if (kind == ControlKind::TwoPlayer)
        throw Error("one_player_solve needs a one-player arena");
    if ((kind == ControlKind::MaxControlled && owner != Player::Max) ||
        (kind == ControlKind::MinControlled && owner != Player::Min))
        throw Error("arena is not controlled by " + std::string(player_name(owner)));
    detail::OnePlayerResult r = detail::one_player_enumerate(a, owner, pref, opts.max_profiles);
    if (pref.tag == PayoffTag::SimpleParity) {
        std::vector<int> start;
        Arena aug = detail::running_max_arena(a, start);
        if (DSEnumerator(aug, owner).count() <= opts.max_profiles) {
            detail::OnePlayerResult exact =
                detail::one_player_enumerate(aug, owner, Preference::parity(), opts.max_profiles);
            for (int s = 0; s < a.num_states(); ++s) {
                const Q& truth = exact.values[start[s]].value;
                const Q& got = r.values[s].value;
                bool beaten = owner == Player::Max ? truth > got : truth < got;
                if (beaten)
                    throw NoUniformOptimumError(
                        "no stationary strategy is optimal: from state " + a.state_name(s) +
                        " the best stationary value is " + to_string(got) +
                        " but a finite-memory strategy achieves " + to_string(truth));
            }
        }
    }
    return r.strategy;
}

namespace detail {

class TwoPlayerSolver {
public:
    TwoPlayerSolver(const Preference& pref, const SolveOptions& opts, SolveReport& report)
        : pref_(pref), opts_(opts), report_(report) {}

    Solution solve(const Arena& a, int depth, bool inductive) {
        const std::string key = a.canonical_key();
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) {
                ++report_.stats.memo_hits;
                trace(depth, "memo", size(a), inductive, "");
                return it->second;
            }
        }
        ++report_.stats.subgames_solved;
        Solution sol;
        switch (control_kind(a)) {
            case ControlKind::NoChoice: {
                trace(depth, "base", 0, inductive, "unique profile");
                sol.max_strategy = forced_strategy(a, Player::Max);
                sol.min_strategy = forced_strategy(a, Player::Min);
                break;
            }
            case ControlKind::MaxControlled: {
                trace(depth, "one-player", size(a), inductive, "Max decision process");
                ++report_.stats.one_player_calls;
                sol.max_strategy = one_player_solve(a, Player::Max, pref_, opts_);
                sol.min_strategy = forced_strategy(a, Player::Min);
                break;
            }
            case ControlKind::MinControlled: {
                trace(depth, "one-player", size(a), inductive, "Min decision process");
                ++report_.stats.one_player_calls;
                sol.min_strategy = one_player_solve(a, Player::Min, pref_, opts_);
                sol.max_strategy = forced_strategy(a, Player::Max);
                break;
            }
            case ControlKind::TwoPlayer: {
                sol.max_strategy = side_pass(a, Player::Max, depth);
                sol.min_strategy = side_pass(a, Player::Min, depth);
                break;
            }
        }
        sol.values = evaluate_all(a, make_profile(sol.max_strategy, sol.min_strategy), pref_);
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(key, sol);
        return sol;
    }

private:
    /// One inductive pass: split on a separation state of `who`, solve the
    /// action-restricted subgames, assemble the opponent's strategy on the
    /// split from the per-copy optima, pick the branch action, and project
    /// the extended strategy back. Returns who's optimal stationary
    /// strategy on `a`.
    DSStrategy side_pass(const Arena& a, Player who, int depth) {
        int omega = -1;
        for (int s = 0; s < a.num_states() && omega < 0; ++s)
            if (a.owner(s) == who && a.available_actions(s).size() >= 2) omega = s;
        if (omega < 0) throw Error("internal: no separation state for " +
                                   std::string(player_name(who)));
        trace(depth, "split", size(a), false,
              std::string(player_name(who)) + " pass, separation state " +
                  a.state_name(omega));

        const auto& actions = a.available_actions(omega);
        std::vector<Solution> branch;
        for (int x : actions) {
            Arena gx = restrict_action(a, omega, x);
            trace(depth + 1, "branch", size(gx), true,
                  a.state_name(omega) + " -> " + a.action_name(x));
            branch.push_back(solve(gx, depth + 1, true));
        }

        SplitResult sr = split(a, omega);
        Player opp = opponent(who);

        // opponent's strategy on the split: per copy, the branch optimum
        DSStrategy opp_hat;
        opp_hat.owner = opp;
        opp_hat.choice.assign(sr.split_arena.num_states(), -1);
        for (int i = 0; i < sr.split_arena.num_states(); ++i) {
            if (sr.split_arena.owner(i) != opp || i == sr.omega_split) continue;
            const Solution& bs = branch[sr.copy_pos_[sr.copy_index[i]]];
            const DSStrategy& ds = opp == Player::Max ? bs.max_strategy : bs.min_strategy;
            opp_hat.choice[i] = ds.choice[sr.projection[i]];
        }

        int e;
        if (opts_.literal_branch_choice) {
            // freeze the opponent in the split and solve the resulting
            // one-player game; the branch action is its choice at ω
            std::vector<TransitionKey> keep;
            for (const Transition& t : sr.split_arena.transitions())
                if (sr.split_arena.owner(t.from) != opp || t.action == opp_hat.choice[t.from])
                    keep.push_back({t.from, t.action, t.to});
            Arena frozen = subarena(sr.split_arena, keep);
            ++report_.stats.one_player_calls;
            DSStrategy zeta = one_player_solve(frozen, who, pref_, opts_);
            e = zeta.choice[sr.omega_split];
        } else {
            // equivalent pick: the branch whose subgame value at ω is best
            // for `who`; committing to it forever is an optimal choice of
            // the frozen split game by the separation property
            std::size_t best = 0;
            for (std::size_t i = 1; i < branch.size(); ++i)
                if (detail::improves(pref_, who, branch[i].values[omega],
                                     branch[best].values[omega]))
                    best = i;
            e = actions[best];
        }

        const Solution& se = branch[sr.copy_pos_[e]];
        const DSStrategy& own_e = who == Player::Max ? se.max_strategy : se.min_strategy;
        DSStrategy extended = extend_from_copy(sr, lift_ds_to_copy(sr, own_e, e), e);
        Strategy projected = project_strategy(sr, e, extended);
        if (!is_ds(projected))
            throw Error("internal: projection of the extended strategy is not stationary");
        return std::get<DSStrategy>(projected);
    }

    void trace(int depth, const char* kind, int sz, bool inductive, std::string detail) {
        report_.trace.push_back({depth, kind, sz, inductive, std::move(detail)});
    }

    Preference pref_;
    SolveOptions opts_;
    SolveReport& report_;
    std::map<std::string, Solution> memo_;
    std::mutex mu_;
};

}  // namespace detail

/// The recursive two-player solver: induction on the arena size, splitting
/// on a separation state of each player in turn and combining the two
/// passes, which is valid because optimal pairs exchange. The two expected
/// failure modes end up in the report; everything else propagates.
inline SolveReport solve_two_player(const Arena& a, const Preference& pref,
                                    const SolveOptions& opts = {}) {
    validate(a);
    SolveReport report;
    detail::TwoPlayerSolver solver(pref, opts, report);
    try {
        report.solution = solver.solve(a, 0, false);
    } catch (const NoUniformOptimumError& e) {
        report.failure = std::string("NoUniformOptimum: ") + e.what();
    } catch (const PreferenceNotTotalEnoughError& e) {
        report.failure = std::string("PreferenceNotTotalEnough: ") + e.what();
    }
    return report;
}

/// Throwing variant of solve_two_player.
inline Solution two_player_solve(const Arena& a, const Preference& pref,
                                 const SolveOptions& opts = {}) {
    validate(a);
    SolveReport report;
    detail::TwoPlayerSolver solver(pref, opts, report);
    return solver.solve(a, 0, false);
}

/// Exhaustive saddle search over all pairs of stationary deterministic
/// strategies; returns the lexicographically first pair such that no
/// deviation of either player improves its side from any initial state.
inline Solution brute_force_saddle(const Arena& a, const Preference& pref,
                                   const SolveOptions& opts = {}) {
    validate(a);
    std::vector<DSStrategy> maxs = all_ds_strategies(a, Player::Max);
    std::vector<DSStrategy> mins = all_ds_strategies(a, Player::Min);
    const std::size_t n = maxs.size(), m = mins.size();
    if (Int(n) * Int(m) > opts.max_profiles)
        throw EnumerationBoundError("profile enumeration exceeds " + opts.max_profiles.str() +
                                    " pairs (" + std::to_string(n) + " x " + std::to_string(m) +
                                    ")");
    std::vector<std::vector<std::vector<EvaluatedOutcome>>> val(
        n, std::vector<std::vector<EvaluatedOutcome>>(m));
    auto fill_rows = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < m; ++j)
                val[i][j] = evaluate_all(a, make_profile(maxs[i], mins[j]), pref);
    };
    int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || n < 2) {
        fill_rows(0, n);
    } else {
        std::vector<std::thread> workers;
        std::size_t chunk = (n + jobs - 1) / jobs;
        for (int w = 0; w < jobs; ++w) {
            std::size_t lo = std::min(n, w * chunk), hi = std::min(n, (w + 1) * chunk);
            if (lo < hi) workers.emplace_back(fill_rows, lo, hi);
        }
        for (auto& t : workers) t.join();
    }

    auto leq = [&](const EvaluatedOutcome& x, const EvaluatedOutcome& y) {
        Comparison c = compare(pref, x, y);
        return c == Comparison::Less || c == Comparison::Equal;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            bool saddle = true;
            for (int s = 0; s < a.num_states() && saddle; ++s) {
                for (std::size_t i2 = 0; i2 < n && saddle; ++i2)
                    saddle = leq(val[i2][j][s], val[i][j][s]);
                for (std::size_t j2 = 0; j2 < m && saddle; ++j2)
                    saddle = leq(val[i][j][s], val[i][j2][s]);
            }
            if (saddle) return Solution{maxs[i], mins[j], val[i][j]};
        }
    }
    throw NoSaddleError("no pair of deterministic stationary strategies is optimal under " +
                        payoff_name(pref));
}

/// Structured text rendering of a solve result; byte-stable across runs.
inline std::string render_solution(const Arena& a, const Preference& pref,
                                   const Solution& sol) {
    std::ostringstream out;
    out << "payoff: " << payoff_name(pref) << "\n";
    for (int s = 0; s < a.num_states(); ++s)
        out << "value[" << a.state_name(s) << "] = " << outcome_to_string(sol.values[s])
            << "\n";
    out << "max strategy:\n";
    for (int s = 0; s < a.num_states(); ++s)
        if (a.owner(s) == Player::Max)
            out << "  " << a.state_name(s) << " -> " << a.action_name(sol.max_strategy.choice[s])
                << "\n";
    out << "min strategy:\n";
    for (int s = 0; s < a.num_states(); ++s)
        if (a.owner(s) == Player::Min)
            out << "  " << a.state_name(s) << " -> " << a.action_name(sol.min_strategy.choice[s])
                << "\n";
    return out.str();
}

inline std::string render_trace(const SolveReport& report) {
    std::ostringstream out;
    out << "trace:\n";
    for (const TraceEntry& t : report.trace) {
        out << " ";
        for (int i = 0; i < t.depth; ++i) out << "  ";
        out << t.kind << " size=" << t.arena_size;
        if (!t.detail.empty()) out << " " << t.detail;
        out << "\n";
    }
    out << "stats: subgames=" << report.stats.subgames_solved
        << " one-player=" << report.stats.one_player_calls
        << " memo-hits=" << report.stats.memo_hits << "\n";
    return out.str();
}

}  // namespace sgs
