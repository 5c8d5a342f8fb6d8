#pragma once

#include <string>
#include <vector>

#include "sgs/arena.hpp"
#include "sgs/strategy.hpp"

namespace sgs {

/// Split of an arena on a separation state ω. States of the split are ω
/// plus one copy (s, x) of every other state per action x available at ω;
/// the copy component records the last action chosen at ω. ω itself is its
/// own single copy (every ω_x aliases ω).
struct SplitResult {
    Arena original;
    Arena split_arena;
    int separation_state;  // index in the original arena
    int omega_split;       // index of ω in the split arena (always 0)
    std::vector<int> projection;   // split state -> original state (π)
    std::vector<int> copy_index;   // split state -> copy action x, -1 at ω
    std::vector<int> tr_projection;  // split transition -> original transition

    /// The split state (s, x); maps ω to ω for every x.
    int copy_of(int orig_state, int x) const {
        if (orig_state == separation_state) return omega_split;
        return copy_lookup_.at(orig_state).at(copy_pos_.at(x));
    }
    const std::vector<int>& omega_actions() const { return omega_actions_; }

    // filled by split()
    std::vector<std::vector<int>> copy_lookup_;  // [orig state][position of x] -> split state
    std::vector<int> copy_pos_;                  // action -> position in omega_actions_
    std::vector<int> omega_actions_;
};

inline SplitResult split(const Arena& a, int omega) {
    if (omega < 0 || omega >= a.num_states())
        throw UnknownStateError("index " + std::to_string(omega));
    SplitResult sr{a, a, omega, 0, {}, {}, {}};
    sr.omega_actions_ = a.available_actions(omega);
    sr.copy_pos_.assign(a.num_actions(), -1);
    for (std::size_t i = 0; i < sr.omega_actions_.size(); ++i)
        sr.copy_pos_[sr.omega_actions_[i]] = static_cast<int>(i);

    std::vector<std::string> names{a.state_name(omega)};
    sr.projection = {omega};
    sr.copy_index = {-1};
    sr.copy_lookup_.assign(a.num_states(), std::vector<int>(sr.omega_actions_.size(), 0));
    for (int x : sr.omega_actions_) {
        for (int s = 0; s < a.num_states(); ++s) {
            if (s == omega) continue;
            sr.copy_lookup_[s][sr.copy_pos_[x]] = static_cast<int>(names.size());
            names.push_back(a.state_name(s) + "_" + a.action_name(x));
            sr.projection.push_back(s);
            sr.copy_index.push_back(x);
        }
    }

    std::vector<Player> owners(names.size());
    std::vector<int> prios;
    if (a.has_priorities()) prios.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        owners[i] = a.owner(sr.projection[i]);
        if (a.has_priorities()) prios[i] = a.priority(sr.projection[i]);
    }

    std::vector<Transition> ts;
    std::vector<int> tr_orig;
    for (int i = 0; i < a.num_transitions(); ++i) {
        const Transition& t = a.transition(i);
        if (t.from == omega) {
            ts.push_back({0, t.action, sr.copy_of(t.to, t.action), t.prob, t.reward});
            tr_orig.push_back(i);
        } else {
            for (int x : sr.omega_actions_) {
                ts.push_back({sr.copy_of(t.from, x), t.action, sr.copy_of(t.to, x), t.prob,
                              t.reward});
                tr_orig.push_back(i);
            }
        }
    }
    // re-sort alongside the arena's canonical transition order
    std::vector<std::size_t> perm(ts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
        return std::tie(ts[x].from, ts[x].action, ts[x].to) <
               std::tie(ts[y].from, ts[y].action, ts[y].to);
    });
    std::vector<Transition> sorted;
    sr.tr_projection.resize(ts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        sorted.push_back(ts[perm[i]]);
        sr.tr_projection[i] = tr_orig[perm[i]];
    }
    sr.split_arena = Arena(std::move(names), std::move(owners), a.action_names(),
                           std::move(sorted), std::move(prios));
    return sr;
}

/// π on histories: apply the state projection, keep the actions.
inline History project_history(const SplitResult& sr, const History& h) {
    if (!is_valid_history(sr.split_arena, h))
        throw InvalidHistoryError("not a history of the split arena");
    History out;
    out.actions = h.actions;
    out.states.reserve(h.states.size());
    for (int s : h.states) out.states.push_back(sr.projection[s]);
    return out;
}

/// φ_x: the unique history of the split over h that starts in copy x.
/// The copy component changes exactly when the history leaves ω, to the
/// action that was just played there.
inline History lift_history(const SplitResult& sr, int x, const History& h) {
    if (sr.copy_pos_.at(x) < 0)
        throw UnavailableActionError(sr.separation_state, x, "not available at the separation state");
    if (!is_valid_history(sr.original, h))
        throw InvalidHistoryError("not a history of the original arena");
    History out;
    out.actions = h.actions;
    out.states.push_back(sr.copy_of(h.states[0], x));
    int copy = x;
    for (std::size_t i = 0; i < h.actions.size(); ++i) {
        if (h.states[i] == sr.separation_state) copy = h.actions[i];
        out.states.push_back(sr.copy_of(h.states[i + 1], copy));
    }
    return out;
}

/// Π(σ) = σ ∘ π. Stationary strategies stay stationary; finite-memory
/// strategies keep their memory set, with updates composed with π.
inline Strategy lift_strategy(const SplitResult& sr, const Strategy& s) {
    const Arena& sp = sr.split_arena;
    if (is_ds(s)) {
        const DSStrategy& ds = std::get<DSStrategy>(s);
        DSStrategy out;
        out.owner = ds.owner;
        out.choice.assign(sp.num_states(), -1);
        for (int i = 0; i < sp.num_states(); ++i)
            if (sp.owner(i) == ds.owner) out.choice[i] = ds.choice[sr.projection[i]];
        return out;
    }
    const FMStrategy& f = std::get<FMStrategy>(s);
    FMStrategy out;
    out.owner = f.owner;
    out.memory_size = f.memory_size;
    out.initial = f.initial;
    out.choice.assign(f.memory_size, std::vector<int>(sp.num_states(), -1));
    out.update.assign(f.memory_size, std::vector<int>(sp.num_transitions(), 0));
    for (int m = 0; m < f.memory_size; ++m) {
        for (int i = 0; i < sp.num_states(); ++i)
            if (sp.owner(i) == f.owner) out.choice[m][i] = f.choice[m][sr.projection[i]];
        for (int i = 0; i < sp.num_transitions(); ++i)
            out.update[m][i] = f.update[m][sr.tr_projection[i]];
    }
    return out;
}

/// Φ_x(σ̂) = σ̂ ∘ φ_x. When σ̂ is stationary and chooses x at ω the result
/// is stationary again; otherwise it needs exactly the copy component as
/// memory (last action chosen at ω, initialized to x).
inline Strategy project_strategy(const SplitResult& sr, int x, const Strategy& s_hat) {
    if (sr.copy_pos_.at(x) < 0)
        throw UnavailableActionError(sr.separation_state, x, "not available at the separation state");
    const Arena& orig = sr.original;
    const Arena& sp = sr.split_arena;
    Player owner = strategy_owner(s_hat);
    bool owns_omega = orig.owner(sr.separation_state) == owner;
    if (is_ds(s_hat)) {
        const DSStrategy& ds = std::get<DSStrategy>(s_hat);
        if (owns_omega && ds.choice[sr.omega_split] == x) {
            DSStrategy out;
            out.owner = owner;
            out.choice.assign(orig.num_states(), -1);
            for (int s = 0; s < orig.num_states(); ++s)
                if (orig.owner(s) == owner) out.choice[s] = ds.choice[sr.copy_of(s, x)];
            return out;
        }
    }
    FMStrategy f = as_fm(sp, s_hat);
    int copies = static_cast<int>(sr.omega_actions_.size());
    FMStrategy out;
    out.owner = owner;
    out.memory_size = f.memory_size * copies;
    out.initial = f.initial * copies + sr.copy_pos_[x];
    out.choice.assign(out.memory_size, std::vector<int>(orig.num_states(), -1));
    out.update.assign(out.memory_size, std::vector<int>(orig.num_transitions(), 0));
    for (int m = 0; m < f.memory_size; ++m) {
        for (int ci = 0; ci < copies; ++ci) {
            int mem = m * copies + ci;
            int y = sr.omega_actions_[ci];
            for (int s = 0; s < orig.num_states(); ++s)
                if (orig.owner(s) == owner) out.choice[mem][s] = f.choice[m][sr.copy_of(s, y)];
            for (int i = 0; i < orig.num_transitions(); ++i) {
                const Transition& t = orig.transition(i);
                int y2 = t.from == sr.separation_state ? t.action : y;
                auto ti = sp.transition_index(sr.copy_of(t.from, y), t.action,
                                              sr.copy_of(t.to, y2));
                if (!ti) throw Error("internal: lifted transition missing from the split");
                out.update[mem][i] = f.update[m][*ti] * copies + sr.copy_pos_[y2];
            }
        }
    }
    return out;
}

/// Extension of a stationary strategy given on the copy-e part of the split
/// (plus ω) to all copies: the same value at every copy of a state, e at ω.
inline DSStrategy extend_from_copy(const SplitResult& sr, const DSStrategy& sigma_e, int e) {
    if (sr.copy_pos_.at(e) < 0)
        throw UnavailableActionError(sr.separation_state, e, "not available at the separation state");
    const Arena& sp = sr.split_arena;
    DSStrategy out;
    out.owner = sigma_e.owner;
    out.choice.assign(sp.num_states(), -1);
    for (int i = 0; i < sp.num_states(); ++i) {
        if (sp.owner(i) != sigma_e.owner) continue;
        if (i == sr.omega_split)
            out.choice[i] = e;
        else
            out.choice[i] = sigma_e.choice[sr.copy_of(sr.projection[i], e)];
    }
    return out;
}

/// A stationary strategy of the original arena moved onto the copy-x part
/// of the split; input for extend_from_copy.
inline DSStrategy lift_ds_to_copy(const SplitResult& sr, const DSStrategy& ds, int x) {
    const Arena& sp = sr.split_arena;
    DSStrategy out;
    out.owner = ds.owner;
    out.choice.assign(sp.num_states(), -1);
    for (int s = 0; s < sr.original.num_states(); ++s) {
        if (sr.original.owner(s) != ds.owner) continue;
        out.choice[sr.copy_of(s, x)] = ds.choice[s];
    }
    return out;
}

/// The branch arena of copy x: ω limited to x, together with the copy-x
/// states; the remaining copies are dropped as unreachable dead weight.
/// Isomorphic to the original arena with ω restricted to x.
inline Arena split_branch_arena(const SplitResult& sr, int x) {
    if (sr.copy_pos_.at(x) < 0)
        throw UnavailableActionError(sr.separation_state, x, "not available at the separation state");
    const Arena& sp = sr.split_arena;
    std::vector<int> keep_states;  // split indices, ω first
    std::vector<int> back(sp.num_states(), -1);
    keep_states.push_back(sr.omega_split);
    for (int i = 0; i < sp.num_states(); ++i)
        if (sr.copy_index[i] == x) keep_states.push_back(i);
    for (std::size_t i = 0; i < keep_states.size(); ++i) back[keep_states[i]] = static_cast<int>(i);

    std::vector<std::string> names;
    std::vector<Player> owners;
    std::vector<int> prios;
    for (int i : keep_states) {
        names.push_back(sp.state_name(i));
        owners.push_back(sp.owner(i));
        if (sp.has_priorities()) prios.push_back(sp.priority(i));
    }
    std::vector<Transition> ts;
    for (const Transition& t : sp.transitions()) {
        if (t.from == sr.omega_split && t.action != x) continue;
        if (back[t.from] < 0 || back[t.to] < 0) continue;
        ts.push_back({back[t.from], t.action, back[t.to], t.prob, t.reward});
    }
    return Arena(std::move(names), std::move(owners), sp.action_names(), std::move(ts),
                 std::move(prios));
}

/// Exhaustive check of the separation property: with ω removed from the
/// state graph, no walk connects two different copies. A violation would
/// mean split() is broken.
inline void check_separation(const SplitResult& sr) {
    const Arena& sp = sr.split_arena;
    int n = sp.num_states();
    for (int start = 0; start < n; ++start) {
        if (start == sr.omega_split) continue;
        std::vector<int> parent(n, -2);
        std::vector<int> stack{start};
        parent[start] = -1;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            if (sr.copy_index[s] != sr.copy_index[start]) {
                std::vector<int> path;
                for (int v = s; v != -1; v = parent[v]) path.push_back(v);
                std::reverse(path.begin(), path.end());
                std::string what = "separation violated:";
                for (int v : path) what += " " + sp.state_name(v);
                throw SeparationViolatedError(what, path);
            }
            for (const Transition& t : sp.transitions()) {
                if (t.from != s || t.to == sr.omega_split) continue;
                if (parent[t.to] == -2) {
                    parent[t.to] = s;
                    stack.push_back(t.to);
                }
            }
        }
    }
}

}  // namespace sgs
