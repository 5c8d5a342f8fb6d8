#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sgs/arena.hpp"

namespace sgs {

/// Deterministic stationary strategy: one action per owned state.
/// choice is indexed by state; -1 marks states of the other player.
struct DSStrategy {
    Player owner = Player::Max;
    std::vector<int> choice;

    friend bool operator==(const DSStrategy&, const DSStrategy&) = default;
};

/// Deterministic finite-memory strategy. The memory is updated on every
/// observed transition (indexed by the arena's transition list) and the
/// action depends on (memory, current state).
struct FMStrategy {
    Player owner = Player::Max;
    int memory_size = 1;
    int initial = 0;
    std::vector<std::vector<int>> choice;  // [memory][state] -> action, -1 if not owned
    std::vector<std::vector<int>> update;  // [memory][transition index] -> memory

    friend bool operator==(const FMStrategy&, const FMStrategy&) = default;
};

using Strategy = std::variant<DSStrategy, FMStrategy>;

inline Player strategy_owner(const Strategy& s) {
    return std::visit([](const auto& x) { return x.owner; }, s);
}
inline bool is_ds(const Strategy& s) { return std::holds_alternative<DSStrategy>(s); }

inline FMStrategy as_fm(const Arena& a, const DSStrategy& ds) {
    FMStrategy f;
    f.owner = ds.owner;
    f.memory_size = 1;
    f.initial = 0;
    f.choice = {ds.choice};
    f.choice[0].resize(a.num_states(), -1);
    f.update = {std::vector<int>(a.num_transitions(), 0)};
    return f;
}
inline FMStrategy as_fm(const Arena& a, const Strategy& s) {
    if (is_ds(s)) return as_fm(a, std::get<DSStrategy>(s));
    return std::get<FMStrategy>(s);
}

inline void validate_strategy(const Arena& a, const DSStrategy& ds) {
    if (static_cast<int>(ds.choice.size()) != a.num_states())
        throw Error("strategy choice table does not match the state set");
    for (int s = 0; s < a.num_states(); ++s) {
        if (a.owner(s) != ds.owner) continue;
        if (ds.choice[s] < 0 || !a.has_action(s, ds.choice[s]))
            throw UnavailableActionError(s, ds.choice[s],
                                         a.state_name(s) + " (strategy choice)");
    }
}

inline void validate_strategy(const Arena& a, const FMStrategy& f) {
    if (f.memory_size <= 0 || f.initial < 0 || f.initial >= f.memory_size)
        throw Error("bad memory set");
    if (static_cast<int>(f.choice.size()) != f.memory_size ||
        static_cast<int>(f.update.size()) != f.memory_size)
        throw Error("memory tables do not match the memory size");
    for (int m = 0; m < f.memory_size; ++m) {
        if (static_cast<int>(f.choice[m].size()) != a.num_states())
            throw Error("choice table does not match the state set");
        if (static_cast<int>(f.update[m].size()) != a.num_transitions())
            throw Error("update table does not match the transition set");
        for (int s = 0; s < a.num_states(); ++s) {
            if (a.owner(s) != f.owner) continue;
            if (f.choice[m][s] < 0 || !a.has_action(s, f.choice[m][s]))
                throw UnavailableActionError(s, f.choice[m][s],
                                             a.state_name(s) + " (strategy choice)");
        }
        for (int i = 0; i < a.num_transitions(); ++i)
            if (f.update[m][i] < 0 || f.update[m][i] >= f.memory_size)
                throw Error("memory update out of range");
    }
}

inline void validate_strategy(const Arena& a, const Strategy& s) {
    std::visit([&](const auto& x) { validate_strategy(a, x); }, s);
}

/// The action the strategy prescribes at `state` under memory `mem`.
inline int prescribed_action(const Strategy& s, int state, int mem = 0) {
    if (is_ds(s)) return std::get<DSStrategy>(s).choice[state];
    return std::get<FMStrategy>(s).choice[mem][state];
}

struct Profile {
    Strategy max_strategy;
    Strategy min_strategy;
};

inline Profile make_profile(Strategy max_s, Strategy min_s) {
    if (strategy_owner(max_s) != Player::Max || strategy_owner(min_s) != Player::Min)
        throw Error("profile sides have wrong owners");
    return Profile{std::move(max_s), std::move(min_s)};
}

inline void validate_profile(const Arena& a, const Profile& p) {
    if (strategy_owner(p.max_strategy) != Player::Max ||
        strategy_owner(p.min_strategy) != Player::Min)
        throw Error("profile sides have wrong owners");
    validate_strategy(a, p.max_strategy);
    validate_strategy(a, p.min_strategy);
}

/// Streams every deterministic stationary strategy of `owner`, each exactly
/// once, ascending in the lexicographic order of per-state choices (states
/// by index, actions by index; the last owned state varies fastest).
class DSEnumerator {
public:
    DSEnumerator(const Arena& a, Player owner) : arena_(&a), owner_(owner) {
        for (int s = 0; s < a.num_states(); ++s)
            if (a.owner(s) == owner) owned_.push_back(s);
        reset();
    }

    void reset() {
        digits_.assign(owned_.size(), 0);
        done_ = false;
    }

    /// Number of strategies = product of |A(s)| over owned states.
    Int count() const {
        Int c(1);
        for (int s : owned_) c *= static_cast<int>(arena_->available_actions(s).size());
        return c;
    }

    std::optional<DSStrategy> next() {
        if (done_) return std::nullopt;
        DSStrategy ds;
        ds.owner = owner_;
        ds.choice.assign(arena_->num_states(), -1);
        for (std::size_t i = 0; i < owned_.size(); ++i)
            ds.choice[owned_[i]] = arena_->available_actions(owned_[i])[digits_[i]];
        // odometer step, last owned state fastest
        done_ = true;
        for (int i = static_cast<int>(owned_.size()) - 1; i >= 0; --i) {
            int limit = static_cast<int>(arena_->available_actions(owned_[i]).size());
            if (digits_[i] + 1 < limit) {
                ++digits_[i];
                std::fill(digits_.begin() + i + 1, digits_.end(), 0);
                done_ = false;
                break;
            }
        }
        return ds;
    }

private:
    const Arena* arena_;
    Player owner_;
    std::vector<int> owned_;
    std::vector<std::size_t> digits_;
    bool done_ = false;
};

inline std::vector<DSStrategy> all_ds_strategies(const Arena& a, Player owner) {
    DSEnumerator e(a, owner);
    std::vector<DSStrategy> out;
    while (auto s = e.next()) out.push_back(std::move(*s));
    return out;
}

/// The unique strategy of a player none of whose states offer a choice.
inline DSStrategy forced_strategy(const Arena& a, Player owner) {
    DSStrategy ds;
    ds.owner = owner;
    ds.choice.assign(a.num_states(), -1);
    for (int s = 0; s < a.num_states(); ++s) {
        if (a.owner(s) != owner) continue;
        const auto& av = a.available_actions(s);
        if (av.size() != 1)
            throw Error("state " + a.state_name(s) + " offers a choice; strategy not forced");
        ds.choice[s] = av[0];
    }
    return ds;
}

/// Restriction of a strategy of `original` to a subarena. Fails with the
/// offending (state, action) when a prescribed action was removed.
inline Strategy restrict_to_subarena(const Arena& original, const Strategy& s,
                                     const Arena& sub) {
    if (is_ds(s)) {
        DSStrategy ds = std::get<DSStrategy>(s);
        for (int st = 0; st < sub.num_states(); ++st) {
            if (sub.owner(st) != ds.owner) continue;
            if (!sub.has_action(st, ds.choice[st]))
                throw IncompatibleStrategyError(
                    st, ds.choice[st],
                    sub.state_name(st) + " -> " + sub.action_name(ds.choice[st]));
        }
        return ds;
    }
    const FMStrategy& f = std::get<FMStrategy>(s);
    FMStrategy out = f;
    out.update.assign(f.memory_size, std::vector<int>(sub.num_transitions(), 0));
    for (int i = 0; i < sub.num_transitions(); ++i) {
        const Transition& t = sub.transition(i);
        auto oi = original.transition_index(t.from, t.action, t.to);
        if (!oi) throw Error("subarena transition missing from the original arena");
        for (int m = 0; m < f.memory_size; ++m) out.update[m][i] = f.update[m][*oi];
    }
    // every (memory, state) pair reachable along histories of the subarena
    // must still prescribe an available action
    std::vector<std::vector<bool>> seen(f.memory_size,
                                        std::vector<bool>(sub.num_states(), false));
    std::vector<std::pair<int, int>> stack;
    for (int st = 0; st < sub.num_states(); ++st) {
        seen[f.initial][st] = true;
        stack.emplace_back(f.initial, st);
    }
    while (!stack.empty()) {
        auto [m, st] = stack.back();
        stack.pop_back();
        if (sub.owner(st) == f.owner && !sub.has_action(st, f.choice[m][st]))
            throw IncompatibleStrategyError(
                st, f.choice[m][st],
                sub.state_name(st) + " -> " + sub.action_name(f.choice[m][st]));
        for (int act : sub.available_actions(st)) {
            auto [lo, hi] = sub.group(st, act);
            for (int i = lo; i < hi; ++i) {
                int m2 = out.update[m][i];
                int t2 = sub.transition(i).to;
                if (!seen[m2][t2]) {
                    seen[m2][t2] = true;
                    stack.emplace_back(m2, t2);
                }
            }
        }
    }
    return out;
}

/// Reachable-part minimization by partition refinement, followed by a
/// breadth-first canonical renaming. Two finite-memory strategies are
/// structurally equal iff their minimized forms coincide.
inline FMStrategy minimize_fm(const Arena& a, const FMStrategy& f) {
    validate_strategy(a, f);
    // reachable memories
    std::vector<bool> reach(f.memory_size, false);
    std::vector<int> stack{f.initial};
    reach[f.initial] = true;
    while (!stack.empty()) {
        int m = stack.back();
        stack.pop_back();
        for (int i = 0; i < a.num_transitions(); ++i) {
            int m2 = f.update[m][i];
            if (!reach[m2]) {
                reach[m2] = true;
                stack.push_back(m2);
            }
        }
    }
    // refine: blocks keyed first by the choice row, then by update images
    std::vector<int> block(f.memory_size, -1);
    {
        std::map<std::vector<int>, int> by_row;
        for (int m = 0; m < f.memory_size; ++m) {
            if (!reach[m]) continue;
            auto [it, _] = by_row.try_emplace(f.choice[m], static_cast<int>(by_row.size()));
            block[m] = it->second;
        }
    }
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> sig;
        std::vector<int> next(f.memory_size, -1);
        for (int m = 0; m < f.memory_size; ++m) {
            if (!reach[m]) continue;
            std::vector<int> img(a.num_transitions());
            for (int i = 0; i < a.num_transitions(); ++i) img[i] = block[f.update[m][i]];
            auto [it, _] =
                sig.try_emplace({block[m], std::move(img)}, static_cast<int>(sig.size()));
            next[m] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }
    // canonical order: BFS from the initial block over transition indices
    std::vector<int> canon(f.memory_size, -1);
    std::vector<int> order;
    auto visit = [&](int m) {
        if (canon[block[m]] != -1) return;
        canon[block[m]] = static_cast<int>(order.size());
        order.push_back(m);
    };
    visit(f.initial);
    for (std::size_t k = 0; k < order.size(); ++k) {
        int m = order[k];
        for (int i = 0; i < a.num_transitions(); ++i) visit(f.update[m][i]);
    }
    FMStrategy out;
    out.owner = f.owner;
    out.memory_size = static_cast<int>(order.size());
    out.initial = 0;
    out.choice.resize(out.memory_size);
    out.update.resize(out.memory_size);
    for (std::size_t k = 0; k < order.size(); ++k) {
        int m = order[k];
        out.choice[k] = f.choice[m];
        out.update[k].resize(a.num_transitions());
        for (int i = 0; i < a.num_transitions(); ++i)
            out.update[k][i] = canon[block[f.update[m][i]]];
    }
    return out;
}

inline bool fm_equivalent(const Arena& a, const FMStrategy& f, const FMStrategy& g) {
    return minimize_fm(a, f) == minimize_fm(a, g);
}

/// Memory actually needed: 1 means the strategy is stationary.
inline int effective_memory(const Arena& a, const Strategy& s) {
    if (is_ds(s)) return 1;
    return minimize_fm(a, std::get<FMStrategy>(s)).memory_size;
}

inline std::string strategy_to_text(const Arena& a, const Strategy& s) {
    std::ostringstream out;
    if (is_ds(s)) {
        const DSStrategy& ds = std::get<DSStrategy>(s);
        out << "strategy " << player_name(ds.owner) << " ds\n";
        for (int st = 0; st < a.num_states(); ++st)
            if (a.owner(st) == ds.owner)
                out << a.state_name(st) << " " << a.action_name(ds.choice[st]) << "\n";
        return out.str();
    }
    const FMStrategy& f = std::get<FMStrategy>(s);
    out << "strategy " << player_name(f.owner) << " fm memory=" << f.memory_size
        << " initial=" << f.initial << "\n";
    for (int m = 0; m < f.memory_size; ++m)
        for (int st = 0; st < a.num_states(); ++st)
            if (a.owner(st) == f.owner)
                out << "choice " << m << " " << a.state_name(st) << " "
                    << a.action_name(f.choice[m][st]) << "\n";
    for (int m = 0; m < f.memory_size; ++m)
        for (int i = 0; i < a.num_transitions(); ++i) {
            const Transition& t = a.transition(i);
            out << "update " << m << " " << a.state_name(t.from) << " "
                << a.action_name(t.action) << " " << a.state_name(t.to) << " "
                << f.update[m][i] << "\n";
        }
    return out.str();
}

/// Parses the deterministic stationary dump format written above.
inline DSStrategy parse_ds_strategy(const Arena& a, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    DSStrategy ds;
    ds.choice.assign(a.num_states(), -1);
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string w1, w2, w3;
        ls >> w1 >> w2 >> w3;
        if (!header) {
            if (w1 != "strategy" || (w2 != "Max" && w2 != "Min") || w3 != "ds")
                throw ParseError("bad strategy header: " + line);
            ds.owner = w2 == "Max" ? Player::Max : Player::Min;
            header = true;
            continue;
        }
        if (w2.empty()) throw ParseError("bad strategy line: " + line);
        ds.choice[a.state_index(w1)] = a.action_index(w2);
    }
    if (!header) throw ParseError("missing strategy header");
    validate_strategy(a, ds);
    return ds;
}

}  // namespace sgs
