#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgs/errors.hpp"
#include "sgs/rational.hpp"

namespace sgs {

enum class Player { Max, Min };

inline Player opponent(Player p) { return p == Player::Max ? Player::Min : Player::Max; }
inline const char* player_name(Player p) { return p == Player::Max ? "Max" : "Min"; }

/// A transition (s, a, s') with its probability and reward label.
struct Transition {
    int from = -1;
    int action = -1;
    int to = -1;
    Q prob;
    Q reward;

    friend bool operator==(const Transition& x, const Transition& y) {
        return x.from == y.from && x.action == y.action && x.to == y.to &&
               x.prob == y.prob && x.reward == y.reward;
    }
};

struct TransitionKey {
    int from = -1;
    int action = -1;
    int to = -1;

    friend bool operator==(const TransitionKey&, const TransitionKey&) = default;
    friend bool operator<(const TransitionKey& x, const TransitionKey& y) {
        return std::tie(x.from, x.action, x.to) < std::tie(y.from, y.action, y.to);
    }
};

/// Finite arena: states with owners (and optional priorities), actions,
/// and probabilistic reward-labelled transitions. Immutable once built;
/// states and actions are dense indices with a name table, and the
/// transition list is kept sorted by (from, action, to) so that all
/// iteration downstream is reproducible.
class Arena {
public:
    Arena(std::vector<std::string> state_names, std::vector<Player> owners,
          std::vector<std::string> action_names, std::vector<Transition> transitions,
          std::vector<int> priorities = {})
        : state_names_(std::move(state_names)),
          owners_(std::move(owners)),
          action_names_(std::move(action_names)),
          priorities_(std::move(priorities)),
          transitions_(std::move(transitions)) {
        if (state_names_.empty()) throw Error("arena needs at least one state");
        if (owners_.size() != state_names_.size())
            throw Error("owner map must cover exactly the state set");
        if (!priorities_.empty() && priorities_.size() != state_names_.size())
            throw Error("priority map, when present, must cover exactly the state set");
        for (int p : priorities_)
            if (p < 0) throw Error("priorities must be nonnegative");
        check_unique(state_names_, "state");
        check_unique(action_names_, "action");
        std::sort(transitions_.begin(), transitions_.end(),
                  [](const Transition& x, const Transition& y) {
                      return std::tie(x.from, x.action, x.to) < std::tie(y.from, y.action, y.to);
                  });
        for (std::size_t i = 0; i < transitions_.size(); ++i) {
            const Transition& t = transitions_[i];
            if (t.from < 0 || t.from >= num_states() || t.to < 0 || t.to >= num_states())
                throw UnknownStateError("transition endpoint out of range");
            if (t.action < 0 || t.action >= num_actions())
                throw UnknownActionError("transition action out of range");
            if (i > 0) {
                const Transition& p = transitions_[i - 1];
                if (p.from == t.from && p.action == t.action && p.to == t.to)
                    throw Error("duplicate transition (" + state_names_[t.from] + "," +
                                action_names_[t.action] + "," + state_names_[t.to] + ")");
            }
        }
        build_index();
    }

    int num_states() const { return static_cast<int>(state_names_.size()); }
    int num_actions() const { return static_cast<int>(action_names_.size()); }
    const std::string& state_name(int s) const { return state_names_.at(s); }
    const std::string& action_name(int a) const { return action_names_.at(a); }
    const std::vector<std::string>& state_names() const { return state_names_; }
    const std::vector<std::string>& action_names() const { return action_names_; }
    Player owner(int s) const { return owners_.at(s); }
    const std::vector<Player>& owners() const { return owners_; }

    bool has_priorities() const { return !priorities_.empty(); }
    int priority(int s) const {
        if (!has_priorities()) throw MissingPrioritiesError();
        return priorities_.at(s);
    }
    const std::vector<int>& priorities() const { return priorities_; }

    const std::vector<Transition>& transitions() const { return transitions_; }
    const Transition& transition(int idx) const { return transitions_.at(idx); }
    int num_transitions() const { return static_cast<int>(transitions_.size()); }

    int state_index(const std::string& name) const {
        for (int i = 0; i < num_states(); ++i)
            if (state_names_[i] == name) return i;
        throw UnknownStateError(name);
    }
    int action_index(const std::string& name) const {
        for (int i = 0; i < num_actions(); ++i)
            if (action_names_[i] == name) return i;
        throw UnknownActionError(name);
    }

    /// A(s): actions with at least one transition from s, ascending.
    const std::vector<int>& available_actions(int s) const {
        check_state(s);
        return available_[s];
    }
    bool has_action(int s, int a) const {
        check_state(s);
        const auto& av = available_[s];
        return std::binary_search(av.begin(), av.end(), a);
    }

    /// Transition indices of the (s, a) group, contiguous in transitions().
    std::pair<int, int> group(int s, int a) const {
        check_state(s);
        auto it = group_index_[s].find(a);
        if (it == group_index_[s].end())
            throw UnavailableActionError(s, a, state_names_[s] + "," + action_names_.at(a));
        return it->second;
    }

    std::optional<int> transition_index(int from, int action, int to) const {
        check_state(from);
        auto it = group_index_[from].find(action);
        if (it == group_index_[from].end()) return std::nullopt;
        for (int i = it->second.first; i < it->second.second; ++i)
            if (transitions_[i].to == to) return i;
        return std::nullopt;
    }

    friend bool operator==(const Arena& x, const Arena& y) {
        return x.state_names_ == y.state_names_ && x.owners_ == y.owners_ &&
               x.action_names_ == y.action_names_ && x.priorities_ == y.priorities_ &&
               x.transitions_ == y.transitions_;
    }

    /// Deterministic serialization of the whole arena; memoization key.
    std::string canonical_key() const {
        std::string k;
        for (int s = 0; s < num_states(); ++s) {
            k += state_names_[s];
            k += owners_[s] == Player::Max ? "^" : "v";
            if (has_priorities()) k += std::to_string(priorities_[s]);
            k += ';';
        }
        k += '|';
        for (const auto& n : action_names_) k += n + ";";
        k += '|';
        for (const Transition& t : transitions_) {
            k += std::to_string(t.from) + "," + std::to_string(t.action) + "," +
                 std::to_string(t.to) + "," + to_string(t.prob) + "," + to_string(t.reward) + ";";
        }
        return k;
    }

private:
    static void check_unique(const std::vector<std::string>& names, const char* what) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i].empty()) throw Error(std::string(what) + " name must be nonempty");
            for (std::size_t j = i + 1; j < names.size(); ++j)
                if (names[i] == names[j])
                    throw Error("duplicate " + std::string(what) + " name: " + names[i]);
        }
    }
    void check_state(int s) const {
        if (s < 0 || s >= num_states()) throw UnknownStateError("index " + std::to_string(s));
    }
    void build_index() {
        available_.assign(num_states(), {});
        group_index_.assign(num_states(), {});
        for (int i = 0; i < num_transitions(); ++i) {
            const Transition& t = transitions_[i];
            auto& gi = group_index_[t.from];
            auto it = gi.find(t.action);
            if (it == gi.end()) {
                gi.emplace(t.action, std::make_pair(i, i + 1));
                available_[t.from].push_back(t.action);
            } else {
                it->second.second = i + 1;
            }
        }
        for (auto& av : available_) std::sort(av.begin(), av.end());
    }

    std::vector<std::string> state_names_;
    std::vector<Player> owners_;
    std::vector<std::string> action_names_;
    std::vector<int> priorities_;  // empty or one per state
    std::vector<Transition> transitions_;
    std::vector<std::vector<int>> available_;
    std::vector<std::map<int, std::pair<int, int>>> group_index_;
};

/// Checks the arena invariants: every state has an available action, each
/// (s, a) probability column sums to exactly 1, every listed transition has
/// positive probability.
inline void validate(const Arena& a) {
    for (int s = 0; s < a.num_states(); ++s) {
        const auto& av = a.available_actions(s);
        if (av.empty()) throw EmptyActionSetError(s, a.state_name(s));
        for (int act : av) {
            auto [lo, hi] = a.group(s, act);
            Q total(0);
            for (int i = lo; i < hi; ++i) {
                const Transition& t = a.transition(i);
                if (t.prob <= 0)
                    throw NonPositiveProbabilityError(
                        s, act, t.to,
                        a.state_name(s) + "," + a.action_name(act) + "," + a.state_name(t.to) +
                            " p=" + to_string(t.prob));
                total += t.prob;
            }
            if (total != 1)
                throw ProbabilityMassError(s, act, a.state_name(s) + "," + a.action_name(act),
                                           to_string(total));
        }
    }
}

/// size(A) = sum over states of (|A(s)| - 1); the induction measure.
inline int size(const Arena& a) {
    int total = 0;
    for (int s = 0; s < a.num_states(); ++s)
        total += static_cast<int>(a.available_actions(s).size()) - 1;
    return total;
}

inline bool is_deterministic(const Arena& a) {
    for (const Transition& t : a.transitions())
        if (t.prob != 1) return false;
    return true;
}

enum class ControlKind { NoChoice, MaxControlled, MinControlled, TwoPlayer };

inline const char* control_kind_name(ControlKind k) {
    switch (k) {
        case ControlKind::NoChoice: return "no-choice";
        case ControlKind::MaxControlled: return "Max-controlled";
        case ControlKind::MinControlled: return "Min-controlled";
        default: return "two-player";
    }
}

/// One-player classification: who, if anyone, still has a real choice.
inline ControlKind control_kind(const Arena& a) {
    bool max_choice = false, min_choice = false;
    for (int s = 0; s < a.num_states(); ++s) {
        if (a.available_actions(s).size() < 2) continue;
        (a.owner(s) == Player::Max ? max_choice : min_choice) = true;
    }
    if (!max_choice && !min_choice) return ControlKind::NoChoice;
    if (max_choice && min_choice) return ControlKind::TwoPlayer;
    return max_choice ? ControlKind::MaxControlled : ControlKind::MinControlled;
}

inline ControlKind is_one_player(const Arena& a) { return control_kind(a); }

/// Subarena with exactly the transitions in `keep`. Enforces the two
/// closure conditions: per (s, a) all transitions are kept or none, and
/// every state retains at least one action.
inline Arena subarena(const Arena& a, const std::vector<TransitionKey>& keep) {
    std::vector<bool> kept(a.num_transitions(), false);
    for (const TransitionKey& k : keep) {
        auto idx = a.transition_index(k.from, k.action, k.to);
        if (!idx) throw Error("keep set contains a non-transition");
        kept[*idx] = true;
    }
    // condition (a): all-or-none per (s, a) group
    for (int s = 0; s < a.num_states(); ++s) {
        for (int act : a.available_actions(s)) {
            auto [lo, hi] = a.group(s, act);
            int n = 0;
            for (int i = lo; i < hi; ++i) n += kept[i] ? 1 : 0;
            if (n != 0 && n != hi - lo)
                throw PartialActionRemovalError(s, act,
                                                a.state_name(s) + "," + a.action_name(act));
        }
    }
    // condition (b): every state keeps an action
    std::vector<bool> alive(a.num_states(), false);
    std::vector<Transition> ts;
    for (int i = 0; i < a.num_transitions(); ++i) {
        if (!kept[i]) continue;
        ts.push_back(a.transition(i));
        alive[a.transition(i).from] = true;
    }
    for (int s = 0; s < a.num_states(); ++s)
        if (!alive[s]) throw DeadStateError(s, a.state_name(s));
    return Arena(a.state_names(), a.owners(), a.action_names(), std::move(ts), a.priorities());
}

/// The subarena where state s is limited to the single action x.
inline Arena restrict_action(const Arena& a, int s, int x) {
    if (!a.has_action(s, x))
        throw UnavailableActionError(s, x, a.state_name(s) + "," + a.action_name(x));
    std::vector<TransitionKey> keep;
    for (const Transition& t : a.transitions())
        if (t.from != s || t.action == x) keep.push_back({t.from, t.action, t.to});
    return subarena(a, keep);
}

/// Alternating state/action sequence; states.size() == actions.size() + 1.
struct History {
    std::vector<int> states;
    std::vector<int> actions;

    int length() const { return static_cast<int>(states.size()); }
    friend bool operator==(const History&, const History&) = default;
};

inline bool is_valid_history(const Arena& a, const History& h) {
    if (h.states.empty() || h.actions.size() + 1 != h.states.size()) return false;
    for (int s : h.states)
        if (s < 0 || s >= a.num_states()) return false;
    for (std::size_t i = 0; i + 1 < h.states.size(); ++i)
        if (!a.transition_index(h.states[i], h.actions[i], h.states[i + 1])) return false;
    return true;
}

inline std::string history_to_string(const Arena& a, const History& h) {
    std::string out;
    for (std::size_t i = 0; i < h.states.size(); ++i) {
        if (i) out += "," + a.action_name(h.actions[i - 1]) + ",";
        out += a.state_name(h.states[i]);
    }
    return out;
}

/// All histories starting at `from` with at most `max_states` states,
/// in depth-first lexicographic order.
inline std::vector<History> enumerate_histories(const Arena& a, int from, int max_states) {
    std::vector<History> out;
    History cur;
    cur.states.push_back(from);
    auto rec = [&](auto&& self) -> void {
        out.push_back(cur);
        if (cur.length() >= max_states) return;
        int s = cur.states.back();
        for (int act : a.available_actions(s)) {
            auto [lo, hi] = a.group(s, act);
            for (int i = lo; i < hi; ++i) {
                cur.actions.push_back(act);
                cur.states.push_back(a.transition(i).to);
                self(self);
                cur.states.pop_back();
                cur.actions.pop_back();
            }
        }
    };
    rec(rec);
    return out;
}

/// Incremental construction helper; actions register on first use.
class ArenaBuilder {
public:
    ArenaBuilder& state(const std::string& name, Player owner) {
        state_names_.push_back(name);
        owners_.push_back(owner);
        priorities_.push_back(-1);
        return *this;
    }
    ArenaBuilder& state(const std::string& name, Player owner, int priority) {
        state_names_.push_back(name);
        owners_.push_back(owner);
        priorities_.push_back(priority);
        return *this;
    }
    ArenaBuilder& action(const std::string& name) {
        action_id(name);
        return *this;
    }
    ArenaBuilder& t(const std::string& from, const std::string& action, const std::string& to,
                    const Q& prob, const Q& reward = Q(0)) {
        Transition tr;
        tr.from = state_id(from);
        tr.action = action_id(action);
        tr.to = state_id(to);
        tr.prob = prob;
        tr.reward = reward;
        transitions_.push_back(std::move(tr));
        return *this;
    }
    ArenaBuilder& t(const std::string& from, const std::string& action, const std::string& to,
                    const std::string& prob, const std::string& reward = "0") {
        return t(from, action, to, parse_rational(prob), parse_rational(reward));
    }

    Arena build() const {
        bool any = false, all = true;
        for (int p : priorities_) {
            if (p >= 0)
                any = true;
            else
                all = false;
        }
        if (any && !all) throw Error("priorities must be given for all states or none");
        std::vector<int> prios;
        if (any) prios = priorities_;
        return Arena(state_names_, owners_, action_names_, transitions_, prios);
    }

private:
    int state_id(const std::string& name) {
        for (std::size_t i = 0; i < state_names_.size(); ++i)
            if (state_names_[i] == name) return static_cast<int>(i);
        throw UnknownStateError(name);
    }
    int action_id(const std::string& name) {
        for (std::size_t i = 0; i < action_names_.size(); ++i)
            if (action_names_[i] == name) return static_cast<int>(i);
        action_names_.push_back(name);
        return static_cast<int>(action_names_.size()) - 1;
    }

    std::vector<std::string> state_names_;
    std::vector<Player> owners_;
    std::vector<int> priorities_;
    std::vector<std::string> action_names_;
    std::vector<Transition> transitions_;
};

}  // namespace sgs
