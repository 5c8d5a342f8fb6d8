#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sgs/arena.hpp"
#include "sgs/payoff.hpp"
#include "sgs/solver.hpp"

namespace sgs {

/// A worked example with facts the library must reproduce exactly.
/// check() returns a deterministic report and throws on any mismatch.
struct GalleryEntry {
    std::string name;
    std::string description;
    Arena arena;
    Preference payoff;
    std::function<std::string(const GalleryEntry&)> check;
};

namespace gallery_detail {

inline void expect(bool ok, const std::string& what) {
    if (!ok) throw Error("gallery fact failed: " + what);
}

inline Arena one_loop_arena() {
    return ArenaBuilder().state("u", Player::Max).t("u", "a", "u", "1", "0").build();
}

inline Arena split_demo_arena() {
    return ArenaBuilder()
        .state("s", Player::Max)
        .state("w", Player::Min)
        .t("s", "a", "s", "1", "1")
        .t("s", "b", "w", "1", "0")
        .t("w", "a", "s", "1/2", "0")
        .t("w", "a", "w", "1/2", "0")
        .t("w", "b", "s", "1", "0")
        .build();
}

/// The arena the split of split_demo_arena on w must equal.
inline Arena split_demo_expected_split() {
    return ArenaBuilder()
        .state("w", Player::Min)
        .state("s_a", Player::Max)
        .state("s_b", Player::Max)
        .t("w", "a", "s_a", "1/2", "0")
        .t("w", "a", "w", "1/2", "0")
        .t("w", "b", "s_b", "1", "0")
        .t("s_a", "a", "s_a", "1", "1")
        .t("s_a", "b", "w", "1", "0")
        .t("s_b", "a", "s_b", "1", "1")
        .t("s_b", "b", "w", "1", "0")
        .build();
}

/// Reconstruction of the simple parity counterexample: at w the player may
/// try (reward 1 to g or reward 2 to b, half/half) or idle; g and b return
/// to w. Priorities encode "some visit to g and none to b" as an even
/// supremum: w carries 1, g carries 2, b carries 3.
inline Arena horn_arena() {
    return ArenaBuilder()
        .state("w", Player::Max, 1)
        .state("g", Player::Max, 2)
        .state("b", Player::Max, 3)
        .t("w", "try", "g", "1/2", "1")
        .t("w", "try", "b", "1/2", "2")
        .t("w", "idle", "w", "1", "0")
        .t("g", "back", "w", "1", "0")
        .t("b", "back", "w", "1", "0")
        .build();
}

/// Try once, then idle forever: the 2-memory strategy of value 1/2 from w.
inline FMStrategy horn_try_once(const Arena& a) {
    FMStrategy f;
    f.owner = Player::Max;
    f.memory_size = 2;
    f.initial = 0;
    const int w = a.state_index("w"), g = a.state_index("g"), b = a.state_index("b");
    const int tr = a.action_index("try"), idle = a.action_index("idle"),
              back = a.action_index("back");
    f.choice.assign(2, std::vector<int>(a.num_states(), -1));
    f.choice[0][w] = tr;
    f.choice[1][w] = idle;
    f.choice[0][g] = f.choice[1][g] = back;
    f.choice[0][b] = f.choice[1][b] = back;
    f.update.assign(2, std::vector<int>(a.num_transitions(), 0));
    for (int i = 0; i < a.num_transitions(); ++i) {
        f.update[1][i] = 1;
        if (a.transition(i).from == w && a.transition(i).action == tr) f.update[0][i] = 1;
    }
    return f;
}

/// Stationary mixture at w: try with weight q, idle with weight 1-q,
/// collapsed into a single-action chain arena.
inline Arena horn_mixture_arena(const Q& q) {
    ArenaBuilder bld;
    bld.state("w", Player::Max, 1).state("g", Player::Max, 2).state("b", Player::Max, 3);
    if (q > 0) {
        bld.t("w", "mix", "g", q / 2, Q(1));
        bld.t("w", "mix", "b", q / 2, Q(2));
    }
    if (q < 1) bld.t("w", "mix", "w", Q(1) - q, Q(0));
    bld.t("g", "back", "w", Q(1), Q(0));
    bld.t("b", "back", "w", Q(1), Q(0));
    return bld.build();
}

inline Arena overtaking_arena() {
    ArenaBuilder bld;
    bld.state("v0", Player::Max);
    for (const char* n : {"p1", "p2", "p3", "q1", "q2", "q3"}) bld.state(n, Player::Max);
    bld.t("v0", "a", "p1", "1", "0")
        .t("p1", "m", "p2", "1", "1")
        .t("p2", "m", "p3", "1", "1")
        .t("p3", "m", "v0", "1", "0")
        .t("v0", "b", "q1", "1", "1")
        .t("q1", "m", "q2", "1", "0")
        .t("q2", "m", "q3", "1", "0")
        .t("q3", "m", "v0", "1", "1");
    return bld.build();
}

inline std::string check_one_loop(const GalleryEntry& g) {
    std::ostringstream out;
    expect(size(g.arena) == 0, "one-loop arena has size 0");
    SplitResult sr = split(g.arena, 0);
    expect(sr.split_arena == g.arena, "splitting the one-loop arena is the identity");
    Solution sol = two_player_solve(g.arena, g.payoff);
    expect(sol.values[0].value == 0, "one-loop mean value is 0");
    out << "size 0, split is the identity, mean value 0\n";
    return out.str();
}

inline std::string check_split_demo(const GalleryEntry& g) {
    std::ostringstream out;
    const Arena& a = g.arena;
    SplitResult sr = split(a, a.state_index("w"));
    expect(sr.split_arena == split_demo_expected_split(),
           "split on w reproduces the three-state arena");
    check_separation(sr);
    Solution rec = two_player_solve(a, g.payoff);
    Solution oracle = brute_force_saddle(a, g.payoff);
    expect(rec.values[a.state_index("s")].value == 1, "mean value 1 from s");
    expect(rec.values[a.state_index("w")].value == 1, "mean value 1 from w");
    expect(rec.max_strategy.choice[a.state_index("s")] == a.action_index("a"),
           "optimal Max choice at s is a");
    for (int s = 0; s < a.num_states(); ++s)
        expect(rec.values[s] == oracle.values[s], "solver and oracle values agree");
    out << "split matches the 3-state arena (7 transitions)\n";
    out << "mean value 1 from s and from w, Max plays a at s, oracle agrees\n";
    return out.str();
}

inline std::string check_horn(const GalleryEntry& g) {
    std::ostringstream out;
    const Arena& a = g.arena;
    const int w = a.state_index("w");
    // best stationary deterministic value from w is exactly 0
    Q best_ds(-1);
    DSStrategy forced_min = forced_strategy(a, Player::Min);
    for (const DSStrategy& ds : all_ds_strategies(a, Player::Max)) {
        Q v = simple_parity_value(a, w, make_profile(ds, forced_min));
        if (best_ds < v) best_ds = v;
    }
    expect(best_ds == 0, "every stationary deterministic strategy yields 0 from w");
    // stationary randomized mixtures at w: grid plus both boundaries
    for (int num = 0; num <= 10; ++num) {
        Arena mix = horn_mixture_arena(Q(num, 10));
        Profile chain_profile = make_profile(forced_strategy(mix, Player::Max),
                                             forced_strategy(mix, Player::Min));
        expect(simple_parity_value(mix, mix.state_index("w"), chain_profile) == 0,
               "stationary mixture try:" + to_string(Q(num, 10)) + " yields 0 from w");
    }
    // the 2-memory strategy achieves exactly 1/2
    Profile try_once = make_profile(horn_try_once(a), forced_min);
    Q fm_value = simple_parity_value(a, w, try_once);
    expect(fm_value == Q(1, 2), "try-once strategy achieves 1/2 from w");
    // the recursive solver refuses: no stationary strategy is optimal
    SolveReport rep = solve_two_player(a, g.payoff);
    expect(!rep.solution.has_value(), "recursive solve reports NoUniformOptimum");
    expect(rep.failure.find("NoUniformOptimum") == 0, "failure kind is NoUniformOptimum");
    out << "stationary strategies (deterministic and mixture grid) all yield 0 from w\n";
    out << "try-once 2-memory strategy achieves 1/2 from w\n";
    out << "recursive solve: " << rep.failure << "\n";
    return out.str();
}

inline std::string check_overtaking(const GalleryEntry& g) {
    std::ostringstream out;
    const Arena& a = g.arena;
    const int v0 = a.state_index("v0");
    DSStrategy forced_min = forced_strategy(a, Player::Min);
    DSEnumerator en(a, Player::Max);
    std::vector<Lasso> lassos;
    while (auto ds = en.next())
        lassos.push_back(lasso_of(a, v0, make_profile(*ds, forced_min)));
    expect(lassos.size() == 2, "two cycles to choose from at v0");
    expect(lassos[0] == Lasso{{}, {Q(0), Q(1), Q(1), Q(0)}}, "cycle a reads 0,1,1,0");
    expect(lassos[1] == Lasso{{}, {Q(1), Q(0), Q(0), Q(1)}}, "cycle b reads 1,0,0,1");
    expect(overtaking_compare(lassos[0], lassos[1]) == Comparison::Incomparable,
           "neither cycle overtakes the other");
    bool no_saddle = false;
    try {
        brute_force_saddle(a, g.payoff);
    } catch (const NoSaddleError&) {
        no_saddle = true;
    }
    expect(no_saddle, "the oracle finds no stationary deterministic saddle");
    out << "cycle words (0,1,1,0) and (1,0,0,1) are incomparable under overtaking\n";
    out << "brute-force oracle: NoSaddle\n";
    return out.str();
}

}  // namespace gallery_detail

inline const std::vector<GalleryEntry>& gallery() {
    static const std::vector<GalleryEntry> entries = [] {
        using namespace gallery_detail;
        std::vector<GalleryEntry> v;
        v.push_back({"one-loop", "single state, single self-loop; the size-0 base case",
                     one_loop_arena(), Preference::mean(), check_one_loop});
        v.push_back({"split-demo",
                     "two-state arena whose split on w has one copy of s per action",
                     split_demo_arena(), Preference::mean(), check_split_demo});
        v.push_back({"horn",
                     "simple parity needs memory on stochastic arenas: stationary "
                     "strategies get 0 from w, trying once gets 1/2",
                     horn_arena(), Preference::simple_parity(), check_horn});
        v.push_back({"overtaking",
                     "two deterministic 4-cycles whose partial sums alternate; no "
                     "stationary deterministic saddle exists",
                     overtaking_arena(), Preference::overtaking(), check_overtaking});
        return v;
    }();
    return entries;
}

inline const GalleryEntry& gallery_entry(const std::string& name) {
    for (const GalleryEntry& g : gallery())
        if (g.name == name) return g;
    throw Error("no gallery entry named '" + name + "'");
}

}  // namespace sgs
