#include <catch2/catch_amalgamated.hpp>

#include "sgs/gallery.hpp"
#include "sgs/sampling.hpp"
#include "sgs/split.hpp"
#include "sgs/strategy.hpp"

using namespace sgs;

namespace {

// the figure arena with both states given to Max, so that the separation
// state belongs to the strategy owner
Arena fig2_all_max() {
    return ArenaBuilder()
        .state("s", Player::Max)
        .state("w", Player::Max)
        .t("s", "a", "s", "1", "1")
        .t("s", "b", "w", "1", "0")
        .t("w", "a", "s", "1/2", "0")
        .t("w", "a", "w", "1/2", "0")
        .t("w", "b", "s", "1", "0")
        .build();
}

}  // namespace

TEST_CASE("enumeration yields the full product, in order") {
    Arena a = fig2_all_max();
    auto all = all_ds_strategies(a, Player::Max);
    REQUIRE(all.size() == 4);
    // lexicographic: (a,a) (a,b) (b,a) (b,b) over (s, w)
    CHECK(all[0].choice == std::vector<int>{0, 0});
    CHECK(all[1].choice == std::vector<int>{0, 1});
    CHECK(all[2].choice == std::vector<int>{1, 0});
    CHECK(all[3].choice == std::vector<int>{1, 1});
    for (const auto& ds : all) REQUIRE_NOTHROW(validate_strategy(a, ds));

    CHECK(all_ds_strategies(gallery_detail::one_loop_arena(), Player::Max).size() == 1);
    // a player with no states has exactly one, empty, strategy
    auto none = all_ds_strategies(a, Player::Min);
    REQUIRE(none.size() == 1);
    CHECK(none[0].choice == std::vector<int>{-1, -1});
}

TEST_CASE("enumeration count matches the product formula on random arenas") {
    Sampler rng(5);
    for (int i = 0; i < 50; ++i) {
        Arena a = random_arena(rng);
        for (Player p : {Player::Max, Player::Min}) {
            DSEnumerator en(a, p);
            Int expect(1);
            for (int s = 0; s < a.num_states(); ++s)
                if (a.owner(s) == p) expect *= static_cast<int>(a.available_actions(s).size());
            CHECK(en.count() == expect);
            std::vector<DSStrategy> seen;
            while (auto ds = en.next()) {
                for (const auto& prev : seen) CHECK_FALSE(prev == *ds);
                seen.push_back(*ds);
            }
            CHECK(Int(seen.size()) == expect);
        }
    }
}

TEST_CASE("restriction to a branch arena") {
    Arena a = fig2_all_max();
    const int w = a.state_index("w");
    Arena branch_a = restrict_action(a, w, a.action_index("a"));

    DSStrategy picks_a{Player::Max, {a.action_index("b"), a.action_index("a")}};
    CHECK(is_ds(restrict_to_subarena(a, picks_a, branch_a)));

    DSStrategy picks_b{Player::Max, {a.action_index("b"), a.action_index("b")}};
    try {
        restrict_to_subarena(a, picks_b, branch_a);
        FAIL("expected IncompatibleStrategyError");
    } catch (const IncompatibleStrategyError& e) {
        CHECK(e.state == w);
        CHECK(e.action == a.action_index("b"));
    }
}

TEST_CASE("restricting the other player is always compatible") {
    Arena a = gallery_detail::split_demo_arena();  // s: Max, w: Min
    Arena sub = restrict_action(a, a.state_index("s"), a.action_index("a"));
    for (const DSStrategy& tau : all_ds_strategies(a, Player::Min))
        REQUIRE_NOTHROW(restrict_to_subarena(a, tau, sub));
}

TEST_CASE("restrict then embed is the identity on the restricted domain") {
    Arena a = fig2_all_max();
    Arena sub = restrict_action(a, a.state_index("w"), a.action_index("a"));
    DSStrategy ds{Player::Max, {a.action_index("a"), a.action_index("a")}};
    Strategy restricted = restrict_to_subarena(a, ds, sub);
    // same state table, so the restriction is literally the same mapping
    CHECK(std::get<DSStrategy>(restricted) == ds);
}

TEST_CASE("extend_from_copy spreads one copy across all of them") {
    Arena a = fig2_all_max();
    const int w = a.state_index("w");
    SplitResult sr = split(a, w);
    const Arena& sp = sr.split_arena;
    const int act_a = a.action_index("a"), act_b = a.action_index("b");

    DSStrategy sigma_a;
    sigma_a.owner = Player::Max;
    sigma_a.choice.assign(sp.num_states(), -1);
    sigma_a.choice[sr.copy_of(a.state_index("s"), act_a)] = act_b;
    sigma_a.choice[sr.omega_split] = act_a;

    DSStrategy ext = extend_from_copy(sr, sigma_a, act_a);
    CHECK(ext.choice[sr.copy_of(a.state_index("s"), act_a)] == act_b);
    CHECK(ext.choice[sr.copy_of(a.state_index("s"), act_b)] == act_b);
    CHECK(ext.choice[sr.omega_split] == act_a);
    REQUIRE_NOTHROW(validate_strategy(sp, ext));

    // restricted back to the copy it came from, the extension is the input
    for (int i = 0; i < sp.num_states(); ++i)
        if (sigma_a.choice[i] != -1) CHECK(ext.choice[i] == sigma_a.choice[i]);
}

TEST_CASE("extend_from_copy on a single-copy split is the identity") {
    Arena a = ArenaBuilder()
                  .state("u", Player::Max)
                  .state("v", Player::Max)
                  .t("u", "a", "v", "1", "0")
                  .t("v", "a", "u", "1", "0")
                  .t("v", "b", "v", "1", "1")
                  .build();
    SplitResult sr = split(a, a.state_index("u"));  // A(u) = {a}, one copy
    DSStrategy ds;
    ds.owner = Player::Max;
    ds.choice.assign(sr.split_arena.num_states(), -1);
    ds.choice[sr.omega_split] = a.action_index("a");
    ds.choice[sr.copy_of(a.state_index("v"), a.action_index("a"))] = a.action_index("b");
    CHECK(extend_from_copy(sr, ds, a.action_index("a")) == ds);
}

TEST_CASE("finite-memory minimization detects stationary strategies") {
    Arena a = gallery_detail::horn_arena();
    DSStrategy idle{Player::Max,
                    {a.action_index("idle"), a.action_index("back"), a.action_index("back")}};
    FMStrategy wasteful = as_fm(a, idle);
    // duplicate the single memory cell; the copies are equivalent
    wasteful.memory_size = 2;
    wasteful.choice.push_back(wasteful.choice[0]);
    wasteful.update[0].assign(a.num_transitions(), 1);
    wasteful.update.push_back(std::vector<int>(a.num_transitions(), 0));
    CHECK(effective_memory(a, wasteful) == 1);
    CHECK(fm_equivalent(a, wasteful, as_fm(a, idle)));

    FMStrategy try_once = gallery_detail::horn_try_once(a);
    CHECK(effective_memory(a, try_once) == 2);
    CHECK_FALSE(fm_equivalent(a, try_once, as_fm(a, idle)));
}

TEST_CASE("strategy dump round trip") {
    Arena a = gallery_detail::split_demo_arena();
    DSStrategy sigma{Player::Max, {a.action_index("a"), -1}};
    std::string text = strategy_to_text(a, sigma);
    CHECK(parse_ds_strategy(a, text) == sigma);
    CHECK_THROWS_AS(parse_ds_strategy(a, "no header\n"), ParseError);
}
