#include <catch2/catch_amalgamated.hpp>

#include "sgs/arena.hpp"
#include "sgs/gallery.hpp"
#include "sgs/sampling.hpp"
#include "sgs/split.hpp"

using namespace sgs;

namespace {

Arena fig2() { return gallery_detail::split_demo_arena(); }

std::vector<TransitionKey> all_keys(const Arena& a) {
    std::vector<TransitionKey> keys;
    for (const Transition& t : a.transitions()) keys.push_back({t.from, t.action, t.to});
    return keys;
}

}  // namespace

TEST_CASE("validate accepts the two-state figure arena") {
    REQUIRE_NOTHROW(validate(fig2()));
}

TEST_CASE("validate accepts a minimal one-loop arena") {
    REQUIRE_NOTHROW(validate(gallery_detail::one_loop_arena()));
}

TEST_CASE("validate reports the exact probability mass defect") {
    Arena bad = ArenaBuilder()
                    .state("s", Player::Max)
                    .state("w", Player::Min)
                    .t("s", "a", "s", "1", "1")
                    .t("s", "b", "w", "1", "0")
                    .t("w", "a", "s", "1/2", "0")
                    .t("w", "a", "w", "1/3", "0")
                    .t("w", "b", "s", "1", "0")
                    .build();
    try {
        validate(bad);
        FAIL("expected ProbabilityMassError");
    } catch (const ProbabilityMassError& e) {
        CHECK(e.state == bad.state_index("w"));
        CHECK(e.action == bad.action_index("a"));
        CHECK(e.total == "5/6");
    }
}

TEST_CASE("validate rejects zero probabilities") {
    Arena bad = ArenaBuilder()
                    .state("s", Player::Max)
                    .t("s", "a", "s", "0", "0")
                    .build();
    CHECK_THROWS_AS(validate(bad), NonPositiveProbabilityError);
}

TEST_CASE("available actions") {
    Arena a = fig2();
    CHECK(a.available_actions(a.state_index("w")) ==
          std::vector<int>{a.action_index("a"), a.action_index("b")});
    CHECK(a.available_actions(a.state_index("s")) ==
          std::vector<int>{a.action_index("a"), a.action_index("b")});
    Arena loop = gallery_detail::one_loop_arena();
    CHECK(loop.available_actions(0) == std::vector<int>{0});
}

TEST_CASE("subarena drops whole action groups") {
    Arena a = fig2();
    const int w = a.state_index("w"), b = a.action_index("b");
    std::vector<TransitionKey> keep;
    for (const Transition& t : a.transitions())
        if (!(t.from == w && t.action == b)) keep.push_back({t.from, t.action, t.to});
    Arena sub = subarena(a, keep);
    CHECK(sub.available_actions(w) == std::vector<int>{a.action_index("a")});
    REQUIRE_NOTHROW(validate(sub));
}

TEST_CASE("subarena rejects partial group removal") {
    Arena a = fig2();
    const int w = a.state_index("w"), act_a = a.action_index("a");
    std::vector<TransitionKey> keep;
    for (const Transition& t : a.transitions())
        if (!(t.from == w && t.action == act_a && t.to == w))
            keep.push_back({t.from, t.action, t.to});
    try {
        subarena(a, keep);
        FAIL("expected PartialActionRemovalError");
    } catch (const PartialActionRemovalError& e) {
        CHECK(e.state == w);
        CHECK(e.action == act_a);
    }
}

TEST_CASE("subarena rejects dead states") {
    CHECK_THROWS_AS(subarena(fig2(), {}), DeadStateError);
}

TEST_CASE("subarena on the full transition set is the identity") {
    Arena a = fig2();
    CHECK(subarena(a, all_keys(a)) == a);
}

TEST_CASE("arena size") {
    CHECK(size(fig2()) == 2);
    CHECK(size(gallery_detail::one_loop_arena()) == 0);
    // the split of the figure arena with the (w,b) group removed keeps both
    // copies alive and still has size 2
    SplitResult sr = split(fig2(), fig2().state_index("w"));
    const Arena& sp = sr.split_arena;
    std::vector<TransitionKey> keep;
    for (const Transition& t : sp.transitions())
        if (!(t.from == sr.omega_split && t.action == sp.action_index("b")))
            keep.push_back({t.from, t.action, t.to});
    CHECK(size(subarena(sp, keep)) == 2);
}

TEST_CASE("one-player classification") {
    Arena horn = gallery_detail::horn_arena();
    CHECK(control_kind(horn) == ControlKind::MaxControlled);
    CHECK(control_kind(fig2()) == ControlKind::TwoPlayer);
    CHECK(control_kind(gallery_detail::one_loop_arena()) == ControlKind::NoChoice);

    Arena all_max = ArenaBuilder()
                        .state("s", Player::Max)
                        .t("s", "a", "s", "1", "0")
                        .t("s", "b", "s", "1", "1")
                        .build();
    CHECK(control_kind(all_max) == ControlKind::MaxControlled);
}

TEST_CASE("determinism predicate") {
    CHECK_FALSE(is_deterministic(fig2()));
    CHECK(is_deterministic(gallery_detail::overtaking_arena()));
    CHECK(is_deterministic(gallery_detail::one_loop_arena()));
}

TEST_CASE("generated arenas validate and respect subarena monotonicity") {
    Sampler rng(11);
    RandomArenaOptions opt;
    opt.with_priorities = true;
    for (int i = 0; i < 200; ++i) {
        Arena a = random_arena(rng, opt);
        REQUIRE_NOTHROW(validate(a));
        CHECK(subarena(a, all_keys(a)) == a);

        // drop one full action group at a state with a choice, if any
        for (int s = 0; s < a.num_states(); ++s) {
            if (a.available_actions(s).size() < 2) continue;
            int dropped = a.available_actions(s)[0];
            std::vector<TransitionKey> keep;
            for (const Transition& t : a.transitions())
                if (!(t.from == s && t.action == dropped)) keep.push_back({t.from, t.action, t.to});
            Arena sub = subarena(a, keep);
            CHECK(size(sub) < size(a));
            REQUIRE_NOTHROW(validate(sub));
            // closure: restricting a subarena still validates
            std::vector<TransitionKey> keep2;
            for (const Transition& t : sub.transitions()) keep2.push_back({t.from, t.action, t.to});
            REQUIRE_NOTHROW(validate(subarena(sub, keep2)));
            break;
        }
    }
}

TEST_CASE("histories") {
    Arena a = fig2();
    const int s = a.state_index("s"), w = a.state_index("w");
    const int aa = a.action_index("a"), ab = a.action_index("b");
    CHECK(is_valid_history(a, {{s, s, w}, {aa, ab}}));
    CHECK_FALSE(is_valid_history(a, {{s, w}, {aa}}));  // (s,a,w) is not a transition
    CHECK_FALSE(is_valid_history(a, {{}, {}}));
    auto hs = enumerate_histories(a, s, 3);
    for (const History& h : hs) CHECK(is_valid_history(a, h));
    // from s: itself, 2 of length 2, then (s a s a) (s a s b) (s b w a) (s b w a) (s b w b)
    CHECK(hs.size() == 1 + 2 + 5);
}
