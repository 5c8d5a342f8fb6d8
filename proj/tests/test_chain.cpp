#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "sgs/chain.hpp"
#include "sgs/gallery.hpp"
#include "sgs/sampling.hpp"

using namespace sgs;

namespace {

Arena fig2() { return gallery_detail::split_demo_arena(); }

Profile fig2_profile(const char* at_s, const char* at_w) {
    Arena a = fig2();
    DSStrategy sigma{Player::Max, {a.action_index(at_s), -1}};
    DSStrategy tau{Player::Min, {-1, a.action_index(at_w)}};
    return make_profile(sigma, tau);
}

// test-side oracle: Cramer's rule with Laplace-expansion determinants, an
// independent route to the same linear systems the library eliminates
Q det(const QMatrix& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Q acc(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j] == 0) continue;
        QMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Q> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        Q term = m[0][j] * det(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

std::vector<Q> cramer_solve(const QMatrix& a, const std::vector<Q>& b) {
    const Q d = det(a);
    REQUIRE(d != 0);
    std::vector<Q> x(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        QMatrix aj = a;
        for (std::size_t i = 0; i < a.size(); ++i) aj[i][j] = b[i];
        x[j] = det(aj) / d;
    }
    return x;
}

/// independent mean-payoff oracle: recurrent classes from the chain, each
/// class's stationary weights and the absorption system solved by Cramer
Q oracle_mean(const ProfileChain& c, int node) {
    ChainAnalysis an = analyze(c);  // reuse only the class decomposition
    const int n = static_cast<int>(c.nodes.size());
    const int k = static_cast<int>(an.classes.size());
    std::vector<Q> gains(k);
    for (int kk = 0; kk < k; ++kk) {
        const auto& comp = an.classes[kk];
        const int m = static_cast<int>(comp.size());
        std::vector<int> pos(n, -1);
        for (int i = 0; i < m; ++i) pos[comp[i]] = i;
        QMatrix a(m, std::vector<Q>(m, Q(0)));
        std::vector<Q> b(m, Q(0));
        for (int j = 0; j < m; ++j) a[0][j] = 1;
        b[0] = 1;
        for (int j = 0; j < m; ++j) {
            for (const ChainEdge& e : c.edges[comp[j]])
                if (pos[e.to] > 0) a[pos[e.to]][j] += e.prob;
            if (j > 0) a[j][j] -= 1;
        }
        std::vector<Q> pi = cramer_solve(a, b);
        Q g(0);
        for (int i = 0; i < m; ++i) {
            Q step(0);
            for (const ChainEdge& e : c.edges[comp[i]]) step += e.prob * e.reward;
            g += pi[i] * step;
        }
        gains[kk] = g;
    }
    if (an.class_of[node] != -1) return gains[an.class_of[node]];
    std::vector<int> transient, trow(n, -1);
    for (int v = 0; v < n; ++v)
        if (an.class_of[v] == -1) {
            trow[v] = static_cast<int>(transient.size());
            transient.push_back(v);
        }
    const int m = static_cast<int>(transient.size());
    QMatrix a(m, std::vector<Q>(m, Q(0)));
    Q value(0);
    for (int kk = 0; kk < k; ++kk) {
        std::vector<Q> b(m, Q(0));
        for (int i = 0; i < m; ++i) {
            for (const ChainEdge& e : c.edges[transient[i]]) {
                if (trow[e.to] != -1) {
                    if (kk == 0) a[i][trow[e.to]] -= e.prob;  // fill A once
                } else if (an.class_of[e.to] == kk) {
                    b[i] += e.prob;
                }
            }
            if (kk == 0) a[i][i] += 1;
        }
        value += cramer_solve(a, b)[trow[node]] * gains[kk];
    }
    return value;
}

}  // namespace

TEST_CASE("chains of stationary profiles live on the state space") {
    Arena a = fig2();
    const int s = a.state_index("s");

    ProfileChain loop = build_chain(a, s, fig2_profile("a", "b"));
    REQUIRE(loop.nodes.size() == 1);
    CHECK(loop.nodes[0].state == s);
    REQUIRE(loop.edges[0].size() == 1);
    CHECK(loop.edges[0][0].to == 0);
    CHECK(loop.edges[0][0].prob == 1);

    ProfileChain cycle = build_chain(a, s, fig2_profile("b", "b"));
    REQUIRE(cycle.nodes.size() == 2);
    CHECK(cycle.edges[0][0].to == 1);
    CHECK(cycle.edges[1][0].to == 0);
}

TEST_CASE("a no-choice arena's chain is its own Markov chain") {
    Arena mix = gallery_detail::horn_mixture_arena(Q(1, 2));
    Profile p = make_profile(forced_strategy(mix, Player::Max),
                             forced_strategy(mix, Player::Min));
    ProfileChain c = build_chain_all(mix, p);
    CHECK(c.nodes.size() == static_cast<std::size_t>(mix.num_states()));
    int edge_count = 0;
    for (const auto& es : c.edges) edge_count += static_cast<int>(es.size());
    CHECK(edge_count == mix.num_transitions());
}

TEST_CASE("analysis of a two-node deterministic cycle") {
    Arena a = fig2();
    ProfileChain c = build_chain(a, a.state_index("s"), fig2_profile("b", "b"));
    ChainAnalysis an = analyze(c);
    REQUIRE(an.classes.size() == 1);
    CHECK(an.classes[0] == std::vector<int>{0, 1});
    CHECK(an.absorption[0][0] == 1);
    CHECK(an.stationary[0] == std::vector<Q>{Q(1, 2), Q(1, 2)});
}

TEST_CASE("analysis of an absorbing self-loop") {
    Arena a = gallery_detail::one_loop_arena();
    Profile p = make_profile(forced_strategy(a, Player::Max), forced_strategy(a, Player::Min));
    ChainAnalysis an = analyze(build_chain(a, 0, p));
    REQUIRE(an.classes.size() == 1);
    CHECK(an.absorption[0][0] == 1);
    CHECK(an.stationary[0] == std::vector<Q>{Q(1)});
}

TEST_CASE("analysis of a half-half branch into two absorbing loops") {
    Arena a = ArenaBuilder()
                  .state("c", Player::Max)
                  .state("l", Player::Max)
                  .state("r", Player::Max)
                  .t("c", "go", "l", "1/2", "0")
                  .t("c", "go", "r", "1/2", "1")
                  .t("l", "stay", "l", "1", "0")
                  .t("r", "stay", "r", "1", "1")
                  .build();
    Profile p = make_profile(forced_strategy(a, Player::Max), forced_strategy(a, Player::Min));
    ProfileChain c = build_chain(a, 0, p);
    ChainAnalysis an = analyze(c);
    REQUIRE(an.classes.size() == 2);
    CHECK(an.absorption[c.initial][0] == Q(1, 2));
    CHECK(an.absorption[c.initial][1] == Q(1, 2));
    CHECK(mean_payoff_values(c)[c.initial] == Q(1, 2));
}

TEST_CASE("mean payoff examples") {
    Arena loop = ArenaBuilder().state("u", Player::Max).t("u", "a", "u", "1", "2/3").build();
    Profile lp = make_profile(forced_strategy(loop, Player::Max),
                              forced_strategy(loop, Player::Min));
    CHECK(mean_payoff_value(loop, 0, lp) == Q(2, 3));

    // deterministic 4-cycle with rewards 0,1,1,0 averages 1/2
    Arena a = gallery_detail::overtaking_arena();
    DSStrategy sigma{Player::Max, {}};
    sigma.choice.assign(a.num_states(), -1);
    sigma.choice[a.state_index("v0")] = a.action_index("a");
    for (const char* n : {"p1", "p2", "p3", "q1", "q2", "q3"})
        sigma.choice[a.state_index(n)] = a.action_index("m");
    Profile p = make_profile(sigma, forced_strategy(a, Player::Min));
    CHECK(mean_payoff_value(a, a.state_index("v0"), p) == Q(1, 2));
    // agrees with the lasso's cycle average, computed directly
    Lasso l = lasso_of(a, a.state_index("v0"), p);
    Q cyc(0);
    for (const Q& q : l.cycle) cyc += q;
    CHECK(mean_payoff_value(a, a.state_index("v0"), p) ==
          cyc / static_cast<int>(l.cycle.size()));
}

TEST_CASE("parity value examples") {
    Arena two = ArenaBuilder()
                    .state("x", Player::Max, 1)
                    .state("y", Player::Max, 2)
                    .t("x", "m", "y", "1", "0")
                    .t("y", "m", "x", "1", "0")
                    .build();
    Profile p2 = make_profile(forced_strategy(two, Player::Max),
                              forced_strategy(two, Player::Min));
    CHECK(parity_value(two, 0, p2) == 1);  // limsup priority 2, even

    Arena one = ArenaBuilder().state("x", Player::Max, 1).t("x", "m", "x", "1", "0").build();
    Profile p1 = make_profile(forced_strategy(one, Player::Max),
                              forced_strategy(one, Player::Min));
    CHECK(parity_value(one, 0, p1) == 0);

    Arena branch = ArenaBuilder()
                       .state("c", Player::Max, 0)
                       .state("l", Player::Max, 1)
                       .state("r", Player::Max, 2)
                       .t("c", "go", "l", "1/2", "0")
                       .t("c", "go", "r", "1/2", "0")
                       .t("l", "stay", "l", "1", "0")
                       .t("r", "stay", "r", "1", "0")
                       .build();
    Profile pb = make_profile(forced_strategy(branch, Player::Max),
                              forced_strategy(branch, Player::Min));
    CHECK(parity_value(branch, 0, pb) == Q(1, 2));
    CHECK_THROWS_AS(parity_value(fig2(), 0, fig2_profile("a", "a")), MissingPrioritiesError);
}

TEST_CASE("simple parity includes the initial state and tracks the running max") {
    // visit 1, then 2, then loop on 0: the supremum is 2
    Arena path = ArenaBuilder()
                     .state("x", Player::Max, 1)
                     .state("y", Player::Max, 2)
                     .state("z", Player::Max, 0)
                     .t("x", "m", "y", "1", "0")
                     .t("y", "m", "z", "1", "0")
                     .t("z", "m", "z", "1", "0")
                     .build();
    Profile pp = make_profile(forced_strategy(path, Player::Max),
                              forced_strategy(path, Player::Min));
    CHECK(simple_parity_value(path, 0, pp) == 1);

    Arena one = ArenaBuilder().state("x", Player::Max, 1).t("x", "m", "x", "1", "0").build();
    Profile p1 = make_profile(forced_strategy(one, Player::Max),
                              forced_strategy(one, Player::Min));
    CHECK(simple_parity_value(one, 0, p1) == 0);

    // always idle at w never leaves priority 1
    Arena horn = gallery_detail::horn_arena();
    DSStrategy idle{Player::Max,
                    {horn.action_index("idle"), horn.action_index("back"),
                     horn.action_index("back")}};
    CHECK(simple_parity_value(horn, horn.state_index("w"),
                              make_profile(idle, forced_strategy(horn, Player::Min))) == 0);
}

TEST_CASE("discounted value examples") {
    Arena loop1 = ArenaBuilder().state("u", Player::Max).t("u", "a", "u", "1", "1").build();
    Profile lp = make_profile(forced_strategy(loop1, Player::Max),
                              forced_strategy(loop1, Player::Min));
    CHECK(discounted_value(loop1, 0, lp, Q(1, 2)) == 2);

    Arena loop0 = ArenaBuilder().state("u", Player::Max).t("u", "a", "u", "1", "0").build();
    Profile l0 = make_profile(forced_strategy(loop0, Player::Max),
                              forced_strategy(loop0, Player::Min));
    CHECK(discounted_value(loop0, 0, l0, Q(1, 2)) == 0);

    // two-cycle with rewards 1 and 0: v1 = 1 + b*v2, v2 = 0 + b*v1
    Arena cyc = ArenaBuilder()
                    .state("x", Player::Max)
                    .state("y", Player::Max)
                    .t("x", "m", "y", "1", "1")
                    .t("y", "m", "x", "1", "0")
                    .build();
    Profile pc = make_profile(forced_strategy(cyc, Player::Max),
                              forced_strategy(cyc, Player::Min));
    const Q beta(1, 2);
    std::vector<Q> hand = cramer_solve({{Q(1), -beta}, {-beta, Q(1)}}, {Q(1), Q(0)});
    CHECK(hand[0] == Q(4, 3));
    CHECK(discounted_value(cyc, 0, pc, beta) == hand[0]);
    CHECK(discounted_value(cyc, 1, pc, beta) == hand[1]);
}

TEST_CASE("lasso extraction") {
    Arena a = gallery_detail::overtaking_arena();
    DSStrategy sigma{Player::Max, {}};
    sigma.choice.assign(a.num_states(), -1);
    sigma.choice[a.state_index("v0")] = a.action_index("a");
    for (const char* n : {"p1", "p2", "p3", "q1", "q2", "q3"})
        sigma.choice[a.state_index(n)] = a.action_index("m");
    Profile p = make_profile(sigma, forced_strategy(a, Player::Min));
    CHECK(lasso_of(a, a.state_index("v0"), p) == Lasso{{}, {Q(0), Q(1), Q(1), Q(0)}});

    Arena loop = ArenaBuilder().state("u", Player::Max).t("u", "a", "u", "1", "5/7").build();
    Profile lp = make_profile(forced_strategy(loop, Player::Max),
                              forced_strategy(loop, Player::Min));
    CHECK(lasso_of(loop, 0, lp) == Lasso{{}, {Q(5, 7)}});

    Arena chase = ArenaBuilder()
                      .state("u", Player::Max)
                      .state("v", Player::Max)
                      .t("u", "m", "v", "1", "3")
                      .t("v", "m", "v", "1", "5")
                      .build();
    Profile cp = make_profile(forced_strategy(chase, Player::Max),
                              forced_strategy(chase, Player::Min));
    CHECK(lasso_of(chase, 0, cp) == Lasso{{Q(3)}, {Q(5)}});

    CHECK_THROWS_AS(lasso_of(fig2(), 0, fig2_profile("a", "a")), NotDeterministicError);
}

TEST_CASE("lasso normalization") {
    CHECK(normalize({{Q(1)}, {Q(2), Q(1)}}) == Lasso{{}, {Q(1), Q(2)}});
    CHECK(normalize({{}, {Q(3), Q(3)}}) == Lasso{{}, {Q(3)}});
    CHECK(normalize({{}, {Q(0), Q(1), Q(0), Q(1)}}) == Lasso{{}, {Q(0), Q(1)}});
    CHECK(normalize({{Q(7)}, {Q(5)}}) == Lasso{{Q(7)}, {Q(5)}});
}

TEST_CASE("exact conservation on random chains") {
    Sampler rng(17);
    for (int i = 0; i < 60; ++i) {
        Arena a = random_arena(rng);
        // a deterministic stationary profile picked at random
        DSStrategy sigma{Player::Max, {}}, tau{Player::Min, {}};
        sigma.choice.assign(a.num_states(), -1);
        tau.choice.assign(a.num_states(), -1);
        for (int s = 0; s < a.num_states(); ++s) {
            const auto& av = a.available_actions(s);
            int pick = av[rng.below(static_cast<int>(av.size()))];
            (a.owner(s) == Player::Max ? sigma : tau).choice[s] = pick;
        }
        ProfileChain c = build_chain_all(a, make_profile(sigma, tau));
        ChainAnalysis an = analyze(c);
        for (std::size_t v = 0; v < c.nodes.size(); ++v) {
            Q total(0);
            for (const Q& q : an.absorption[v]) total += q;
            CHECK(total == 1);
        }
        for (std::size_t k = 0; k < an.classes.size(); ++k) {
            const auto& comp = an.classes[k];
            std::vector<int> pos(c.nodes.size(), -1);
            for (std::size_t i = 0; i < comp.size(); ++i) pos[comp[i]] = static_cast<int>(i);
            // pi P = pi, checked componentwise
            std::vector<Q> flow(comp.size(), Q(0));
            Q total(0);
            for (std::size_t i = 0; i < comp.size(); ++i) {
                total += an.stationary[k][i];
                for (const ChainEdge& e : c.edges[comp[i]])
                    flow[pos[e.to]] += an.stationary[k][i] * e.prob;
            }
            CHECK(total == 1);
            for (std::size_t i = 0; i < comp.size(); ++i)
                CHECK(flow[i] == an.stationary[k][i]);
        }
        // the independent Cramer-based oracle agrees on the mean payoff
        std::vector<Q> got = mean_payoff_values(c);
        for (int s = 0; s < a.num_states(); ++s)
            CHECK(got[c.node_of_state[s]] == oracle_mean(c, c.node_of_state[s]));
    }
}

TEST_CASE("Monte Carlo frequency approximates the simple parity value") {
    Arena horn = gallery_detail::horn_arena();
    const int w = horn.state_index("w");
    Profile try_once = make_profile(gallery_detail::horn_try_once(horn),
                                    forced_strategy(horn, Player::Min));
    const Q exact = simple_parity_value(horn, w, try_once);
    REQUIRE(exact == Q(1, 2));

    // exact sampling of the chain using integer draws under a common
    // denominator; 10^5 truncated runs, statistical tolerance 0.02
    ProfileChain c = build_chain(horn, w, try_once);
    std::vector<std::uint64_t> denom(c.nodes.size(), 1);
    std::vector<std::vector<std::pair<std::uint64_t, int>>> cums(c.nodes.size());
    for (std::size_t v = 0; v < c.nodes.size(); ++v) {
        Int den(1);
        for (const ChainEdge& e : c.edges[v]) den *= denominator(e.prob);
        denom[v] = den.convert_to<std::uint64_t>();
        Int acc(0);
        for (const ChainEdge& e : c.edges[v]) {
            acc += numerator(e.prob) * (den / denominator(e.prob));
            cums[v].emplace_back(acc.convert_to<std::uint64_t>(), e.to);
        }
    }
    Sampler rng(99);
    const int runs = 100000, horizon = 400;
    int hits = 0;
    for (int r = 0; r < runs; ++r) {
        int node = c.initial;
        int best = horn.priority(c.nodes[node].state);
        for (int t = 0; t < horizon; ++t) {
            std::uint64_t draw = rng.raw() % denom[node];
            int next = -1;
            for (const auto& [cum, to] : cums[node])
                if (draw < cum) {
                    next = to;
                    break;
                }
            REQUIRE(next >= 0);
            node = next;
            best = std::max(best, horn.priority(c.nodes[node].state));
        }
        if (best % 2 == 0) ++hits;
    }
    double freq = static_cast<double>(hits) / runs;
    double target = 0.5;
    CHECK(std::abs(freq - target) < 0.02);
}
