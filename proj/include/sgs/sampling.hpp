#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sgs/arena.hpp"
#include "sgs/chain.hpp"

namespace sgs {

/// Seeded generator for test and property-check inputs. mt19937_64 output
/// is pinned by the standard and we draw from it directly, so identical
/// seeds give identical samples on every platform.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }
    int below(int n) { return static_cast<int>(raw() % static_cast<std::uint64_t>(n)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }
    bool coin() { return (raw() & 1u) != 0; }

private:
    std::mt19937_64 eng_;
};

struct RandomArenaOptions {
    int min_states = 2;
    int max_states = 5;
    int max_actions = 3;  // per state; also the global action pool size
    int max_targets = 2;  // per (state, action)
    bool with_priorities = false;
    int max_priority = 4;
    bool deterministic = false;  // all probabilities 1
};

/// Random valid arena; probability splits use denominators up to 4.
inline Arena random_arena(Sampler& rng, const RandomArenaOptions& opt = {}) {
    const int n = rng.between(opt.min_states, opt.max_states);
    std::vector<std::string> state_names;
    std::vector<Player> owners;
    std::vector<int> prios;
    for (int s = 0; s < n; ++s) {
        state_names.push_back("q" + std::to_string(s));
        owners.push_back(rng.coin() ? Player::Max : Player::Min);
        if (opt.with_priorities) prios.push_back(rng.below(opt.max_priority + 1));
    }
    std::vector<std::string> action_names;
    for (int a = 0; a < opt.max_actions; ++a)
        action_names.push_back(std::string(1, static_cast<char>('a' + a)));

    static const std::vector<std::vector<Q>> splits2 = {
        {Q(1, 2), Q(1, 2)}, {Q(1, 4), Q(3, 4)}, {Q(3, 4), Q(1, 4)},
        {Q(1, 3), Q(2, 3)}, {Q(2, 3), Q(1, 3)}};
    static const std::vector<std::vector<Q>> splits3 = {
        {Q(1, 4), Q(1, 4), Q(1, 2)}, {Q(1, 2), Q(1, 4), Q(1, 4)}, {Q(1, 4), Q(1, 2), Q(1, 4)}};

    std::vector<Transition> ts;
    for (int s = 0; s < n; ++s) {
        const int k = rng.between(1, opt.max_actions);
        // the first k actions of a shuffled pool; keeps action sets varied
        std::vector<int> pool(opt.max_actions);
        for (int i = 0; i < opt.max_actions; ++i) pool[i] = i;
        for (int i = opt.max_actions - 1; i > 0; --i)
            std::swap(pool[i], pool[rng.below(i + 1)]);
        for (int ai = 0; ai < k; ++ai) {
            const int act = pool[ai];
            int support = opt.deterministic ? 1 : rng.between(1, std::min(opt.max_targets, 3));
            support = std::min(support, n);
            std::vector<int> targets(n);
            for (int i = 0; i < n; ++i) targets[i] = i;
            for (int i = n - 1; i > 0; --i) std::swap(targets[i], targets[rng.below(i + 1)]);
            const std::vector<Q>* probs = nullptr;
            if (support == 2) probs = &splits2[rng.below(static_cast<int>(splits2.size()))];
            if (support == 3) probs = &splits3[rng.below(static_cast<int>(splits3.size()))];
            for (int i = 0; i < support; ++i) {
                Transition tr;
                tr.from = s;
                tr.action = act;
                tr.to = targets[i];
                tr.prob = probs ? (*probs)[i] : Q(1);
                tr.reward = Q(rng.between(-2, 2), 1 + rng.below(2));
                ts.push_back(std::move(tr));
            }
        }
    }
    return Arena(std::move(state_names), std::move(owners), std::move(action_names),
                 std::move(ts), std::move(prios));
}

struct RandomLassoOptions {
    int max_prefix = 3;
    int max_cycle = 5;
    bool integer_letters = false;  // nonnegative integers (priorities)
    int max_letter = 4;
};

inline Lasso random_lasso(Sampler& rng, const RandomLassoOptions& opt = {}) {
    auto letter = [&]() {
        if (opt.integer_letters) return Q(rng.below(opt.max_letter + 1));
        return Q(rng.between(-opt.max_letter, opt.max_letter), 1 + rng.below(2));
    };
    Lasso l;
    const int p = rng.below(opt.max_prefix + 1);
    const int c = rng.between(1, opt.max_cycle);
    for (int i = 0; i < p; ++i) l.prefix.push_back(letter());
    for (int i = 0; i < c; ++i) l.cycle.push_back(letter());
    return l;
}

}  // namespace sgs
