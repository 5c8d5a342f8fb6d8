#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sgs/chain.hpp"

namespace sgs {

enum class PayoffTag {
    MeanPayoff,
    Parity,
    SimpleParity,
    Discounted,
    OvertakingDet,
    // falsifier-only payoffs, not solvable objectives
    LiminfMean,
    FirstReward,
};

struct Preference {
    PayoffTag tag = PayoffTag::MeanPayoff;
    Q beta;  // used by Discounted only

    static Preference mean() { return {PayoffTag::MeanPayoff, Q(0)}; }
    static Preference parity() { return {PayoffTag::Parity, Q(0)}; }
    static Preference simple_parity() { return {PayoffTag::SimpleParity, Q(0)}; }
    static Preference discounted(const Q& beta) { return {PayoffTag::Discounted, beta}; }
    static Preference overtaking() { return {PayoffTag::OvertakingDet, Q(0)}; }
    static Preference liminf_mean() { return {PayoffTag::LiminfMean, Q(0)}; }
    static Preference first_reward() { return {PayoffTag::FirstReward, Q(0)}; }

    friend bool operator==(const Preference&, const Preference&) = default;
};

inline std::string payoff_name(const Preference& p) {
    switch (p.tag) {
        case PayoffTag::MeanPayoff: return "mean";
        case PayoffTag::Parity: return "parity";
        case PayoffTag::SimpleParity: return "simple-parity";
        case PayoffTag::Discounted: return "discounted:" + to_string(p.beta);
        case PayoffTag::OvertakingDet: return "overtaking";
        case PayoffTag::LiminfMean: return "liminf-mean";
        case PayoffTag::FirstReward: return "first-reward";
    }
    return "?";
}

inline Preference parse_payoff(const std::string& name) {
    if (name == "mean") return Preference::mean();
    if (name == "parity") return Preference::parity();
    if (name == "simple-parity") return Preference::simple_parity();
    if (name == "overtaking") return Preference::overtaking();
    if (name == "liminf-mean") return Preference::liminf_mean();
    if (name == "first-reward") return Preference::first_reward();
    if (name.rfind("discounted:", 0) == 0) {
        Q beta = parse_rational(name.substr(11));
        if (beta <= 0 || beta >= 1) throw ParseError("discount factor must lie in (0,1)");
        return Preference::discounted(beta);
    }
    throw ParseError("unknown payoff: " + name);
}

/// Whether the preference is induced by a real-valued payoff (hence total).
inline bool is_payoff_induced(const Preference& p) {
    return p.tag != PayoffTag::OvertakingDet;
}

enum class Comparison { Less, Equal, Greater, Incomparable };

inline const char* comparison_name(Comparison c) {
    switch (c) {
        case Comparison::Less: return "Less";
        case Comparison::Equal: return "Equal";
        case Comparison::Greater: return "Greater";
        default: return "Incomparable";
    }
}

/// The statistic an outcome is reduced to: an exact rational for
/// payoff-induced preferences, the reward lasso for the deterministic
/// overtaking preference.
struct EvaluatedOutcome {
    PayoffTag tag = PayoffTag::MeanPayoff;
    bool lasso_valued = false;
    Q value;
    Lasso lasso;

    friend bool operator==(const EvaluatedOutcome&, const EvaluatedOutcome&) = default;
};

/// Overtaking order on ultimately periodic reward words: w1 is below w2 if
/// its partial sums are eventually pointwise below. Decided exactly: with
/// different cycle averages the larger average dominates; with equal
/// averages the difference of partial sums is periodic past the prefixes,
/// so one window of length 2*lcm(|c1|,|c2|) settles eventual dominance.
inline Comparison overtaking_compare(const Lasso& l1, const Lasso& l2) {
    if (l1.cycle.empty() || l2.cycle.empty()) throw Error("lasso cycle must be nonempty");
    auto cycle_sum = [](const Lasso& l) {
        Q s(0);
        for (const Q& q : l.cycle) s += q;
        return s;
    };
    const Q avg1 = cycle_sum(l1) / static_cast<int>(l1.cycle.size());
    const Q avg2 = cycle_sum(l2) / static_cast<int>(l2.cycle.size());
    if (avg1 < avg2) return Comparison::Less;
    if (avg1 > avg2) return Comparison::Greater;

    const std::size_t L = std::lcm(l1.cycle.size(), l2.cycle.size());
    const std::size_t start = std::max(l1.prefix.size(), l2.prefix.size()) + L;
    const std::size_t end = start + 2 * L;
    auto letter = [](const Lasso& l, std::size_t k) -> const Q& {  // 0-based position
        if (k < l.prefix.size()) return l.prefix[k];
        return l.cycle[(k - l.prefix.size()) % l.cycle.size()];
    };
    Q s1(0), s2(0);
    bool le = true, ge = true;
    for (std::size_t k = 0; k < end; ++k) {
        s1 += letter(l1, k);
        s2 += letter(l2, k);
        if (k + 1 <= start) continue;
        if (s1 > s2) le = false;
        if (s1 < s2) ge = false;
    }
    if (le && ge) return Comparison::Equal;
    if (le) return Comparison::Less;
    if (ge) return Comparison::Greater;
    return Comparison::Incomparable;
}

inline Comparison compare(const Preference& pref, const EvaluatedOutcome& o1,
                          const EvaluatedOutcome& o2) {
    if (o1.tag != pref.tag || o2.tag != pref.tag)
        throw TagMismatchError("outcomes evaluated under a different payoff");
    if (o1.lasso_valued != o2.lasso_valued)
        throw TagMismatchError("outcomes of different shapes");
    if (o1.lasso_valued) return overtaking_compare(o1.lasso, o2.lasso);
    if (o1.value < o2.value) return Comparison::Less;
    if (o1.value > o2.value) return Comparison::Greater;
    return Comparison::Equal;
}

/// Evaluates the profile's outcome statistic from every initial state.
inline std::vector<EvaluatedOutcome> evaluate_all(const Arena& a, const Profile& p,
                                                  const Preference& pref) {
    std::vector<EvaluatedOutcome> out(a.num_states());
    for (auto& o : out) o.tag = pref.tag;
    if (pref.tag == PayoffTag::OvertakingDet) {
        for (int s = 0; s < a.num_states(); ++s) {
            out[s].lasso_valued = true;
            out[s].lasso = lasso_of(a, s, p);
        }
        return out;
    }
    ProfileChain c = build_chain_all(a, p);
    std::vector<Q> v;
    switch (pref.tag) {
        case PayoffTag::MeanPayoff: v = mean_payoff_values(c); break;
        case PayoffTag::Parity: v = parity_values(a, c); break;
        case PayoffTag::SimpleParity: v = simple_parity_values(a, c); break;
        case PayoffTag::Discounted: v = discounted_values(c, pref.beta); break;
        default: throw Error("payoff " + payoff_name(pref) + " has no arena evaluator");
    }
    for (int s = 0; s < a.num_states(); ++s) out[s].value = v[c.node_of_state[s]];
    return out;
}

inline EvaluatedOutcome evaluate(const Arena& a, int s0, const Profile& p,
                                 const Preference& pref) {
    if (s0 < 0 || s0 >= a.num_states())
        throw UnknownStateError("index " + std::to_string(s0));
    EvaluatedOutcome o;
    o.tag = pref.tag;
    if (pref.tag == PayoffTag::OvertakingDet) {
        o.lasso_valued = true;
        o.lasso = lasso_of(a, s0, p);
        return o;
    }
    switch (pref.tag) {
        case PayoffTag::MeanPayoff: o.value = mean_payoff_value(a, s0, p); break;
        case PayoffTag::Parity: o.value = parity_value(a, s0, p); break;
        case PayoffTag::SimpleParity: o.value = simple_parity_value(a, s0, p); break;
        case PayoffTag::Discounted: o.value = discounted_value(a, s0, p, pref.beta); break;
        default: throw Error("payoff " + payoff_name(pref) + " has no arena evaluator");
    }
    return o;
}

inline std::string outcome_to_string(const EvaluatedOutcome& o) {
    return o.lasso_valued ? to_string(o.lasso) : to_string(o.value);
}

// ---------------------------------------------------------------------------
// Payoffs as functions of ultimately periodic reward words, used by the
// prefix-independence and sub-mixing testers.

inline Q eval_lasso(const Preference& pref, const Lasso& l) {
    if (l.cycle.empty()) throw Error("lasso cycle must be nonempty");
    auto as_priority = [](const Q& q) {
        if (denominator(q) != 1 || q < 0)
            throw Error("parity payoffs need nonnegative integer letters, got " + to_string(q));
        return static_cast<int>(numerator(q).convert_to<long>());
    };
    switch (pref.tag) {
        case PayoffTag::MeanPayoff:
        case PayoffTag::LiminfMean: {
            // the running average of an ultimately periodic word converges,
            // so limsup and liminf agree and equal the cycle average
            Q s(0);
            for (const Q& q : l.cycle) s += q;
            return s / static_cast<int>(l.cycle.size());
        }
        case PayoffTag::Parity: {
            int best = 0;
            for (const Q& q : l.cycle) best = std::max(best, as_priority(q));
            return Q(best % 2 == 0 ? 1 : 0);
        }
        case PayoffTag::SimpleParity: {
            int best = 0;
            for (const Q& q : l.prefix) best = std::max(best, as_priority(q));
            for (const Q& q : l.cycle) best = std::max(best, as_priority(q));
            return Q(best % 2 == 0 ? 1 : 0);
        }
        case PayoffTag::Discounted: {
            const Q& b = pref.beta;
            if (b <= 0 || b >= 1) throw Error("discount factor must lie in (0,1)");
            Q acc(0), w(1);
            for (const Q& q : l.prefix) {
                acc += w * q;
                w *= b;
            }
            Q cyc(0), w2 = w;
            for (const Q& q : l.cycle) {
                cyc += w2 * q;
                w2 *= b;
            }
            return acc + cyc / (Q(1) - q_pow(b, static_cast<unsigned>(l.cycle.size())));
        }
        case PayoffTag::FirstReward:
            return l.prefix.empty() ? l.cycle.front() : l.prefix.front();
        default:
            throw Error("payoff " + payoff_name(pref) + " is not a word payoff");
    }
}

/// The word with its first letter dropped.
inline Lasso drop_first(Lasso l) {
    if (!l.prefix.empty()) {
        l.prefix.erase(l.prefix.begin());
        return l;
    }
    std::rotate(l.cycle.begin(), l.cycle.begin() + 1, l.cycle.end());
    return l;
}

struct PrefixIndependenceWitness {
    std::size_t sample;
    int dropped;
    Q base, shifted;
    Lasso word;
};

/// Checks f(w) = f(w with k letters dropped) for k up to `drop` on every
/// sample; returns the first violation.
inline std::optional<PrefixIndependenceWitness> prefix_independent(
    const Preference& pref, const std::vector<Lasso>& samples, int drop) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Q base = eval_lasso(pref, samples[i]);
        Lasso w = samples[i];
        for (int k = 1; k <= drop; ++k) {
            w = drop_first(std::move(w));
            const Q shifted = eval_lasso(pref, w);
            if (shifted != base)
                return PrefixIndependenceWitness{i, k, base, shifted, samples[i]};
        }
    }
    return std::nullopt;
}

/// Interleaves two ultimately periodic words under a cyclic pattern
/// (true = take the next letter of w1). The result is ultimately periodic;
/// the lasso is found by running the three cursors until they revisit a
/// configuration.
inline Lasso shuffle_words(const Lasso& w1, const Lasso& w2, const std::vector<bool>& pattern) {
    if (pattern.empty()) throw Error("empty interleaving pattern");
    bool any1 = false, any2 = false;
    for (bool b : pattern) (b ? any1 : any2) = true;
    if (!any1 || !any2) throw Error("interleaving pattern must use both words");
    auto step = [](const Lasso& w, std::size_t pos) -> std::size_t {
        ++pos;
        if (pos >= w.prefix.size() + w.cycle.size()) pos = w.prefix.size();
        return pos;
    };
    auto letter = [](const Lasso& w, std::size_t pos) -> const Q& {
        return pos < w.prefix.size() ? w.prefix[pos] : w.cycle[pos - w.prefix.size()];
    };
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> seen;
    std::vector<Q> letters;
    std::size_t pi = 0, p1 = 0, p2 = 0;
    for (;;) {
        auto key = std::make_tuple(pi, p1, p2);
        auto it = seen.find(key);
        if (it != seen.end()) {
            Lasso out;
            out.prefix.assign(letters.begin(), letters.begin() + it->second);
            out.cycle.assign(letters.begin() + it->second, letters.end());
            return out;
        }
        seen.emplace(key, letters.size());
        if (pattern[pi]) {
            letters.push_back(letter(w1, p1));
            p1 = step(w1, p1);
        } else {
            letters.push_back(letter(w2, p2));
            p2 = step(w2, p2);
        }
        pi = (pi + 1) % pattern.size();
    }
}

struct SubMixingWitness {
    std::size_t pair;
    std::vector<bool> pattern;
    Lasso shuffled;
    Q f_shuffle, f1, f2;
};

/// Falsifier for the sub-mixing inequality f(shuffle) <= max(f(w1), f(w2)):
/// tries every cyclic interleaving pattern up to the given length on every
/// sampled pair. Patterns are periodic only, so this can refute but never
/// prove the property (which quantifies over arbitrary partitions).
inline std::optional<SubMixingWitness> sub_mixing(const Preference& pref,
                                                  const std::vector<std::pair<Lasso, Lasso>>& pairs,
                                                  int max_pattern_len) {
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        const Q f1 = eval_lasso(pref, pairs[pi].first);
        const Q f2 = eval_lasso(pref, pairs[pi].second);
        const Q bound = std::max(f1, f2);
        for (int len = 2; len <= max_pattern_len; ++len) {
            for (unsigned long v = 1; v + 1 < (1ul << len); ++v) {
                std::vector<bool> pattern(len);
                for (int b = 0; b < len; ++b) pattern[b] = (v >> (len - 1 - b)) & 1ul;
                Lasso z = shuffle_words(pairs[pi].first, pairs[pi].second, pattern);
                const Q fz = eval_lasso(pref, z);
                if (fz > bound) return SubMixingWitness{pi, pattern, z, fz, f1, f2};
            }
        }
    }
    return std::nullopt;
}

}  // namespace sgs
