#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "sgs/arena.hpp"
#include "sgs/linalg.hpp"
#include "sgs/strategy.hpp"

namespace sgs {

struct ChainNode {
    int state;    // arena state
    int mem_max;  // Max strategy memory
    int mem_min;  // Min strategy memory

    friend bool operator==(const ChainNode&, const ChainNode&) = default;
};

struct ChainEdge {
    int to;
    Q prob;
    Q reward;
};

/// The finite Markov chain a deterministic finite-memory profile induces on
/// an arena: nodes are reachable (state, memory, memory) triples, each with
/// one chosen action and the arena's probability branching underneath.
struct ProfileChain {
    std::vector<ChainNode> nodes;
    std::vector<int> chosen;  // action taken at each node
    std::vector<std::vector<ChainEdge>> edges;
    int initial = 0;
    std::vector<int> node_of_state;  // start node per arena state, -1 if not built
};

namespace detail {

inline ProfileChain build_chain_impl(const Arena& a, const std::vector<int>& starts,
                                     const Profile& p) {
    validate_profile(a, p);
    const FMStrategy fmax = as_fm(a, p.max_strategy);
    const FMStrategy fmin = as_fm(a, p.min_strategy);
    ProfileChain c;
    c.node_of_state.assign(a.num_states(), -1);
    std::map<std::tuple<int, int, int>, int> index;
    std::vector<int> queue;
    auto intern = [&](int s, int mx, int mn) {
        auto [it, fresh] = index.try_emplace({s, mx, mn}, static_cast<int>(c.nodes.size()));
        if (fresh) {
            c.nodes.push_back({s, mx, mn});
            queue.push_back(it->second);
        }
        return it->second;
    };
    for (int s : starts) {
        int id = intern(s, fmax.initial, fmin.initial);
        if (c.node_of_state[s] == -1) c.node_of_state[s] = id;
    }
    c.initial = starts.empty() ? 0 : c.node_of_state[starts[0]];
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int id = queue[qi];
        ChainNode nd = c.nodes[id];
        int act = a.owner(nd.state) == Player::Max ? fmax.choice[nd.mem_max][nd.state]
                                                   : fmin.choice[nd.mem_min][nd.state];
        c.chosen.resize(c.nodes.size(), -1);
        c.chosen[id] = act;
        c.edges.resize(c.nodes.size());
        auto [lo, hi] = a.group(nd.state, act);
        for (int i = lo; i < hi; ++i) {
            const Transition& t = a.transition(i);
            int to = intern(t.to, fmax.update[nd.mem_max][i], fmin.update[nd.mem_min][i]);
            c.edges.resize(c.nodes.size());
            c.edges[id].push_back({to, t.prob, t.reward});
        }
    }
    c.chosen.resize(c.nodes.size(), -1);
    c.edges.resize(c.nodes.size());
    return c;
}

/// Strongly connected components of a successor graph, iterative Tarjan.
/// Components are renumbered so that they are ordered by smallest member.
inline std::vector<std::vector<int>> scc_components(
    int n, const std::vector<std::vector<ChainEdge>>& edges) {
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> comps;
    int counter = 0;
    struct Frame {
        int v;
        std::size_t ei;
    };
    for (int root = 0; root < n; ++root) {
        if (idx[root] != -1) continue;
        std::vector<Frame> call{{root, 0}};
        idx[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.ei < edges[f.v].size()) {
                int w = edges[f.v][f.ei++].to;
                if (idx[w] == -1) {
                    idx[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], idx[w]);
                }
            } else {
                int v = f.v;
                call.pop_back();
                if (low[v] == idx[v]) {
                    std::vector<int> comp_nodes;
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = static_cast<int>(comps.size());
                        comp_nodes.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(comp_nodes.begin(), comp_nodes.end());
                    comps.push_back(std::move(comp_nodes));
                }
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& x, const auto& y) { return x[0] < y[0]; });
    return comps;
}

}  // namespace detail

/// Chain of the profile started at s0; nodes are the reachable product of
/// the arena with both memories (states alone for stationary profiles).
inline ProfileChain build_chain(const Arena& a, int s0, const Profile& p) {
    if (s0 < 0 || s0 >= a.num_states())
        throw UnknownStateError("index " + std::to_string(s0));
    return detail::build_chain_impl(a, {s0}, p);
}

/// Chain with every arena state as a potential start; node_of_state maps
/// each state to its start node. Lets one analysis serve all initial states.
inline ProfileChain build_chain_all(const Arena& a, const Profile& p) {
    std::vector<int> starts(a.num_states());
    for (int s = 0; s < a.num_states(); ++s) starts[s] = s;
    return detail::build_chain_impl(a, starts, p);
}

/// Recurrence structure of a ProfileChain: bottom strongly connected
/// components are the recurrent classes; absorption probabilities and the
/// per-class stationary distributions come from exact linear solves.
struct ChainAnalysis {
    std::vector<std::vector<int>> classes;  // recurrent classes (node ids, sorted)
    std::vector<int> class_of;              // node -> class index or -1 (transient)
    std::vector<std::vector<Q>> absorption;  // [node][class]
    std::vector<std::vector<Q>> stationary;  // [class][position within class]
    std::vector<Q> class_mean_gain;          // stationary-weighted mean edge reward
};

inline ChainAnalysis analyze(const ProfileChain& c) {
    const int n = static_cast<int>(c.nodes.size());
    for (int v = 0; v < n; ++v) {
        Q total(0);
        for (const ChainEdge& e : c.edges[v]) {
            if (e.prob <= 0) throw Error("chain edge with non-positive probability");
            total += e.prob;
        }
        if (total != 1) throw Error("chain node with probability mass != 1");
    }
    ChainAnalysis out;
    auto comps = detail::scc_components(n, c.edges);
    out.class_of.assign(n, -1);
    for (const auto& comp : comps) {
        bool bottom = true;
        for (int v : comp)
            for (const ChainEdge& e : c.edges[v])
                if (std::find(comp.begin(), comp.end(), e.to) == comp.end()) bottom = false;
        if (!bottom) continue;
        for (int v : comp) out.class_of[v] = static_cast<int>(out.classes.size());
        out.classes.push_back(comp);
    }
    const int k = static_cast<int>(out.classes.size());

    // absorption probabilities
    std::vector<int> transient, trow(n, -1);
    for (int v = 0; v < n; ++v)
        if (out.class_of[v] == -1) {
            trow[v] = static_cast<int>(transient.size());
            transient.push_back(v);
        }
    out.absorption.assign(n, std::vector<Q>(k, Q(0)));
    for (int v = 0; v < n; ++v)
        if (out.class_of[v] != -1) out.absorption[v][out.class_of[v]] = 1;
    if (!transient.empty()) {
        const int m = static_cast<int>(transient.size());
        QMatrix a(m, std::vector<Q>(m, Q(0)));
        QMatrix b(m, std::vector<Q>(k, Q(0)));
        for (int i = 0; i < m; ++i) {
            a[i][i] = 1;
            for (const ChainEdge& e : c.edges[transient[i]]) {
                if (trow[e.to] != -1)
                    a[i][trow[e.to]] -= e.prob;
                else
                    b[i][out.class_of[e.to]] += e.prob;
            }
        }
        QMatrix u = solve_linear(std::move(a), std::move(b));
        for (int i = 0; i < m; ++i) out.absorption[transient[i]] = u[i];
    }

    // stationary distribution and mean gain per class
    for (const auto& comp : out.classes) {
        const int m = static_cast<int>(comp.size());
        std::vector<int> pos(n, -1);
        for (int i = 0; i < m; ++i) pos[comp[i]] = i;
        QMatrix a(m, std::vector<Q>(m, Q(0)));
        QMatrix b(m, std::vector<Q>(1, Q(0)));
        // rows 1..m-1: (P^T - I) pi = 0; row 0: normalization
        for (int j = 0; j < m; ++j) a[0][j] = 1;
        b[0][0] = 1;
        for (int j = 0; j < m; ++j) {
            for (const ChainEdge& e : c.edges[comp[j]]) {
                int i = pos[e.to];
                if (i > 0) a[i][j] += e.prob;
            }
            if (j > 0) a[j][j] -= 1;
        }
        QMatrix pi = solve_linear(std::move(a), std::move(b));
        std::vector<Q> st(m);
        Q gain(0);
        for (int i = 0; i < m; ++i) {
            st[i] = pi[i][0];
            Q step(0);
            for (const ChainEdge& e : c.edges[comp[i]]) step += e.prob * e.reward;
            gain += st[i] * step;
        }
        out.stationary.push_back(std::move(st));
        out.class_mean_gain.push_back(std::move(gain));
    }
    return out;
}

/// Expected limsup-average reward per node. On a finite chain the running
/// average converges almost surely to the gain of the recurrent class the
/// run is absorbed in, so the value is the absorption-weighted class gain.
inline std::vector<Q> mean_payoff_values(const ProfileChain& c) {
    ChainAnalysis an = analyze(c);
    std::vector<Q> v(c.nodes.size(), Q(0));
    for (std::size_t i = 0; i < c.nodes.size(); ++i)
        for (std::size_t k = 0; k < an.classes.size(); ++k)
            v[i] += an.absorption[i][k] * an.class_mean_gain[k];
    return v;
}

/// Probability that the maximal priority visited infinitely often is even:
/// absorption mass of the recurrent classes whose maximal state priority is
/// even.
inline std::vector<Q> parity_values(const Arena& a, const ProfileChain& c) {
    if (!a.has_priorities()) throw MissingPrioritiesError();
    ChainAnalysis an = analyze(c);
    std::vector<Q> v(c.nodes.size(), Q(0));
    for (std::size_t k = 0; k < an.classes.size(); ++k) {
        int best = 0;
        for (int node : an.classes[k]) best = std::max(best, a.priority(c.nodes[node].state));
        if (best % 2 != 0) continue;
        for (std::size_t i = 0; i < c.nodes.size(); ++i) v[i] += an.absorption[i][k];
    }
    return v;
}

/// Probability that the supremum of visited priorities (the initial state
/// included) is even. Computed on the chain augmented with a running-max
/// component; within a recurrent class of the augmented chain the running
/// max is constant and equals the supremum of the whole run.
inline std::vector<Q> simple_parity_values(const Arena& a, const ProfileChain& c) {
    if (!a.has_priorities()) throw MissingPrioritiesError();
    std::vector<int> prios = a.priorities();
    std::sort(prios.begin(), prios.end());
    prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
    const int K = static_cast<int>(prios.size());
    auto ppos = [&](int p) {
        return static_cast<int>(std::lower_bound(prios.begin(), prios.end(), p) - prios.begin());
    };
    const int n = static_cast<int>(c.nodes.size());
    ProfileChain aug;
    aug.nodes.resize(n * K);
    aug.edges.resize(n * K);
    aug.chosen.assign(n * K, -1);
    for (int v = 0; v < n; ++v) {
        for (int mi = 0; mi < K; ++mi) {
            int id = v * K + mi;
            aug.nodes[id] = {c.nodes[v].state, prios[mi], v};
            for (const ChainEdge& e : c.edges[v]) {
                int m2 = std::max(prios[mi], a.priority(c.nodes[e.to].state));
                aug.edges[id].push_back({e.to * K + ppos(m2), e.prob, Q(0)});
            }
        }
    }
    ChainAnalysis an = analyze(aug);
    std::vector<Q> v(n, Q(0));
    for (std::size_t k = 0; k < an.classes.size(); ++k) {
        int runmax = aug.nodes[an.classes[k][0]].mem_max;
        for (int node : an.classes[k])
            if (aug.nodes[node].mem_max != runmax)
                throw Error("internal: running max not constant on a recurrent class");
        if (runmax % 2 != 0) continue;
        for (int node = 0; node < n; ++node) {
            int start = node * K + ppos(a.priority(c.nodes[node].state));
            v[node] += an.absorption[start][k];
        }
    }
    return v;
}

/// Expected total discounted reward: the unique solution of
/// v = r_avg + beta * P v, solved exactly.
inline std::vector<Q> discounted_values(const ProfileChain& c, const Q& beta) {
    if (beta <= 0 || beta >= 1) throw Error("discount factor must lie in (0,1)");
    const int n = static_cast<int>(c.nodes.size());
    QMatrix a(n, std::vector<Q>(n, Q(0)));
    QMatrix b(n, std::vector<Q>(1, Q(0)));
    for (int v = 0; v < n; ++v) {
        a[v][v] += 1;
        for (const ChainEdge& e : c.edges[v]) {
            a[v][e.to] -= beta * e.prob;
            b[v][0] += e.prob * e.reward;
        }
    }
    QMatrix sol = solve_linear(std::move(a), std::move(b));
    std::vector<Q> out(n);
    for (int v = 0; v < n; ++v) out[v] = sol[v][0];
    return out;
}

inline Q mean_payoff_value(const Arena& a, int s0, const Profile& p) {
    ProfileChain c = build_chain(a, s0, p);
    return mean_payoff_values(c)[c.initial];
}
inline Q parity_value(const Arena& a, int s0, const Profile& p) {
    ProfileChain c = build_chain(a, s0, p);
    return parity_values(a, c)[c.initial];
}
inline Q simple_parity_value(const Arena& a, int s0, const Profile& p) {
    ProfileChain c = build_chain(a, s0, p);
    return simple_parity_values(a, c)[c.initial];
}
inline Q discounted_value(const Arena& a, int s0, const Profile& p, const Q& beta) {
    ProfileChain c = build_chain(a, s0, p);
    return discounted_values(c, beta)[c.initial];
}

/// Ultimately periodic reward word prefix . cycle^omega.
struct Lasso {
    std::vector<Q> prefix;
    std::vector<Q> cycle;

    friend bool operator==(const Lasso&, const Lasso&) = default;
};

/// Canonical form: cycle reduced to its primitive root, then the prefix
/// shortened by rotating shared tail letters into the cycle.
inline Lasso normalize(Lasso l) {
    if (l.cycle.empty()) throw Error("lasso cycle must be nonempty");
    auto primitive = [](std::vector<Q> w) {
        const std::size_t n = w.size();
        for (std::size_t d = 1; d <= n / 2; ++d) {
            if (n % d != 0) continue;
            bool ok = true;
            for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
            if (ok) return std::vector<Q>(w.begin(), w.begin() + d);
        }
        return w;
    };
    l.cycle = primitive(std::move(l.cycle));
    while (!l.prefix.empty() && l.prefix.back() == l.cycle.back()) {
        l.prefix.pop_back();
        std::rotate(l.cycle.rbegin(), l.cycle.rbegin() + 1, l.cycle.rend());
    }
    return l;
}

inline std::string to_string(const Lasso& l) {
    std::string out = "(";
    for (std::size_t i = 0; i < l.prefix.size(); ++i)
        out += (i ? "," : "") + to_string(l.prefix[i]);
    out += ")(";
    for (std::size_t i = 0; i < l.cycle.size(); ++i)
        out += (i ? "," : "") + to_string(l.cycle[i]);
    return out + ")^w";
}

/// The reward word of the unique run of a stationary deterministic profile
/// on a deterministic arena, in canonical lasso form.
inline Lasso lasso_of(const Arena& a, int s0, const Profile& p) {
    if (!is_deterministic(a))
        throw NotDeterministicError("lasso_of needs a deterministic arena");
    if (!is_ds(p.max_strategy) || !is_ds(p.min_strategy))
        throw NotDeterministicError("lasso_of needs a stationary deterministic profile");
    validate_profile(a, p);
    std::vector<int> seen_at(a.num_states(), -1);
    std::vector<Q> rewards;
    int s = s0;
    for (;;) {
        if (seen_at[s] != -1) break;
        seen_at[s] = static_cast<int>(rewards.size());
        int act = a.owner(s) == Player::Max ? std::get<DSStrategy>(p.max_strategy).choice[s]
                                            : std::get<DSStrategy>(p.min_strategy).choice[s];
        auto [lo, hi] = a.group(s, act);
        if (hi - lo != 1) throw NotDeterministicError("state has branching transitions");
        rewards.push_back(a.transition(lo).reward);
        s = a.transition(lo).to;
    }
    Lasso l;
    l.prefix.assign(rewards.begin(), rewards.begin() + seen_at[s]);
    l.cycle.assign(rewards.begin() + seen_at[s], rewards.end());
    return normalize(std::move(l));
}

}  // namespace sgs
