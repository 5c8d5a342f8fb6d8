#pragma once

#include <sstream>
#include <string>

#include "sgs/split.hpp"

namespace sgs {

namespace detail {

inline std::string dot_state_attrs(const Arena& a, int s, const std::string& fill) {
    std::ostringstream out;
    out << "[shape=" << (a.owner(s) == Player::Max ? "box" : "diamond");
    if (a.has_priorities()) out << ",xlabel=\"" << a.priority(s) << "\"";
    if (!fill.empty()) out << ",style=filled,fillcolor=\"" << fill << "\"";
    out << "]";
    return out.str();
}

inline void dot_edges(std::ostringstream& out, const Arena& a) {
    for (const Transition& t : a.transitions()) {
        out << "  \"" << a.state_name(t.from) << "\" -> \"" << a.state_name(t.to)
            << "\" [label=\"" << a.action_name(t.action) << "," << to_string(t.prob);
        if (t.reward != 0) out << ",r=" << to_string(t.reward);
        out << "\"];\n";
    }
}

}  // namespace detail

/// Graphviz rendering; Max states are boxes, Min states diamonds.
inline std::string to_dot(const Arena& a, const std::string& name = "arena") {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
    for (int s = 0; s < a.num_states(); ++s)
        out << "  \"" << a.state_name(s) << "\" " << detail::dot_state_attrs(a, s, "") << ";\n";
    detail::dot_edges(out, a);
    out << "}\n";
    return out.str();
}

/// Split arenas are rendered with one fill color per copy; the separation
/// state stays uncolored.
inline std::string to_dot(const SplitResult& sr, const std::string& name = "split") {
    static const char* palette[] = {"lightblue",  "lightgreen", "lightsalmon",
                                    "lightyellow", "plum",       "lightcyan"};
    const Arena& a = sr.split_arena;
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
    for (int s = 0; s < a.num_states(); ++s) {
        std::string fill;
        if (s != sr.omega_split)
            fill = palette[sr.copy_pos_[sr.copy_index[s]] % (sizeof(palette) / sizeof(*palette))];
        out << "  \"" << a.state_name(s) << "\" " << detail::dot_state_attrs(a, s, fill)
            << ";\n";
    }
    detail::dot_edges(out, a);
    out << "}\n";
    return out.str();
}

}  // namespace sgs
