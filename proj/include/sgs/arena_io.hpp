#pragma once

#include <fstream>
#include <string>

#include "json.hpp"
#include "sgs/arena.hpp"

namespace sgs {

/// Arena document format: a JSON object with "states" (array of
/// {name, owner, priority?}), "actions" (array of names) and "transitions"
/// (array of {from, action, to, prob, reward}). Probabilities and rewards
/// are strings holding exact rationals; floating point numbers are
/// rejected outright.
inline Arena arena_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("arena document must be a JSON object");
    if (!j.contains("states") || !j.contains("actions") || !j.contains("transitions"))
        throw ParseError("arena document needs states, actions and transitions");

    std::vector<std::string> state_names;
    std::vector<Player> owners;
    std::vector<int> priorities;
    bool any_prio = false;
    for (const auto& s : j.at("states")) {
        state_names.push_back(s.at("name").get<std::string>());
        const std::string owner = s.at("owner").get<std::string>();
        if (owner != "Max" && owner != "Min")
            throw ParseError("state owner must be Max or Min, got '" + owner + "'");
        owners.push_back(owner == "Max" ? Player::Max : Player::Min);
        if (s.contains("priority")) {
            if (!s.at("priority").is_number_integer())
                throw ParseError("priority must be an integer");
            priorities.push_back(s.at("priority").get<int>());
            any_prio = true;
        } else {
            priorities.push_back(-1);
        }
    }
    if (any_prio)
        for (int p : priorities)
            if (p < 0) throw ParseError("priorities must be given for all states or none");
    if (!any_prio) priorities.clear();

    std::vector<std::string> action_names;
    for (const auto& a : j.at("actions")) action_names.push_back(a.get<std::string>());

    auto index_of = [](const std::vector<std::string>& names, const std::string& name,
                       const char* what) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw ParseError(std::string("unknown ") + what + ": '" + name + "'");
    };
    auto rational_field = [](const nlohmann::json& t, const char* field) {
        const auto& v = t.at(field);
        if (!v.is_string())
            throw ParseError(std::string(field) +
                             " must be a string holding an exact rational, e.g. \"1/2\"");
        return parse_rational(v.get<std::string>());
    };

    std::vector<Transition> ts;
    for (const auto& t : j.at("transitions")) {
        Transition tr;
        tr.from = index_of(state_names, t.at("from").get<std::string>(), "state");
        tr.action = index_of(action_names, t.at("action").get<std::string>(), "action");
        tr.to = index_of(state_names, t.at("to").get<std::string>(), "state");
        tr.prob = rational_field(t, "prob");
        tr.reward = rational_field(t, "reward");
        ts.push_back(std::move(tr));
    }
    return Arena(std::move(state_names), std::move(owners), std::move(action_names),
                 std::move(ts), std::move(priorities));
}

inline Arena parse_arena(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return arena_from_json(j);
}

inline Arena load_arena(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_arena(text);
}

inline nlohmann::json arena_to_json(const Arena& a) {
    nlohmann::json j;
    j["states"] = nlohmann::json::array();
    for (int s = 0; s < a.num_states(); ++s) {
        nlohmann::json st;
        st["name"] = a.state_name(s);
        st["owner"] = player_name(a.owner(s));
        if (a.has_priorities()) st["priority"] = a.priority(s);
        j["states"].push_back(std::move(st));
    }
    j["actions"] = a.action_names();
    j["transitions"] = nlohmann::json::array();
    for (const Transition& t : a.transitions()) {
        nlohmann::json tr;
        tr["from"] = a.state_name(t.from);
        tr["action"] = a.action_name(t.action);
        tr["to"] = a.state_name(t.to);
        tr["prob"] = to_string(t.prob);
        tr["reward"] = to_string(t.reward);
        j["transitions"].push_back(std::move(tr));
    }
    return j;
}

inline std::string arena_to_text(const Arena& a) { return arena_to_json(a).dump(2) + "\n"; }

inline void save_arena(const std::string& path, const Arena& a) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << arena_to_text(a);
}

}  // namespace sgs
