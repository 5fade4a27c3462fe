#pragma once

#include <string>

#include <json.hpp>

#include "minidyn/engine.hpp"
#include "minidyn/state.hpp"

namespace minidyn {

inline nlohmann::json valueToJson(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Int: return {{"int", v.asInt()}};
        case Value::Kind::Str: return {{"str", v.asStr()}};
        case Value::Kind::Star: return "star";
        case Value::Kind::Undef: return "undef";
        case Value::Kind::Bullet: return "bullet"; // never in value sets
    }
    return nullptr;
}

/// "$arr[2][1]" display form of a canonical path; the unknown field prints
/// as •.
inline std::string displayPath(const ConcretePath& p) {
    std::string out;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i == 0)
            out += "$" + p[i].toString();
        else
            out += "[" + p[i].toString() + "]";
    }
    return out.empty() ? "$" : out;
}

inline nlohmann::json stateToJson(const State& s) {
    nlohmann::json vars = nlohmann::json::array();
    // canonical order: walk the forest depth-first, children by index name
    std::vector<VarId> stack{s.root()};
    while (!stack.empty()) {
        VarId v = stack.back();
        stack.pop_back();
        const Variable& var = s.var(v);
        for (auto it = var.children.rbegin(); it != var.children.rend(); ++it)
            stack.push_back(it->second);
        if (v == s.root()) continue;
        nlohmann::json entry;
        entry["path"] = displayPath(s.pathOf(v));
        nlohmann::json vals = nlohmann::json::array();
        for (const Value& val : s.values(v)) vals.push_back(valueToJson(val));
        entry["values"] = std::move(vals);
        nlohmann::json musts = nlohmann::json::array(),
                       mays = nlohmann::json::array();
        for (VarId a : s.mustAliases(v))
            if (a != v) musts.push_back(displayPath(s.pathOf(a)));
        for (VarId a : s.mayAliases(v)) mays.push_back(displayPath(s.pathOf(a)));
        entry["mustAliases"] = std::move(musts);
        entry["mayAliases"] = std::move(mays);
        vars.push_back(std::move(entry));
    }
    return {{"vars", std::move(vars)}};
}

inline nlohmann::json analysisToJson(const Cfg& cfg, const AnalysisResult& res) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const CfgNode& n : cfg.nodes) {
        nlohmann::json e;
        e["id"] = n.id;
        e["kind"] = kindName(n.kind);
        e["line"] = n.span.line;
        if (res.out[n.id]) e["out"] = stateToJson(*res.out[n.id]);
        nodes.push_back(std::move(e));
    }
    nlohmann::json widenings = nlohmann::json::array();
    for (const auto& w : res.widenings)
        widenings.push_back({{"node", w.node}, {"path", w.path}});
    return {{"nodes", std::move(nodes)},
            {"iterations", res.iterations},
            {"widenings", std::move(widenings)}};
}

} // namespace minidyn
