#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minidyn/cfg.hpp"
#include "minidyn/merge.hpp"
#include "minidyn/write.hpp"

namespace minidyn {

struct EngineConfig {
    uint32_t depthLimit = 8;
    uint32_t valueWidthLimit = 16;
    uint32_t maxIterations = 10000;
    // Structural safety valve: states larger than this many variables have
    // their deepest subtrees collapsed into saturated unknown-field chains
    // (same degradation the merge applies to unrepresentable aliases).
    uint32_t varCapLimit = 3000;
    // test hooks
    bool disableWeakUpdates = false; // soundness-oracle sensitivity check
    bool reverseWorklist = false;    // determinism check: alternate order
    bool validateEachStep = false;   // run validate() after every transfer
};

struct WideningEvent {
    int node;
    std::string path;
};

struct AnalysisResult {
    std::vector<std::optional<State>> in, out; // indexed by node id
    uint32_t iterations = 0;
    std::vector<WideningEvent> widenings;
};

/// §3.6 width widening: literal values beyond the limit collapse to *,
/// preserving Undef. Extensive and idempotent.
inline bool widen(State& s, uint32_t valueWidthLimit,
                  std::vector<std::string>* widenedPaths = nullptr) {
    bool any = false;
    for (VarId v : s.allVars()) {
        const ValueSet& vals = s.values(v);
        if (vals.size() <= valueWidthLimit) continue;
        ValueSet out{Value::star()};
        if (contains(vals, Value::undef())) out.insert(Value::undef());
        if (out == vals) continue;
        if (widenedPaths) widenedPaths->push_back(concretePathToString(s.pathOf(v)));
        s.setValues(v, std::move(out));
        any = true;
    }
    return any;
}

/// Structural widening: when the state outgrows `varCap` variables, every
/// variable at the shallowest depth whose cumulative population fits the
/// budget is collapsed — its subtree is replaced by a saturated unknown
/// field ({*, Undef}, childless), and aliases into the dropped region
/// degrade to may-aliases on that unknown field. Sound: * covers every
/// concrete value a collapsed descendant could hold, the saturated field
/// absorbs reads and writes at every remaining depth, and the may links
/// keep cross-region reference updates observable.
inline bool structuralWiden(State& s, uint32_t varCap,
                            std::vector<std::string>* widenedPaths = nullptr) {
    std::vector<VarId> all = s.allVars();
    if (varCap == 0 || all.size() <= varCap) return false;
    std::vector<size_t> perDepth(s.depthLimit() + 2, 0);
    for (VarId v : all) {
        uint32_t d = std::min<uint32_t>(s.depthOf(v), s.depthLimit() + 1);
        perDepth[d]++;
    }
    uint32_t cut = 1;
    size_t cum = perDepth[0] + perDepth[1];
    while (cut < s.depthLimit() &&
           cum + perDepth[cut + 1] <= varCap / 2) {
        cut++;
        cum += perDepth[cut];
    }
    bool any = false;
    for (VarId v : all) {
        if (!s.isDefined(v)) continue; // dropped by an earlier collapse
        if (s.depthOf(v) != cut || s.var(v).children.empty()) continue;
        // aliases reaching into the subtree degrade to may on the chain
        std::set<VarId> inside;
        std::vector<VarId> stack{v};
        while (!stack.empty()) {
            VarId c = stack.back();
            stack.pop_back();
            for (const auto& [name, child] : s.var(c).children) {
                inside.insert(child);
                stack.push_back(child);
            }
        }
        std::set<VarId> partners;
        for (VarId d : inside)
            for (VarId p : s.aliases(d))
                if (p != d && !inside.count(p) && p != v) partners.insert(p);
        s.dropDescendants(v);
        // a childless {*, Undef} unknown field is saturated: it absorbs
        // every deeper read and write, covering all dropped content
        VarId unk = s.createIndex(v, Value::bullet());
        s.setValues(unk, ValueSet{Value::star(), Value::undef()});
        for (VarId p : partners)
            if (s.isDefined(p)) s.addMay(unk, p);
        if (widenedPaths)
            widenedPaths->push_back(concretePathToString(s.pathOf(v)));
        any = true;
    }
    return any;
}

namespace detail {

inline State transfer(const CfgNode& node, const State& in, bool disableWeak) {
    switch (node.kind) {
        case CfgNode::Kind::Assign: {
            const Stmt& s = *node.stmt;
            AccessPath lhs = lowerAccess(s.lhs);
            if (s.rhs->kind == Expr::Kind::Access) {
                AccessPath rhsPath = lowerAccess(s.rhs->access);
                return applyAssign(in, lhs, nullptr, &rhsPath, disableWeak);
            }
            ContentTree lit = literalContent(
                s.rhs->kind == Expr::Kind::UnknownInput
                    ? ValueSet{Value::star()}
                    : ValueSet{s.rhs->lit.toValue()});
            return applyAssign(in, lhs, &lit, nullptr, disableWeak);
        }
        case CfgNode::Kind::Alias: {
            const Stmt& s = *node.stmt;
            return applyAlias(in, lowerAccess(s.lhs),
                              lowerAccess(s.aliasRhs), disableWeak);
        }
        default:
            return in; // entry/exit/branch/join: identity (merge happens in IN)
    }
}

inline std::vector<int> rpoOrder(const Cfg& cfg) {
    std::vector<int> order;
    std::vector<char> mark(cfg.nodes.size(), 0);
    std::vector<std::pair<int, size_t>> stack{{cfg.entry, 0}};
    mark[cfg.entry] = 1;
    while (!stack.empty()) {
        auto& [n, i] = stack.back();
        if (i < cfg.nodes[n].succs.size()) {
            int s = cfg.nodes[n].succs[i++];
            if (!mark[s]) {
                mark[s] = 1;
                stack.push_back({s, 0});
            }
        } else {
            order.push_back(n);
            stack.pop_back();
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

} // namespace detail

/// §3.2 worklist fixpoint over the CFG. Stabilization is detected by
/// path-isomorphism of OUT states (VarIds are not stable across merges).
inline AnalysisResult analyze(const Cfg& cfg, const EngineConfig& cfg2 = {}) {
    const EngineConfig& config = cfg2;
    AnalysisResult res;
    res.in.resize(cfg.nodes.size());
    res.out.resize(cfg.nodes.size());
    std::vector<std::string> outKey(cfg.nodes.size());

    std::vector<int> order = detail::rpoOrder(cfg);
    std::vector<int> priority(cfg.nodes.size(), 0);
    for (size_t i = 0; i < order.size(); ++i) priority[order[i]] = (int)i;

    auto better = [&](int a, int b) {
        return config.reverseWorklist ? priority[a] > priority[b]
                                      : priority[a] < priority[b];
    };

    std::vector<char> queued(cfg.nodes.size(), 0);
    std::vector<int> worklist{cfg.entry};
    queued[cfg.entry] = 1;
    uint32_t iterations = 0;

    while (!worklist.empty()) {
        if (++iterations > config.maxIterations)
            throw AnalysisError(AnalysisError::Code::IterationLimitExceeded,
                                "fixpoint iteration limit exceeded");
        auto it = std::min_element(worklist.begin(), worklist.end(), better);
        int n = *it;
        worklist.erase(it);
        queued[n] = 0;

        State inState(config.depthLimit);
        if (n != cfg.entry) {
            std::vector<const State*> preds;
            for (int p : cfg.nodes[n].preds)
                if (res.out[p]) preds.push_back(&*res.out[p]);
            if (preds.empty()) continue; // unreachable so far (loop body first pass)
            inState = mergeStates(preds);
        }
        State outState =
            detail::transfer(cfg.nodes[n], inState, config.disableWeakUpdates);
        std::vector<std::string> widened;
        widen(outState, config.valueWidthLimit, &widened);
        structuralWiden(outState, config.varCapLimit, &widened);
        for (auto& w : widened) res.widenings.push_back({n, std::move(w)});
        if (config.validateEachStep) validate(outState);

        std::string key = canonicalSerialize(outState);
        res.in[n] = std::move(inState);
        bool changed = !res.out[n] || key != outKey[n];
        res.out[n] = std::move(outState);
        outKey[n] = std::move(key);
        if (changed)
            for (int s : cfg.nodes[n].succs)
                if (!queued[s]) {
                    queued[s] = 1;
                    worklist.push_back(s);
                }
    }
    res.iterations = iterations;
    return res;
}

} // namespace minidyn
