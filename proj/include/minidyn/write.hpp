#pragma once

#include <set>
#include <vector>

#include "minidyn/merge.hpp"
#include "minidyn/read.hpp"
#include "minidyn/state.hpp"

namespace minidyn {

/// Tab. 6: the collected write targets. For assignments `must`/`may` are
/// the final (alias-expanded) strong/weak targets; for alias statements
/// the last level skips alias-following (def 28) and lands in
/// mustAlias/mayAlias instead.
struct TargetSets {
    std::set<VarId> must, may;
    std::set<VarId> mustAlias, mayAlias;
};

namespace detail {

/// Tab. 6 defs 24–25: existing children under the given names plus fresh
/// ones (defindex = createIndex + deepCopy from the parent's unknown
/// field, materializing unknown-field data). Parents at the depth limit
/// cannot grow children; they absorb the write themselves and are returned
/// through `carries`.
inline std::set<VarId> indicesWrite(State& st, const std::set<VarId>& parents,
                                    const ValueSet& names,
                                    std::set<VarId>& carries) {
    std::set<VarId> out;
    for (VarId p : parents) {
        if (st.depthOf(p) >= st.depthLimit() || isSaturated(st, p)) {
            carries.insert(p);
            continue;
        }
        for (const Value& n : names) {
            if (auto child = st.childOf(p, n)) {
                out.insert(*child);
                continue;
            }
            VarId v = st.createIndex(p, n);
            if (auto unk = st.childOf(p, Value::bullet()); unk && *unk != v)
                deepCopy(st, *unk, v);
            out.insert(v);
        }
    }
    return out;
}

/// Unknown-field children of the given parents, created on demand — the
/// routing target for an undefined index value.
inline std::set<VarId> unknownChildren(State& st, const std::set<VarId>& parents) {
    std::set<VarId> out;
    for (VarId p : parents) {
        if (st.depthOf(p) >= st.depthLimit() || isSaturated(st, p)) continue;
        if (auto unk = st.childOf(p, Value::bullet())) {
            out.insert(*unk);
        } else {
            out.insert(st.createIndex(p, Value::bullet()));
        }
    }
    return out;
}

} // namespace detail

/// Tab. 6 defs 26–28. Index sets are evaluated against the state as
/// already extended by previous levels (GEN′ accumulates in `work`).
inline TargetSets collectTargets(State& work, const AccessPath& lhs,
                                 bool isAlias) {
    std::set<VarId> must{work.root()};
    std::set<VarId> may;
    TargetSets ts;
    const size_t n = lhs.elems.size();
    for (size_t j = 0; j < n; ++j) {
        ValueSet idx = eval(work, lhs.elems[j]);
        bool last = (j + 1 == n);
        bool followAliases = !(isAlias && last);

        // Descending a level makes every parent an array on this path;
        // concretely that destroys any scalar it held, so its value reads
        // must also allow undefined from here on.
        for (VarId p : must)
            if (p != work.root()) work.addValue(p, Value::undef());
        for (VarId p : may) work.addValue(p, Value::undef());

        std::set<VarId> newMust, newMay, carries;
        if (contains(idx, Value::star())) {
            // def 27-c: statically unknown — every child of every collected
            // variable becomes a weak target; nothing is created
            std::set<VarId> all = must;
            all.insert(may.begin(), may.end());
            for (VarId v : all) {
                if (work.depthOf(v) >= work.depthLimit() ||
                    isSaturated(work, v)) {
                    carries.insert(v);
                    continue;
                }
                for (const auto& [name, child] : work.var(v).children)
                    newMay.insert(child);
            }
            // the variable's unknown field is always among "every child";
            // it is materialized on demand since unknown fields are lazy
            auto unk = detail::unknownChildren(work, all);
            newMay.insert(unk.begin(), unk.end());
        } else {
            ValueSet known;
            bool hasUndef = false;
            for (const Value& v : idx) {
                if (v.isUndef())
                    hasUndef = true;
                else
                    known.insert(v);
            }
            std::set<VarId> mustKids =
                detail::indicesWrite(work, must, known, carries);
            std::set<VarId> mayKids =
                detail::indicesWrite(work, may, known, carries);
            if (hasUndef) {
                // an undefined index value cannot be proven to hit any named
                // child: route it to the unknown field, weakly
                auto unkMust = detail::unknownChildren(work, must);
                auto unkMay = detail::unknownChildren(work, may);
                mayKids.insert(unkMust.begin(), unkMust.end());
                mayKids.insert(unkMay.begin(), unkMay.end());
            }
            if (known.size() == 1 && !hasUndef) {
                newMust = std::move(mustKids); // def 27-a
                newMay = std::move(mayKids);
            } else {
                newMay = std::move(mustKids); // def 27-b
                newMay.insert(mayKids.begin(), mayKids.end());
            }
        }
        // a carrying variable absorbs array structure it cannot represent:
        // its flattened summary is statically unknown and allows undefined
        for (VarId v : carries) {
            work.addValue(v, Value::star());
            work.addValue(v, Value::undef());
        }
        newMay.insert(carries.begin(), carries.end());

        std::set<VarId> expMust, expMay;
        if (followAliases) {
            for (VarId v : newMust) {
                auto m = work.mustAliases(v);
                expMust.insert(m.begin(), m.end());
                auto y = work.mayAliases(v);
                expMay.insert(y.begin(), y.end());
            }
            for (VarId v : newMay) {
                auto a = work.aliases(v);
                expMay.insert(a.begin(), a.end());
            }
        } else {
            expMust = std::move(newMust);
            expMay = std::move(newMay);
        }
        for (VarId v : expMust) expMay.erase(v);
        must = std::move(expMust);
        may = std::move(expMay);
        if (must.empty() && may.empty()) break;
    }
    if (isAlias) {
        ts.mustAlias = std::move(must);
        ts.mayAlias = std::move(may);
    } else {
        ts.must = std::move(must);
        ts.may = std::move(may);
    }
    return ts;
}

namespace detail {

inline ValueSet flattenContent(const ContentTree& t) {
    ValueSet out = t.values;
    if (!t.children.empty()) {
        out.insert(Value::star());
        out.insert(Value::undef());
    }
    for (const auto& [n, c] : t.children) {
        ValueSet sub = flattenContent(c);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

inline void applyLinks(State& st, const ContentTree& node, VarId t,
                       bool demote) {
    for (VarId a : node.mustLinks) {
        if (a == t) continue;
        if (demote)
            st.addMay(t, a);
        else
            st.addMust(t, a);
    }
    for (VarId a : node.mayLinks)
        if (a != t) st.addMay(t, a);
}

inline void applyWeakRec(State& st, const ContentTree& node, VarId t,
                         bool isRoot);

/// Strong update (Tab. 7 defs 29–32): the target's content becomes exactly
/// the merged source content. Materialized descendants persist as {Undef}
/// skeletons (GEN′ monotonicity); replaced descendants lose their old
/// alias pairs — their cells are gone — and gain the content's links.
inline void applyStrongRec(State& st, const ContentTree& node, VarId t,
                           bool isRoot) {
    if (st.depthOf(t) >= st.depthLimit() && !node.children.empty()) {
        st.setValues(t, flattenContent(node));
        return;
    }
    st.setValues(t, node.values);
    if (st.var(t).indexName.isBullet()) st.addValue(t, Value::undef());
    if (!isRoot) {
        st.clearAliases(t);
        applyLinks(st, node, t, /*demote=*/false);
    }
    // descendants not present in the new content: a surviving literal name
    // may still be covered by the content's unknown field, so it takes that
    // subtree (which always allows Undef); otherwise it resets to {Undef}
    static const ContentTree undefLeaf{{Value::undef()}, {}, {}, {}};
    const ContentTree* unkSub = nullptr;
    if (auto it = node.children.find(Value::bullet());
        it != node.children.end())
        unkSub = &it->second;
    const auto existingChildren = st.var(t).children; // copy: st mutates below
    for (const auto& [name, child] : existingChildren) {
        if (node.children.count(name)) continue;
        if (unkSub && !name.isBullet())
            applyStrongRec(st, *unkSub, child, false);
        else
            applyStrongRec(st, undefLeaf, child, false);
    }
    for (const auto& [name, sub] : node.children) {
        auto existing = st.childOf(t, name);
        VarId child = existing ? *existing : st.createIndex(t, name);
        applyStrongRec(st, sub, child, false);
    }
    if (!node.children.empty() && !st.childOf(t, Value::bullet()))
        st.createIndex(t, Value::bullet());
}

/// Weak update (Tab. 7 def 33): old content is joined with the written
/// content; every link contributed by the content degrades to may, since
/// the write only possibly happened.
inline void applyWeakRec(State& st, const ContentTree& node, VarId t,
                         bool isRoot) {
    if (!node.children.empty() &&
        (st.depthOf(t) >= st.depthLimit() || isSaturated(st, t))) {
        st.addValues(t, flattenContent(node));
        return;
    }
    st.addValues(t, node.values);
    if (!isRoot) applyLinks(st, node, t, /*demote=*/true);
    for (const auto& [name, sub] : node.children) {
        auto existing = st.childOf(t, name);
        VarId child = existing ? *existing : st.createIndex(t, name);
        // a freshly materialized named child was previously covered by the
        // unknown field; it must not shadow what the unknown field held
        if (!existing && !name.isBullet())
            if (auto unk = st.childOf(t, Value::bullet()); unk && *unk != child)
                deepCopy(st, *unk, child);
        applyWeakRec(st, sub, child, false);
    }
    if (!node.children.empty() && !st.childOf(t, Value::bullet()))
        st.createIndex(t, Value::bullet());
}

} // namespace detail

/// Tab. 7 assignment transfer. `disableWeakUpdates` is a test-only hook
/// for demonstrating the soundness oracle's sensitivity.
inline State applyAssign(const State& in, const AccessPath& lhs,
                         const ContentTree* rhsContent, const AccessPath* rhsPath,
                         bool disableWeakUpdates = false) {
    State work = in;
    TargetSets ts = collectTargets(work, lhs, /*isAlias=*/false);
    ContentTree content;
    if (rhsContent) {
        content = *rhsContent;
    } else {
        // def 32: sources are read from IN, untouched by this statement's
        // own materializations
        ReadHits hits = readVars(in, *rhsPath);
        content = buildMergedContent(work, hits, SourceMode::Assign);
    }
    for (VarId t : ts.must) detail::applyStrongRec(work, content, t, true);
    if (!disableWeakUpdates)
        for (VarId t : ts.may) detail::applyWeakRec(work, content, t, true);
    return work;
}

/// Tab. 7 alias transfer: must-targets are un-aliased (def 31) and then
/// bound to the rhs (def 35, via the content root's forced links);
/// may-targets join weakly with may links only.
inline State applyAlias(const State& in, const AccessPath& lhs,
                        const AccessPath& rhs,
                        bool disableWeakUpdates = false) {
    State work = in;
    TargetSets ts = collectTargets(work, lhs, /*isAlias=*/true);
    ReadHits hits = readVars(in, rhs);
    ContentTree content = buildMergedContent(work, hits, SourceMode::Alias);
    for (VarId t : ts.mustAlias) {
        work.clearAliases(t);
        detail::applyStrongRec(work, content, t, true);
        detail::applyLinks(work, content, t, /*demote=*/false);
    }
    if (!disableWeakUpdates)
        for (VarId t : ts.mayAlias) {
            detail::applyWeakRec(work, content, t, true);
            detail::applyLinks(work, content, t, /*demote=*/true);
        }
    return work;
}

} // namespace minidyn
