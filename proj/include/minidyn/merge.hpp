#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minidyn/read.hpp"
#include "minidyn/state.hpp"

namespace minidyn {

// ---------------------------------------------------------------------------
// In-state source merging (rhs of assignment / alias statements).
//
// The merged content of the sources is materialized as a ContentTree — a
// detached snapshot of values, children, and alias links into the host
// state — which the write module then applies to each target. Working on a
// snapshot keeps target application order-independent (all content is
// computed from the pre-write state) and avoids scratch variables.
// ---------------------------------------------------------------------------

struct ContentTree {
    ValueSet values;
    // Alias partners this content shares a cell with, with strength.
    // Populated per the referencedness rule below; for alias statements the
    // root carries the rhs binding itself.
    std::set<VarId> mustLinks, mayLinks;
    std::map<Value, ContentTree> children;
};

enum class SourceMode { Assign, Alias };

namespace detail {

struct Contrib {
    VarId var;
    bool exact;
};

/// Referencedness rule for copied content (resolves Tab. 4 def 20's
/// self-alias ambiguity): a copy of a variable shares the source's cell
/// exactly when the source is itself a reference, which the state shows as
/// the source having alias partners. Must-partners witness a definite
/// reference (copy must-shares), may-only partners a possible one (copy
/// may-shares); an unaliased source is a plain value and the copy is
/// independent. Contributors reached through unknown-field mediation or
/// read ambiguity degrade everything to may.
inline void contribLinks(const State& st, const Contrib& c, bool forceSelf,
                         std::set<VarId>& outMust, std::set<VarId>& outMay) {
    std::set<VarId> must, may;
    for (VarId a : st.mustAliases(c.var))
        if (a != c.var) must.insert(a);
    for (VarId a : st.mayAliases(c.var)) may.insert(a);
    bool referenced = !must.empty() || !may.empty();
    if (forceSelf) {
        // Alias-statement binding: the target joins the source's reference
        // group unconditionally.
        if (c.exact) {
            outMust.insert(c.var);
            outMust.insert(must.begin(), must.end());
            outMay.insert(may.begin(), may.end());
        } else {
            outMay.insert(c.var);
            outMay.insert(must.begin(), must.end());
            outMay.insert(may.begin(), may.end());
        }
        return;
    }
    if (!referenced) return;
    if (c.exact && !must.empty()) {
        outMust.insert(c.var);
        outMust.insert(must.begin(), must.end());
        outMay.insert(may.begin(), may.end());
    } else if (c.exact) {
        outMay.insert(c.var);
        outMay.insert(may.begin(), may.end());
    } else {
        outMay.insert(c.var);
        outMay.insert(must.begin(), must.end());
        outMay.insert(may.begin(), may.end());
    }
}

/// Combines per-contributor link sets: must survives only when every
/// contributor agrees (Tab. 8 defs 38-d/e applied within one state).
inline void combineLinks(const std::vector<std::pair<std::set<VarId>,
                                                     std::set<VarId>>>& per,
                         ContentTree& node) {
    if (per.empty()) return;
    std::set<VarId> must = per.front().first;
    for (size_t i = 1; i < per.size(); ++i) {
        std::set<VarId> keep;
        for (VarId v : per[i].first)
            if (must.count(v)) keep.insert(v);
        must.swap(keep);
    }
    std::set<VarId> may;
    for (const auto& [m, y] : per) {
        may.insert(m.begin(), m.end());
        may.insert(y.begin(), y.end());
    }
    for (VarId v : must) may.erase(v);
    node.mustLinks = std::move(must);
    node.mayLinks = std::move(may);
}

inline void buildContentRec(const State& st, const std::vector<Contrib>& cs,
                            ContentTree& node, bool isRoot, SourceMode mode) {
    // values (def 38-c analog): union; no contributor reads as undefined
    if (cs.empty()) {
        node.values = {Value::undef()};
    } else {
        for (const Contrib& c : cs) {
            const ValueSet& v = st.values(c.var);
            node.values.insert(v.begin(), v.end());
        }
    }

    // alias links: assignment copies are independent at the top level
    // (copying a reference copies its value); alias statements bind the
    // root; descendant levels always follow referencedness
    if (!isRoot || mode == SourceMode::Alias) {
        std::vector<std::pair<std::set<VarId>, std::set<VarId>>> per;
        for (const Contrib& c : cs) {
            per.emplace_back();
            if (c.var != kUndefVar) // an undefined read carries no binding
                contribLinks(st, c, isRoot && mode == SourceMode::Alias,
                             per.back().first, per.back().second);
        }
        combineLinks(per, node);
    }

    // children: union of child names; a contributor lacking a name falls
    // back to its unknown field (mediated); saturated contributors absorb
    // the level themselves
    std::set<Value> names;
    for (const Contrib& c : cs) {
        if (c.var == kUndefVar || isSaturated(st, c.var)) continue;
        for (const auto& [n, child] : st.var(c.var).children) names.insert(n);
    }
    for (const Value& n : names) {
        std::vector<Contrib> childCs;
        for (const Contrib& c : cs) {
            if (c.var == kUndefVar) {
                // indexing an undefined contributor stays undefined
                childCs.push_back({kUndefVar, false});
                continue;
            }
            if (isSaturated(st, c.var)) {
                childCs.push_back({c.var, false});
                continue;
            }
            if (auto child = st.childOf(c.var, n)) {
                childCs.push_back({*child, c.exact});
            } else if (!n.isBullet()) {
                if (auto unk = st.childOf(c.var, Value::bullet()))
                    childCs.push_back({*unk, false});
                else
                    childCs.push_back({kUndefVar, false});
            }
        }
        if (childCs.empty()) continue;
        buildContentRec(st, childCs, node.children[n], false, mode);
    }
}

} // namespace detail

/// Merged content of the given source variables (Tab. 7 defs 32/35's
/// "fresh variable" materialization, realized as a detached snapshot).
inline ContentTree buildMergedContent(const State& st, const ReadHits& sources,
                                      SourceMode mode) {
    std::vector<detail::Contrib> cs;
    for (const auto& [v, exact] : sources) cs.push_back({v, exact});
    ContentTree root;
    detail::buildContentRec(st, cs, root, /*isRoot=*/true, mode);
    return root;
}

inline ContentTree literalContent(ValueSet values) {
    ContentTree t;
    t.values = std::move(values);
    return t;
}

// ---------------------------------------------------------------------------
// mergeStates (Tab. 8): join of predecessor states at CFG join points.
// ---------------------------------------------------------------------------

using PathSet = std::set<ConcretePath>;

/// Tab. 8 def 39: all concrete paths to all descendants, plus [].
inline void collectAccessPaths(const State& s, VarId from, ConcretePath& prefix,
                               PathSet& out) {
    out.insert(prefix);
    for (const auto& [name, child] : s.var(from).children) {
        prefix.push_back(name);
        collectAccessPaths(s, child, prefix, out);
        prefix.pop_back();
    }
}

inline PathSet collectAccessPaths(const State& s) {
    PathSet out;
    ConcretePath prefix;
    collectAccessPaths(s, s.root(), prefix, out);
    return out;
}

/// Tab. 8 defs 40–44: every • is additionally replaced by every literal
/// value occurring at the same level anywhere in the set, to closure; the
/// result is prefix-closed.
inline PathSet extendPaths(PathSet aps) {
    // literal values per level (level = 1-based position)
    size_t maxLen = 0;
    for (const auto& p : aps) maxLen = std::max(maxLen, p.size());
    std::vector<std::set<Value>> levelValues(maxLen);
    for (const auto& p : aps)
        for (size_t i = 0; i < p.size(); ++i)
            if (!p[i].isBullet()) levelValues[i].insert(p[i]);

    std::vector<ConcretePath> work(aps.begin(), aps.end());
    while (!work.empty()) {
        ConcretePath p = std::move(work.back());
        work.pop_back();
        for (size_t i = 0; i < p.size(); ++i) {
            if (!p[i].isBullet()) continue;
            for (const Value& v : levelValues[i]) {
                ConcretePath q = p;
                q[i] = v;
                if (aps.insert(q).second) work.push_back(q);
            }
        }
    }
    // prefix closure
    PathSet closed;
    for (const auto& p : aps)
        for (size_t len = 0; len <= p.size(); ++len)
            closed.insert(ConcretePath(p.begin(), p.begin() + len));
    return closed;
}

namespace detail {

struct PendingLink {
    ConcretePath a, b;
    bool must;
};

} // namespace detail

/// Tab. 8 defs 36–38: result variables are created per extended access
/// path; each predecessor contributes the variable its read-resolution of
/// the path reaches (unknown fields standing in for absent indices).
/// Values union; must-aliases intersect across predecessors; everything
/// else becomes may. Mediated contributors degrade their whole
/// contribution — including their own identity — to may, which is what
/// ties a materialized index back to the unknown field it came from.
inline State mergeStates(const std::vector<const State*>& predecessors) {
    if (predecessors.empty())
        throw AnalysisError(AnalysisError::Code::InternalError,
                            "mergeStates on empty predecessor set");
    // def 36 takes a set of states: de-duplicate path-isomorphic inputs so
    // merge([s, s]) is a plain copy of s
    std::vector<const State*> preds;
    std::set<std::string> seen;
    for (const State* p : predecessors)
        if (seen.insert(canonicalSerialize(*p)).second) preds.push_back(p);
    if (preds.size() == 1) return *preds.front();

    PathSet paths;
    for (const State* p : preds) {
        PathSet ps = collectAccessPaths(*p);
        paths.insert(ps.begin(), ps.end());
    }
    paths = extendPaths(paths);

    State res(preds.front()->depthLimit());
    std::map<ConcretePath, VarId> memo;
    memo[{}] = res.root();
    std::vector<detail::PendingLink> links;

    // std::set orders prefixes before their extensions, so parents are
    // always created before children
    for (const ConcretePath& path : paths) {
        if (path.empty()) continue;
        if (path.size() > res.depthLimit()) continue; // cannot arise: preds share the limit
        ConcretePath parentPath(path.begin(), path.end() - 1);
        VarId parent = memo.at(parentPath);
        VarId v;
        if (auto existing = res.childOf(parent, path.back())) {
            v = *existing; // root's unknown field pre-exists
        } else {
            v = res.createIndex(parent, path.back());
        }
        memo[path] = v;

        ValueSet vals;
        std::optional<std::set<ConcretePath>> mustAcc;
        std::set<ConcretePath> mayAcc;
        for (const State* s : preds) {
            ReadHits hits = resolveConcrete(*s, path);
            if (hits.empty()) {
                vals.insert(Value::undef());
                mustAcc.emplace(); // absent ⇒ empty must contribution
                continue;
            }
            // a saturated hit may come with an undefined-marker co-hit;
            // fold every hit of this predecessor into the contribution
            bool pureExact = hits.size() == 1 &&
                             hits.begin()->first != kUndefVar &&
                             hits.begin()->second;
            for (const auto& [c, exact] : hits) {
                if (c == kUndefVar) {
                    vals.insert(Value::undef());
                    continue;
                }
                const ValueSet& cv = s->values(c);
                vals.insert(cv.begin(), cv.end());
                std::set<ConcretePath> must, may;
                for (VarId a : s->mustAliases(c))
                    if (a != c) must.insert(s->pathOf(a));
                for (VarId a : s->mayAliases(c)) may.insert(s->pathOf(a));
                if (pureExact) {
                    if (!mustAcc) {
                        mustAcc = must;
                    } else {
                        std::set<ConcretePath> keep;
                        for (const auto& m : must)
                            if (mustAcc->count(m)) keep.insert(m);
                        *mustAcc = std::move(keep);
                    }
                    mayAcc.insert(must.begin(), must.end());
                    mayAcc.insert(may.begin(), may.end());
                } else {
                    if (!must.empty() || !may.empty()) {
                        mayAcc.insert(s->pathOf(c));
                        mayAcc.insert(must.begin(), must.end());
                        mayAcc.insert(may.begin(), may.end());
                    }
                }
            }
            if (!pureExact) mustAcc.emplace();
        }
        res.setValues(v, std::move(vals));
        if (mustAcc)
            for (const auto& m : *mustAcc) {
                links.push_back({path, m, true});
                mayAcc.erase(m);
            }
        for (const auto& m : mayAcc) links.push_back({path, m, false});
    }

    for (const auto& l : links) {
        auto itA = memo.find(l.a);
        auto itB = memo.find(l.b);
        if (itA == memo.end() || itB == memo.end()) continue;
        if (l.must)
            res.addMust(itA->second, itB->second);
        else
            res.addMay(itA->second, itB->second);
    }
    // may never contradicts must (DISJOINT): must wins in addMust/addMay
    return res;
}

} // namespace minidyn
