#pragma once

#include <map>
#include <set>

#include "minidyn/access_path.hpp"
#include "minidyn/state.hpp"
#include "minidyn/value.hpp"

namespace minidyn {

/// Variables reached by a read, tagged with how they were reached. A hit is
/// exact when the walk used only existing indices under their own names;
/// it is mediated when the unknown field stood in for a missing or
/// statically unknown index, or when a saturated variable absorbed the
/// remainder of the path. Mediated hits contribute content but only weak
/// aliasing information downstream.
using ReadHits = std::map<VarId, bool>; // value: true = exact

namespace detail {

inline void hit(ReadHits& out, VarId v, bool exact) {
    auto [it, inserted] = out.emplace(v, exact);
    if (!inserted && exact) it->second = true;
}

} // namespace detail

/// One traversal level: from every variable in `current`, follow each index
/// name in `names`. Missing literal indices and the undefined index fall
/// back to the unknown field; * follows every child; aliases are never
/// followed on reads. Saturated variables absorb the step and stay in the
/// result.
inline ReadHits readStep(const State& s, const ReadHits& current,
                         const ValueSet& names) {
    ReadHits out;
    for (const auto& [v, exact] : current) {
        if (v == kUndefVar) {
            // indexing the undefined value stays undefined
            detail::hit(out, kUndefVar, false);
            continue;
        }
        if (isSaturated(s, v)) {
            detail::hit(out, v, false);
            // the absorbed index may nonetheless be unbound concretely
            if (!contains(s.values(v), Value::undef()))
                detail::hit(out, kUndefVar, false);
            continue;
        }
        for (const Value& name : names) {
            if (name.isStar()) {
                for (const auto& [childName, child] : s.var(v).children)
                    detail::hit(out, child, exact && !childName.isBullet());
                // the unknown index may also miss every existing child
                if (!s.childOf(v, Value::bullet()))
                    detail::hit(out, kUndefVar, false);
            } else if (name.isUndef()) {
                if (auto unk = s.childOf(v, Value::bullet()))
                    detail::hit(out, *unk, false);
                else
                    detail::hit(out, kUndefVar, false);
            } else if (name.isBullet()) {
                if (auto unk = s.childOf(v, Value::bullet()))
                    detail::hit(out, *unk, exact);
                else
                    detail::hit(out, kUndefVar, false);
            } else {
                if (auto child = s.childOf(v, name)) {
                    detail::hit(out, *child, exact);
                } else if (auto unk = s.childOf(v, Value::bullet())) {
                    detail::hit(out, *unk, false);
                } else {
                    detail::hit(out, kUndefVar, false);
                }
            }
        }
    }
    return out;
}

inline ValueSet eval(const State& s, const AccessPath& p);

/// Index names an element of an access path can denote.
inline ValueSet evalIndexNames(const State& s, const AccessPath& elem) {
    return eval(s, elem);
}

/// Tab. 5 Vars: variables a (possibly dynamic) access path may denote.
inline ReadHits readVars(const State& s, const AccessPath& p) {
    ReadHits current{{s.root(), true}};
    for (const AccessPath& elem : p.elems)
        current = readStep(s, current, evalIndexNames(s, elem));
    return current;
}

inline std::set<VarId> vars(const State& s, const AccessPath& p) {
    std::set<VarId> out;
    for (const auto& [v, exact] : readVars(s, p)) out.insert(v);
    return out;
}

/// Tab. 5 Eval: values an expression may evaluate to; an empty variable
/// set reads as {undefined}.
inline ValueSet eval(const State& s, const AccessPath& p) {
    if (p.isAtom()) return {p.atom};
    return s.valuesUndef(vars(s, p));
}

/// Resolves a fully concrete path with unknown-field fallback at every
/// level (used when transplanting paths between merged states).
inline ReadHits resolveConcrete(const State& s, const ConcretePath& p) {
    ReadHits current{{s.root(), true}};
    for (const Value& name : p) {
        if (current.empty()) break;
        current = readStep(s, current, ValueSet{name});
    }
    return current;
}

} // namespace minidyn
