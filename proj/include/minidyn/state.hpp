#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minidyn/access_path.hpp"
#include "minidyn/value.hpp"

namespace minidyn {

using VarId = uint32_t;
constexpr VarId kUndefVar = 0xFFFFFFFFu; // never a key of any relation
constexpr VarId kNoVar = 0xFFFFFFFEu;

struct Variable {
    ValueSet values;
    VarId parent = kNoVar;               // kNoVar for the root
    Value indexName;                     // name under parent
    std::map<Value, VarId> children;     // sorted; unknown field (•) last
    bool alive = true;
};

/// The analysis state: a rooted forest of variables (indexOf), per-variable
/// value sets, and the must/may alias relations.
class State {
public:
    explicit State(uint32_t depthLimit = 8) : depthLimit_(depthLimit) {
        // root: symbol table; unk: its unknown field.
        vars_.push_back(Variable{{Value::undef()}, kNoVar, Value{}, {}, true});
        VarId unk = static_cast<VarId>(vars_.size());
        vars_.push_back(Variable{{Value::undef()}, 0, Value::bullet(), {}, true});
        vars_[0].children[Value::bullet()] = unk;
    }

    VarId root() const { return 0; }
    VarId unknownVar() const { return vars_[0].children.at(Value::bullet()); }
    uint32_t depthLimit() const { return depthLimit_; }
    size_t varSlotCount() const { return vars_.size(); }

    bool isDefined(VarId v) const { return v < vars_.size() && vars_[v].alive; }

    const Variable& var(VarId v) const {
        checkDefined(v);
        return vars_[v];
    }

    // ---- projections (Tab. 3) ----

    const ValueSet& values(VarId v) const {
        if (v == kUndefVar) return undefValues();
        checkDefined(v);
        return vars_[v].values;
    }

    /// values over a set of variables, substituting {undefined} when empty.
    ValueSet valuesUndef(const std::set<VarId>& vs) const {
        if (vs.empty()) return {Value::undef()};
        ValueSet out;
        for (VarId v : vs) {
            const ValueSet& s = values(v);
            out.insert(s.begin(), s.end());
        }
        return out;
    }

    std::optional<VarId> childOf(VarId parent, const Value& name) const {
        checkDefined(parent);
        auto it = vars_[parent].children.find(name);
        if (it == vars_[parent].children.end()) return std::nullopt;
        return it->second;
    }

    /// All children of all variables in V (unknown fields included).
    std::set<VarId> indices(const std::set<VarId>& vs) const {
        std::set<VarId> out;
        for (VarId v : vs) {
            checkDefined(v);
            for (const auto& [name, child] : vars_[v].children) out.insert(child);
        }
        return out;
    }

    /// Children of variables in V identified by names in I.
    std::set<VarId> indices(const std::set<VarId>& vs, const ValueSet& names) const {
        std::set<VarId> out;
        for (VarId v : vs) {
            checkDefined(v);
            for (const Value& n : names) {
                auto it = vars_[v].children.find(n);
                if (it != vars_[v].children.end()) out.insert(it->second);
            }
        }
        return out;
    }

    /// Must-aliases of v, self included (SELF-MUST).
    std::set<VarId> mustAliases(VarId v) const {
        checkDefined(v);
        std::set<VarId> out{v};
        if (auto it = mustAdj_.find(v); it != mustAdj_.end())
            out.insert(it->second.begin(), it->second.end());
        return out;
    }

    /// May-aliases of v (self excluded; self is a must-alias).
    std::set<VarId> mayAliases(VarId v) const {
        checkDefined(v);
        if (auto it = mayAdj_.find(v); it != mayAdj_.end()) return it->second;
        return {};
    }

    std::set<VarId> aliases(VarId v) const {
        std::set<VarId> out = mustAliases(v);
        std::set<VarId> may = mayAliases(v);
        out.insert(may.begin(), may.end());
        return out;
    }

    std::set<VarId> aliasesOf(const std::set<VarId>& vs) const {
        std::set<VarId> out;
        for (VarId v : vs) {
            auto a = aliases(v);
            out.insert(a.begin(), a.end());
        }
        return out;
    }

    uint32_t depthOf(VarId v) const {
        checkDefined(v);
        uint32_t d = 0;
        while (vars_[v].parent != kNoVar) { v = vars_[v].parent; ++d; }
        return d;
    }

    /// Canonical access path of v from the root.
    ConcretePath pathOf(VarId v) const {
        checkDefined(v);
        ConcretePath p;
        while (vars_[v].parent != kNoVar) {
            p.push_back(vars_[v].indexName);
            v = vars_[v].parent;
        }
        std::reverse(p.begin(), p.end());
        return p;
    }

    /// Exact walk of a concrete path; no unknown-field fallback.
    std::optional<VarId> resolveExact(const ConcretePath& p) const {
        VarId v = root();
        for (const Value& name : p) {
            auto c = childOf(v, name);
            if (!c) return std::nullopt;
            v = *c;
        }
        return v;
    }

    // ---- mutation ----

    /// Tab. 4 def 21: fresh child with values {undefined}, its own must-alias.
    VarId createIndex(VarId parent, const Value& name) {
        checkDefined(parent);
        if (vars_[parent].children.count(name))
            throw AnalysisError(AnalysisError::Code::DuplicateIndex,
                                "duplicate index " + name.toString());
        VarId v = static_cast<VarId>(vars_.size());
        vars_.push_back(Variable{{Value::undef()}, parent, name, {}, true});
        vars_[parent].children[name] = v;
        return v;
    }

    void setValues(VarId v, ValueSet vals) {
        checkDefined(v);
        vars_[v].values = std::move(vals);
    }

    void addValues(VarId v, const ValueSet& vals) {
        checkDefined(v);
        vars_[v].values.insert(vals.begin(), vals.end());
    }

    void addValue(VarId v, const Value& val) {
        checkDefined(v);
        vars_[v].values.insert(val);
    }

    /// Adds a must pair; removes a contradicting may pair (DISJOINT).
    void addMust(VarId a, VarId b) {
        if (a == b) return;
        checkDefined(a); checkDefined(b);
        eraseAdj(mayAdj_, a, b);
        insertAdj(mustAdj_, a, b);
    }

    /// Adds a may pair unless the pair is already a must pair.
    void addMay(VarId a, VarId b) {
        if (a == b) return;
        checkDefined(a); checkDefined(b);
        if (hasAdj(mustAdj_, a, b)) return;
        insertAdj(mayAdj_, a, b);
    }

    /// Removes every alias pair involving v (alias-statement KILL, def 31).
    void clearAliases(VarId v) {
        dropAdj(mustAdj_, v);
        dropAdj(mayAdj_, v);
    }

    /// Resets the subtree below v: every descendant becomes a {undefined}
    /// leaf-content variable and loses its alias pairs. The forest skeleton
    /// is kept so materialized variables persist across strong updates.
    void resetDescendants(VarId v) {
        checkDefined(v);
        for (const auto& [name, child] : vars_[v].children) {
            resetDescendants(child);
            vars_[child].values = {Value::undef()};
            clearAliases(child);
        }
    }

    /// Removes the entire subtree below v; the removed variables die and
    /// lose their alias pairs. Used by structural widening.
    void dropDescendants(VarId v) {
        checkDefined(v);
        for (auto& [name, child] : vars_[v].children) dropRec(child);
        vars_[v].children.clear();
    }

    std::set<std::pair<VarId, VarId>> mustPairs() const { return pairsOf(mustAdj_); }
    std::set<std::pair<VarId, VarId>> mayPairs() const { return pairsOf(mayAdj_); }

    /// All live variables in a deterministic order.
    std::vector<VarId> allVars() const {
        std::vector<VarId> out;
        for (VarId v = 0; v < vars_.size(); ++v)
            if (vars_[v].alive) out.push_back(v);
        return out;
    }

private:
    void dropRec(VarId v) {
        for (auto& [name, child] : vars_[v].children) dropRec(child);
        vars_[v].children.clear();
        clearAliases(v);
        vars_[v].alive = false;
    }

    void checkDefined(VarId v) const {
        if (!isDefined(v))
            throw AnalysisError(AnalysisError::Code::InternalError,
                                "undefined VarId " + std::to_string(v));
    }

    static std::pair<VarId, VarId> norm(VarId a, VarId b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    }

    static const ValueSet& undefValues() {
        static const ValueSet s{Value::undef()};
        return s;
    }

    // Symmetric adjacency: a pair {a,b} is stored under both endpoints.
    using Adj = std::unordered_map<VarId, std::set<VarId>>;

    static void insertAdj(Adj& a, VarId x, VarId y) {
        a[x].insert(y);
        a[y].insert(x);
    }
    static void eraseAdj(Adj& a, VarId x, VarId y) {
        for (auto [k, p] : {std::pair{x, y}, std::pair{y, x}}) {
            auto it = a.find(k);
            if (it == a.end()) continue;
            it->second.erase(p);
            if (it->second.empty()) a.erase(it);
        }
    }
    static bool hasAdj(const Adj& a, VarId x, VarId y) {
        auto it = a.find(x);
        return it != a.end() && it->second.count(y) != 0;
    }
    static void dropAdj(Adj& a, VarId v) {
        auto it = a.find(v);
        if (it == a.end()) return;
        for (VarId p : it->second) {
            auto jt = a.find(p);
            jt->second.erase(v);
            if (jt->second.empty()) a.erase(jt);
        }
        a.erase(v);
    }
    static std::set<std::pair<VarId, VarId>> pairsOf(const Adj& a) {
        std::set<std::pair<VarId, VarId>> out;
        for (const auto& [x, ps] : a)
            for (VarId y : ps) out.insert(norm(x, y));
        return out;
    }

    std::vector<Variable> vars_;
    Adj mustAdj_, mayAdj_;
    uint32_t depthLimit_;
};

/// §3.2 initial state: root with one unknown-field child holding {undefined}.
inline State initialState(uint32_t depthLimit = 8) { return State(depthLimit); }

// ---- deep copy (Tab. 4) ----

/// A variable is saturated when it carries * and either sits at the depth
/// limit or has no children (a childless * summarizes arbitrary content,
/// e.g. after structural widening); it absorbs all reads and writes below.
inline bool isSaturated(const State& s, VarId v) {
    return contains(s.values(v), Value::star()) &&
           (s.depthOf(v) >= s.depthLimit() || s.var(v).children.empty());
}

namespace detail {

/// Copies src's alias partners onto dst. The source itself is never
/// linked: identity links are the business of the source-merge layer,
/// which decides per referencedness whether a copy shares its source's
/// cell (see merge.hpp).
inline void copyAliasSets(State& st, VarId src, VarId dst) {
    for (VarId a : st.mustAliases(src))
        if (a != src && a != dst) st.addMust(dst, a);
    for (VarId a : st.mayAliases(src))
        if (a != src && a != dst) st.addMay(dst, a);
}

inline void deepCopyRec(State& st, VarId src, VarId dst, bool copyAliases);

/// Copies values and (recursively, with aliases) children of src into dst.
/// Top-level alias handling is the caller's concern. Children already
/// present under dst are merged into, not replaced. When dst sits at the
/// depth limit the copied subtree is flattened to {*, undefined}.
inline void deepCopyAssignInto(State& st, VarId src, VarId dst) {
    st.addValues(dst, st.values(src));
    bool atLimit = st.depthOf(dst) >= st.depthLimit();
    const auto children = st.var(src).children; // copy: st mutates below
    if (atLimit) {
        if (!children.empty()) {
            st.addValue(dst, Value::star());
            st.addValue(dst, Value::undef());
        }
        return;
    }
    for (const auto& [name, srcChild] : children) {
        auto existing = st.childOf(dst, name);
        VarId dstChild = existing ? *existing : st.createIndex(dst, name);
        deepCopyRec(st, srcChild, dstChild, /*copyAliases=*/true);
    }
    // def 19's final conjunct: a copied array gets an unknown field of its
    // own. Leaf copies skip it — a bare unknown field is read-equivalent
    // to its absence, and materializing one per copied leaf would let •
    // chains grow by one level on every copy.
    if (!children.empty() && !st.childOf(dst, Value::bullet()))
        st.createIndex(dst, Value::bullet());
}

inline void deepCopyRec(State& st, VarId src, VarId dst, bool copyAliases) {
    if (copyAliases) copyAliasSets(st, src, dst);
    deepCopyAssignInto(st, src, dst);
}

} // namespace detail

/// Tab. 4 def 19: values and children are copied (children with their alias
/// sets), dst's own top-level alias sets are left alone.
inline void deepCopyAssign(State& st, VarId src, VarId dst) {
    detail::deepCopyAssignInto(st, src, dst);
}

/// Tab. 4 def 20: deepCopyAssign plus dst gains src's top-level alias sets.
inline void deepCopy(State& st, VarId src, VarId dst) {
    detail::copyAliasSets(st, src, dst);
    detail::deepCopyAssignInto(st, src, dst);
}

// ---- canonical serialization / path-isomorphism ----

namespace detail {

inline void serializeVar(const State& s, VarId v, const std::string& path,
                         std::ostringstream& os) {
    os << path << " = {";
    bool first = true;
    for (const Value& val : s.values(v)) {
        if (!first) os << ',';
        first = false;
        os << val.toString();
    }
    os << '}';
    auto pathsOf = [&](const std::set<VarId>& vs) {
        std::set<std::string> out;
        for (VarId a : vs)
            if (a != v) out.insert(concretePathToString(s.pathOf(a)));
        return out;
    };
    os << " must{";
    for (const auto& p : pathsOf(s.mustAliases(v))) os << p << ';';
    os << "} may{";
    for (const auto& p : pathsOf(s.mayAliases(v))) os << p << ';';
    os << "}\n";
    for (const auto& [name, child] : s.var(v).children)
        serializeVar(s, child, path + "[" + name.toString() + "]", os);
}

} // namespace detail

/// Canonical textual form: children in index-name order (• last), values
/// sorted, alias partners as sorted canonical paths. Two states are
/// path-isomorphic iff their canonical forms are equal.
inline std::string canonicalSerialize(const State& s) {
    std::ostringstream os;
    detail::serializeVar(s, s.root(), "[]", os);
    return os.str();
}

inline bool pathIsomorphic(const State& a, const State& b) {
    return canonicalSerialize(a) == canonicalSerialize(b);
}

/// Debug hook: checks the six State invariants; throws InternalError on
/// violation.
inline void validate(const State& s) {
    auto fail = [](const std::string& msg) {
        throw AnalysisError(AnalysisError::Code::InternalError,
                            "state invariant violated: " + msg);
    };
    std::set<VarId> seen;
    // FOREST + UNIQUE-NAME via the children maps; check parent backrefs.
    std::vector<std::pair<VarId, uint32_t>> stack{{s.root(), 0}};
    while (!stack.empty()) {
        auto [v, depth] = stack.back();
        stack.pop_back();
        if (!seen.insert(v).second) fail("cycle or shared child");
        const Variable& var = s.var(v);
        if (var.values.empty()) fail("empty value set");
        if (contains(var.values, Value::bullet())) fail("bullet in value set");
        if (var.indexName.isBullet() && !contains(var.values, Value::undef()))
            fail("unknown field without undefined (UNKNOWN-UNDEF)");
        for (const auto& [name, child] : var.children) {
            if (s.var(child).parent != v || !(s.var(child).indexName == name))
                fail("indexOf backref mismatch");
            stack.push_back({child, depth + 1});
        }
    }
    for (VarId v : s.allVars())
        if (!seen.count(v)) fail("variable unreachable from root");
    const auto mayPs = s.mayPairs();
    for (const auto& p : s.mustPairs()) {
        if (p.first == p.second) fail("stored self must pair");
        if (mayPs.count(p)) fail("must/may overlap (DISJOINT)");
        if (!s.isDefined(p.first) || !s.isDefined(p.second))
            fail("alias pair over undefined variable");
    }
    for (const auto& p : mayPs)
        if (!s.isDefined(p.first) || !s.isDefined(p.second))
            fail("alias pair over undefined variable");
}

} // namespace minidyn
