#pragma once

#include <memory>
#include <sstream>
#include <vector>

#include "minidyn/ast.hpp"
#include "minidyn/value.hpp"

namespace minidyn {

/// An access path is either a single value or a sequence of access paths,
/// one element per array dimension. Nesting encodes dynamic indices.
struct AccessPath {
    enum class Kind { Atom, Seq };
    Kind kind = Kind::Seq;
    Value atom;                          // Kind::Atom
    std::vector<AccessPath> elems;       // Kind::Seq
    bool unknownInput = false;           // Atom-like element evaluating to {*}

    static AccessPath mkAtom(Value v) {
        AccessPath p;
        p.kind = Kind::Atom;
        p.atom = std::move(v);
        return p;
    }
    static AccessPath mkInput() {
        AccessPath p;
        p.kind = Kind::Atom;
        p.atom = Value::star();
        p.unknownInput = true;
        return p;
    }
    static AccessPath mkSeq(std::vector<AccessPath> elems) {
        AccessPath p;
        p.kind = Kind::Seq;
        p.elems = std::move(elems);
        return p;
    }

    bool isAtom() const { return kind == Kind::Atom; }
    bool isSeq() const { return kind == Kind::Seq; }
    size_t depth() const { return elems.size(); }

    std::string toString() const {
        if (isAtom()) return atom.toString();
        std::ostringstream os;
        os << "[]";
        for (const auto& e : elems) os << '[' << e.toString() << ']';
        return os.str();
    }
};

/// A fully concrete path: literal / unknown-field index names only.
using ConcretePath = std::vector<Value>;

inline std::string concretePathToString(const ConcretePath& p) {
    std::ostringstream os;
    os << "[]";
    for (const auto& v : p) os << '[' << v.toString() << ']';
    return os.str();
}

inline AccessPath lowerExpr(const Expr& e);

/// Lowers a source access expression to the access path rooted at the
/// symbol table: the base name is the level-1 element, each index
/// expression a further element.
inline AccessPath lowerAccess(const AccessExpr& a) {
    std::vector<AccessPath> elems;
    if (a.baseExpr) elems.push_back(lowerExpr(*a.baseExpr));
    else elems.push_back(AccessPath::mkAtom(Value::ofStr(a.baseName)));
    for (const auto& idx : a.indices) elems.push_back(lowerExpr(*idx));
    return AccessPath::mkSeq(std::move(elems));
}

inline AccessPath lowerExpr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Lit: return AccessPath::mkAtom(e.lit.toValue());
        case Expr::Kind::UnknownInput: return AccessPath::mkInput();
        case Expr::Kind::Access: return lowerAccess(e.access);
    }
    return AccessPath::mkAtom(Value::undef());
}

} // namespace minidyn
