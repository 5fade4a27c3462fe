#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "minidyn/value.hpp"

namespace minidyn {

struct SourceSpan {
    int line = 1;   // 1-based
    int column = 1; // 1-based
    int length = 0;
};

struct Literal {
    enum class Kind { Int, Str };
    Kind kind = Kind::Int;
    int64_t intVal = 0;
    std::string strVal;

    static Literal ofInt(int64_t v) { return Literal{Kind::Int, v, {}}; }
    static Literal ofStr(std::string v) { return Literal{Kind::Str, 0, std::move(v)}; }
    Value toValue() const {
        return kind == Kind::Int ? Value::ofInt(intVal) : Value::ofStr(strVal);
    }
    friend bool operator==(const Literal& a, const Literal& b) {
        return a.kind == b.kind && (a.kind == Literal::Kind::Int ? a.intVal == b.intVal
                                                                 : a.strVal == b.strVal);
    }
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

/// Access to a (possibly nested) variable: base name plus one index
/// expression per array dimension. The base is either a plain identifier
/// or an expression (variable-variables, written `${e}` or `$$e`).
struct AccessExpr {
    std::string baseName;      // used when baseExpr == nullptr
    ExprPtr baseExpr;          // non-null for dynamic bases
    std::vector<ExprPtr> indices;
    SourceSpan span;
};

struct Expr {
    enum class Kind { Lit, UnknownInput, Access };
    Kind kind = Kind::Lit;
    Literal lit;
    AccessExpr access;
    SourceSpan span;

    static ExprPtr mkLit(Literal l, SourceSpan sp = {}) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Lit; e->lit = std::move(l); e->span = sp;
        return e;
    }
    static ExprPtr mkInput(SourceSpan sp = {}) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::UnknownInput; e->span = sp;
        return e;
    }
    static ExprPtr mkAccess(AccessExpr a, SourceSpan sp = {}) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Access; e->access = std::move(a); e->span = sp;
        return e;
    }
};

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct Block {
    std::vector<StmtPtr> stmts;
    SourceSpan open;   // line of "{"
    SourceSpan close;  // line of "}"
};

struct Stmt {
    enum class Kind { Assign, AliasAssign, If, While };
    Kind kind = Kind::Assign;
    AccessExpr lhs;          // Assign / AliasAssign
    ExprPtr rhs;             // Assign
    AccessExpr aliasRhs;     // AliasAssign
    ExprPtr cond;            // If / While
    Block thenBlock;         // If / While body
    Block elseBlock;         // If
    bool hasElse = false;
    SourceSpan span;
};

struct Program {
    std::vector<StmtPtr> stmts;
};

// ---- printing (canonical form; used by the round-trip property) ----

inline void printExpr(std::ostream& os, const Expr& e);

inline void printAccess(std::ostream& os, const AccessExpr& a) {
    os << '$';
    if (a.baseExpr) {
        os << '{';
        printExpr(os, *a.baseExpr);
        os << '}';
    } else {
        os << a.baseName;
    }
    for (const auto& idx : a.indices) {
        os << '[';
        printExpr(os, *idx);
        os << ']';
    }
}

inline void printExpr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Lit:
            if (e.lit.kind == Literal::Kind::Int) os << e.lit.intVal;
            else os << '\'' << e.lit.strVal << '\'';
            break;
        case Expr::Kind::UnknownInput:
            os << "input()";
            break;
        case Expr::Kind::Access:
            printAccess(os, e.access);
            break;
    }
}

inline void printStmt(std::ostream& os, const Stmt& s, int indent) {
    std::string pad(static_cast<size_t>(indent) * 4, ' ');
    auto printBlock = [&](const Block& b) {
        os << "{\n";
        for (const auto& st : b.stmts) printStmt(os, *st, indent + 1);
        os << pad << "}";
    };
    switch (s.kind) {
        case Stmt::Kind::Assign:
            os << pad;
            printAccess(os, s.lhs);
            os << " = ";
            printExpr(os, *s.rhs);
            os << ";\n";
            break;
        case Stmt::Kind::AliasAssign:
            os << pad;
            printAccess(os, s.lhs);
            os << " = &";
            printAccess(os, s.aliasRhs);
            os << ";\n";
            break;
        case Stmt::Kind::If:
            os << pad << "if (";
            printExpr(os, *s.cond);
            os << ") ";
            printBlock(s.thenBlock);
            if (s.hasElse) {
                os << " else ";
                printBlock(s.elseBlock);
            }
            os << "\n";
            break;
        case Stmt::Kind::While:
            os << pad << "while (";
            printExpr(os, *s.cond);
            os << ") ";
            printBlock(s.thenBlock);
            os << "\n";
            break;
    }
}

inline std::string printProgram(const Program& p) {
    std::ostringstream os;
    for (const auto& s : p.stmts) printStmt(os, *s, 0);
    return os.str();
}

// ---- structural equality (spans ignored) ----

inline bool exprEq(const Expr& a, const Expr& b);

inline bool accessEq(const AccessExpr& a, const AccessExpr& b) {
    if ((a.baseExpr == nullptr) != (b.baseExpr == nullptr)) return false;
    if (a.baseExpr) {
        if (!exprEq(*a.baseExpr, *b.baseExpr)) return false;
    } else if (a.baseName != b.baseName) {
        return false;
    }
    if (a.indices.size() != b.indices.size()) return false;
    for (size_t i = 0; i < a.indices.size(); ++i)
        if (!exprEq(*a.indices[i], *b.indices[i])) return false;
    return true;
}

inline bool exprEq(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Lit: return a.lit == b.lit;
        case Expr::Kind::UnknownInput: return true;
        case Expr::Kind::Access: return accessEq(a.access, b.access);
    }
    return false;
}

inline bool stmtEq(const Stmt& a, const Stmt& b);

inline bool blockEq(const Block& a, const Block& b) {
    if (a.stmts.size() != b.stmts.size()) return false;
    for (size_t i = 0; i < a.stmts.size(); ++i)
        if (!stmtEq(*a.stmts[i], *b.stmts[i])) return false;
    return true;
}

inline bool stmtEq(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Stmt::Kind::Assign:
            return accessEq(a.lhs, b.lhs) && exprEq(*a.rhs, *b.rhs);
        case Stmt::Kind::AliasAssign:
            return accessEq(a.lhs, b.lhs) && accessEq(a.aliasRhs, b.aliasRhs);
        case Stmt::Kind::If:
            return exprEq(*a.cond, *b.cond) && blockEq(a.thenBlock, b.thenBlock) &&
                   a.hasElse == b.hasElse && (!a.hasElse || blockEq(a.elseBlock, b.elseBlock));
        case Stmt::Kind::While:
            return exprEq(*a.cond, *b.cond) && blockEq(a.thenBlock, b.thenBlock);
    }
    return false;
}

inline bool programEq(const Program& a, const Program& b) {
    if (a.stmts.size() != b.stmts.size()) return false;
    for (size_t i = 0; i < a.stmts.size(); ++i)
        if (!stmtEq(*a.stmts[i], *b.stmts[i])) return false;
    return true;
}

} // namespace minidyn
