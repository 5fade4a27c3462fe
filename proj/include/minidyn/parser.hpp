#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "minidyn/ast.hpp"

namespace minidyn {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" +
                             std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

namespace detail {

struct Token {
    enum class Kind {
        Dollar, Ident, Int, Str, LBrace, RBrace, LBracket, RBracket,
        LParen, RParen, Semi, Assign, Amp, KwIf, KwElse, KwWhile, KwInput,
        Eof
    };
    Kind kind;
    std::string text;
    int64_t intVal = 0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { next(); }

    const Token& peek() const { return tok_; }
    Token take() { Token t = tok_; next(); return t; }

private:
    void next() {
        skipWs();
        tok_.line = line_;
        tok_.column = col_;
        tok_.text.clear();
        if (pos_ >= src_.size()) { tok_.kind = Token::Kind::Eof; return; }
        char c = src_[pos_];
        switch (c) {
            case '$': advance(); tok_.kind = Token::Kind::Dollar; return;
            case '{': advance(); tok_.kind = Token::Kind::LBrace; return;
            case '}': advance(); tok_.kind = Token::Kind::RBrace; return;
            case '[': advance(); tok_.kind = Token::Kind::LBracket; return;
            case ']': advance(); tok_.kind = Token::Kind::RBracket; return;
            case '(': advance(); tok_.kind = Token::Kind::LParen; return;
            case ')': advance(); tok_.kind = Token::Kind::RParen; return;
            case ';': advance(); tok_.kind = Token::Kind::Semi; return;
            case '=': advance(); tok_.kind = Token::Kind::Assign; return;
            case '&': advance(); tok_.kind = Token::Kind::Amp; return;
            case '\'': lexString(); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            lexInt();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            lexIdent();
            return;
        }
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }

    void skipWs() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (src_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }

    void lexString() {
        advance(); // opening quote
        std::string out;
        while (pos_ < src_.size() && src_[pos_] != '\'') {
            if (src_[pos_] == '\n')
                throw ParseError(tok_.line, tok_.column, "unterminated string");
            out.push_back(src_[pos_]);
            advance();
        }
        if (pos_ >= src_.size())
            throw ParseError(tok_.line, tok_.column, "unterminated string");
        advance(); // closing quote
        tok_.kind = Token::Kind::Str;
        tok_.text = std::move(out);
    }

    void lexInt() {
        std::string out;
        if (src_[pos_] == '-') { out.push_back('-'); advance(); }
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            out.push_back(src_[pos_]);
            advance();
        }
        tok_.kind = Token::Kind::Int;
        try {
            tok_.intVal = std::stoll(out);
        } catch (const std::out_of_range&) {
            throw ParseError(tok_.line, tok_.column, "integer literal out of range");
        }
    }

    void lexIdent() {
        std::string out;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            out.push_back(src_[pos_]);
            advance();
        }
        if (out == "if") tok_.kind = Token::Kind::KwIf;
        else if (out == "else") tok_.kind = Token::Kind::KwElse;
        else if (out == "while") tok_.kind = Token::Kind::KwWhile;
        else if (out == "input") tok_.kind = Token::Kind::KwInput;
        else tok_.kind = Token::Kind::Ident;
        tok_.text = std::move(out);
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    Program parseProgram() {
        Program p;
        while (lex_.peek().kind != Token::Kind::Eof) p.stmts.push_back(parseStmt());
        return p;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.column, msg);
    }

    Token expect(Token::Kind k, const char* what) {
        if (lex_.peek().kind != k) fail(lex_.peek(), std::string("expected ") + what);
        return lex_.take();
    }

    static SourceSpan spanOf(const Token& t) {
        return SourceSpan{t.line, t.column, static_cast<int>(t.text.size())};
    }

    StmtPtr parseStmt() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::KwIf: return parseIf();
            case Token::Kind::KwWhile: return parseWhile();
            case Token::Kind::Dollar: return parseAssignOrAlias();
            default: fail(t, "statement");
        }
    }

    StmtPtr parseIf() {
        Token kw = lex_.take();
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::If;
        s->span = spanOf(kw);
        expect(Token::Kind::LParen, "'('");
        s->cond = parseExpr();
        expect(Token::Kind::RParen, "')'");
        s->thenBlock = parseBlock();
        if (lex_.peek().kind == Token::Kind::KwElse) {
            lex_.take();
            s->hasElse = true;
            s->elseBlock = parseBlock();
        }
        return s;
    }

    StmtPtr parseWhile() {
        Token kw = lex_.take();
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::While;
        s->span = spanOf(kw);
        expect(Token::Kind::LParen, "'('");
        s->cond = parseExpr();
        expect(Token::Kind::RParen, "')'");
        s->thenBlock = parseBlock();
        return s;
    }

    Block parseBlock() {
        Block b;
        Token open = expect(Token::Kind::LBrace, "'{'");
        b.open = spanOf(open);
        while (lex_.peek().kind != Token::Kind::RBrace) {
            if (lex_.peek().kind == Token::Kind::Eof) fail(lex_.peek(), "'}'");
            b.stmts.push_back(parseStmt());
        }
        Token close = lex_.take();
        b.close = spanOf(close);
        return b;
    }

    StmtPtr parseAssignOrAlias() {
        auto s = std::make_shared<Stmt>();
        AccessExpr lhs = parseAccess();
        s->span = lhs.span;
        s->lhs = std::move(lhs);
        expect(Token::Kind::Assign, "'='");
        if (lex_.peek().kind == Token::Kind::Amp) {
            lex_.take();
            s->kind = Stmt::Kind::AliasAssign;
            s->aliasRhs = parseAccess();
        } else {
            s->kind = Stmt::Kind::Assign;
            s->rhs = parseExpr();
        }
        expect(Token::Kind::Semi, "';'");
        return s;
    }

    // access := "$" (IDENT | "{" expr "}" | access) ("[" expr "]")*
    AccessExpr parseAccess() {
        Token dollar = expect(Token::Kind::Dollar, "'$'");
        AccessExpr a;
        a.span = spanOf(dollar);
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Ident) {
            a.baseName = lex_.take().text;
        } else if (t.kind == Token::Kind::LBrace) {
            lex_.take();
            a.baseExpr = parseExpr();
            expect(Token::Kind::RBrace, "'}'");
        } else if (t.kind == Token::Kind::Dollar) {
            // variable-variable: $$e is sugar for ${$e}
            AccessExpr inner = parseAccess();
            a.baseExpr = Expr::mkAccess(inner, inner.span);
            return finishIndices(std::move(a));
        } else {
            fail(t, "identifier or '{'");
        }
        return finishIndices(std::move(a));
    }

    AccessExpr finishIndices(AccessExpr a) {
        while (lex_.peek().kind == Token::Kind::LBracket) {
            lex_.take();
            a.indices.push_back(parseExpr());
            expect(Token::Kind::RBracket, "']'");
        }
        return a;
    }

    // `$_GET[<string>]` in expression position is surface sugar for input()
    static bool isInputSugar(const AccessExpr& a) {
        return !a.baseExpr && a.baseName == "_GET" && a.indices.size() == 1 &&
               a.indices[0]->kind == Expr::Kind::Lit &&
               a.indices[0]->lit.kind == Literal::Kind::Str;
    }

    ExprPtr parseExpr() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::Int: {
                Token tk = lex_.take();
                return Expr::mkLit(Literal::ofInt(tk.intVal), spanOf(tk));
            }
            case Token::Kind::Str: {
                Token tk = lex_.take();
                return Expr::mkLit(Literal::ofStr(tk.text), spanOf(tk));
            }
            case Token::Kind::KwInput: {
                Token tk = lex_.take();
                expect(Token::Kind::LParen, "'('");
                expect(Token::Kind::RParen, "')'");
                return Expr::mkInput(spanOf(tk));
            }
            case Token::Kind::Dollar: {
                AccessExpr a = parseAccess();
                if (isInputSugar(a)) return Expr::mkInput(a.span);
                SourceSpan sp = a.span;
                return Expr::mkAccess(std::move(a), sp);
            }
            default:
                fail(t, "expression");
        }
    }

    Lexer lex_;
};

} // namespace detail

/// Parses MiniDyn source text; throws ParseError with line/column on
/// malformed input.
inline Program parse(std::string_view source) {
    detail::Parser p(source);
    return p.parseProgram();
}

} // namespace minidyn
