#include <catch2/catch_amalgamated.hpp>

#include "minidyn/ast.hpp"
#include "minidyn/parser.hpp"
#include "test_util.hpp"

using namespace minidyn;

TEST_CASE("parses simple assignment forms") {
    Program p = parse("$x = 1;\n$y = 'str';\n$z = $x;\n$w = input();\n");
    REQUIRE(p.stmts.size() == 4);
    CHECK(p.stmts[0]->kind == Stmt::Kind::Assign);
    CHECK(p.stmts[0]->rhs->kind == Expr::Kind::Lit);
    CHECK(p.stmts[1]->rhs->lit.kind == Literal::Kind::Str);
    CHECK(p.stmts[2]->rhs->kind == Expr::Kind::Access);
    CHECK(p.stmts[3]->rhs->kind == Expr::Kind::UnknownInput);
}

TEST_CASE("parses nested dynamic indices") {
    Program p = parse("$a[$b[2]][input()]['k'] = $c[$d];\n");
    REQUIRE(p.stmts.size() == 1);
    const AccessExpr& lhs = p.stmts[0]->lhs;
    CHECK(lhs.baseName == "a");
    REQUIRE(lhs.indices.size() == 3);
    CHECK(lhs.indices[0]->kind == Expr::Kind::Access);
    CHECK(lhs.indices[1]->kind == Expr::Kind::UnknownInput);
    CHECK(lhs.indices[2]->kind == Expr::Kind::Lit);
}

TEST_CASE("parses alias assignments") {
    Program p = parse("$x = &$y[1];\n");
    REQUIRE(p.stmts.size() == 1);
    CHECK(p.stmts[0]->kind == Stmt::Kind::AliasAssign);
    CHECK(p.stmts[0]->aliasRhs.baseName == "y");
}

TEST_CASE("parses if/else and while blocks") {
    Program p = parse("if ($c) { $x = 1; } else { $x = 2; }\n"
                      "while ($x) { $x = $y; }\n");
    REQUIRE(p.stmts.size() == 2);
    CHECK(p.stmts[0]->kind == Stmt::Kind::If);
    CHECK(p.stmts[0]->hasElse);
    CHECK(p.stmts[0]->thenBlock.stmts.size() == 1);
    CHECK(p.stmts[1]->kind == Stmt::Kind::While);
}

TEST_CASE("if without else") {
    Program p = parse("if ($c) { $x = 1; }\n");
    REQUIRE(p.stmts.size() == 1);
    CHECK_FALSE(p.stmts[0]->hasElse);
}

TEST_CASE("print/parse round-trip is identity on the AST") {
    const char* src = "$arr[1][2] = 3;\n"
                      "if ($any) {\n"
                      "    $t = $arr[$x][2];\n"
                      "} else {\n"
                      "    $u = &$arr[1];\n"
                      "}\n"
                      "while ($u) {\n"
                      "    $u = input();\n"
                      "}\n";
    Program p1 = parse(src);
    std::string printed = printProgram(p1);
    Program p2 = parse(printed);
    CHECK(programEq(p1, p2));
    CHECK(printProgram(p2) == printed);
}

TEST_CASE("line numbers are recorded") {
    Program p = parse("$a = 1;\n\n$b = 2;\n");
    CHECK(p.stmts[0]->span.line == 1);
    CHECK(p.stmts[1]->span.line == 3);
}

TEST_CASE("negative integers and quoted strings") {
    Program p = parse("$a = -5;\n$b = 'sq';\n");
    CHECK(p.stmts[0]->rhs->lit.intVal == -5);
    CHECK(p.stmts[1]->rhs->lit.strVal == "sq");
    // only single-quoted strings are in the grammar
    CHECK_THROWS_AS(parse("$b = \"dq\";\n"), ParseError);
}

TEST_CASE("parse errors carry line/column and are rejected") {
    CHECK_THROWS_AS(parse("$x = ;\n"), ParseError);
    CHECK_THROWS_AS(parse("x = 1;\n"), ParseError);
    CHECK_THROWS_AS(parse("$x = 1\n$y = 2;\n"), ParseError);
    CHECK_THROWS_AS(parse("if $c { $x = 1; }\n"), ParseError);
    CHECK_THROWS_AS(parse("$x = 'unterminated;\n"), ParseError);
    try {
        parse("$a = 1;\n$b = ;\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("fixture parses and prints stably") {
    std::string src = testutil::slurp(testutil::fixturePath("running_example.mdyn"));
    Program p = parse(src);
    CHECK(p.stmts.size() >= 10);
    Program p2 = parse(printProgram(p));
    CHECK(programEq(p, p2));
}
