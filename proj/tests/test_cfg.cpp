#include <catch2/catch_amalgamated.hpp>

#include "minidyn/cfg.hpp"
#include "minidyn/parser.hpp"
#include "test_util.hpp"

using namespace minidyn;

TEST_CASE("straight-line program: entry, one node per stmt, exit") {
    Cfg cfg = buildCfg(parse("$a = 1;\n$b = 2;\n$c = &$a;\n"));
    CHECK(cfg.nodes.size() == 5);
    CHECK(cfg.nodes[cfg.entry].kind == CfgNode::Kind::Entry);
    CHECK(cfg.nodes[cfg.exit].kind == CfgNode::Kind::Exit);
    // linear chain
    for (int n = cfg.entry; n != cfg.exit;) {
        REQUIRE(cfg.nodes[n].succs.size() == 1);
        n = cfg.nodes[n].succs[0];
    }
}

TEST_CASE("if/else introduces a branch and a join") {
    Cfg cfg = buildCfg(parse("if ($c) { $x = 1; } else { $x = 2; }\n$y = 3;\n"));
    int branches = 0, joins = 0;
    for (const CfgNode& n : cfg.nodes) {
        if (n.succs.size() == 2) branches++;
        if (n.preds.size() == 2) joins++;
    }
    CHECK(branches == 1);
    CHECK(joins == 1);
}

TEST_CASE("if without else still joins both paths") {
    Cfg cfg = buildCfg(parse("if ($c) { $x = 1; }\n$y = 3;\n"));
    int joins = 0;
    for (const CfgNode& n : cfg.nodes)
        if (n.preds.size() == 2) joins++;
    CHECK(joins == 1);
}

TEST_CASE("while creates a back edge") {
    Cfg cfg = buildCfg(parse("while ($c) { $x = 1; }\n"));
    bool backEdge = false;
    for (int i = 0; i < (int)cfg.nodes.size(); ++i)
        for (int s : cfg.nodes[i].succs)
            if (s <= i) backEdge = true;
    CHECK(backEdge);
}

TEST_CASE("statement nodes carry source spans and the stmt map is total") {
    Program p = parse("$a = 1;\nif ($c) {\n    $b = 2;\n}\n");
    Cfg cfg = buildCfg(p);
    for (const CfgNode& n : cfg.nodes) {
        if (n.kind == CfgNode::Kind::Assign || n.kind == CfgNode::Kind::Alias) {
            REQUIRE(n.stmt != nullptr);
            CHECK(n.span.line >= 1);
            CHECK(cfg.stmtNode.at(n.stmt) >= 0);
        }
    }
    CHECK(nodeAtLine(cfg, 1) >= 0);
    CHECK(nodeAtLine(cfg, 3) >= 0);
    CHECK(nodeAtLine(cfg, 99) < 0);
}

TEST_CASE("dot dump mentions every node and edge") {
    Cfg cfg = buildCfg(parse("if ($c) { $x = 1; } else { $x = 2; }\n"));
    std::string dot = dumpDot(cfg);
    CHECK(dot.find("digraph") != std::string::npos);
    size_t edges = 0;
    for (const CfgNode& n : cfg.nodes) edges += n.succs.size();
    size_t arrows = 0;
    for (size_t pos = dot.find("->"); pos != std::string::npos;
         pos = dot.find("->", pos + 2))
        arrows++;
    CHECK(arrows == edges);
}

TEST_CASE("edges are consistent: succs and preds mirror each other") {
    Cfg cfg = buildCfg(parse("while ($c) { if ($d) { $x = 1; } }\n$y = 2;\n"));
    for (int i = 0; i < (int)cfg.nodes.size(); ++i) {
        for (int s : cfg.nodes[i].succs) {
            auto& preds = cfg.nodes[s].preds;
            CHECK(std::find(preds.begin(), preds.end(), i) != preds.end());
        }
        for (int p : cfg.nodes[i].preds) {
            auto& succs = cfg.nodes[p].succs;
            CHECK(std::find(succs.begin(), succs.end(), i) != succs.end());
        }
    }
}
