#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "minidyn/ast.hpp"

namespace minidyn {

struct CfgNode {
    enum class Kind { Entry, Exit, Assign, Alias, Branch, Join };
    int id = 0;
    Kind kind = Kind::Entry;
    const Stmt* stmt = nullptr; // Assign/Alias/Branch nodes
    SourceSpan span;            // {0,0,0} for entry/exit
    std::vector<int> succs, preds;
};

inline const char* kindName(CfgNode::Kind k) {
    switch (k) {
        case CfgNode::Kind::Entry: return "entry";
        case CfgNode::Kind::Exit: return "exit";
        case CfgNode::Kind::Assign: return "assign";
        case CfgNode::Kind::Alias: return "alias";
        case CfgNode::Kind::Branch: return "branch";
        case CfgNode::Kind::Join: return "join";
    }
    return "?";
}

struct Cfg {
    std::vector<CfgNode> nodes;
    int entry = 0, exit = 0;
    std::map<const Stmt*, int> stmtNode; // statement → its assign/alias node

    int addNode(CfgNode::Kind kind, const Stmt* stmt, SourceSpan span) {
        int id = static_cast<int>(nodes.size());
        nodes.push_back(CfgNode{id, kind, stmt, span, {}, {}});
        return id;
    }
    void addEdge(int from, int to) {
        nodes[from].succs.push_back(to);
        nodes[to].preds.push_back(from);
    }
};

namespace detail {

inline int buildBlock(Cfg& cfg, const std::vector<StmtPtr>& stmts, int cur);

inline int buildStmt(Cfg& cfg, const Stmt& s, int cur) {
    switch (s.kind) {
        case Stmt::Kind::Assign: {
            int n = cfg.addNode(CfgNode::Kind::Assign, &s, s.span);
            cfg.stmtNode[&s] = n;
            cfg.addEdge(cur, n);
            return n;
        }
        case Stmt::Kind::AliasAssign: {
            int n = cfg.addNode(CfgNode::Kind::Alias, &s, s.span);
            cfg.stmtNode[&s] = n;
            cfg.addEdge(cur, n);
            return n;
        }
        case Stmt::Kind::If: {
            int branch = cfg.addNode(CfgNode::Kind::Branch, &s, s.span);
            cfg.addEdge(cur, branch);
            int thenEnd = buildBlock(cfg, s.thenBlock.stmts, branch);
            int elseEnd =
                s.hasElse ? buildBlock(cfg, s.elseBlock.stmts, branch) : branch;
            // the join is addressed by the closing brace of the last block
            SourceSpan joinSpan =
                s.hasElse ? s.elseBlock.close : s.thenBlock.close;
            int join = cfg.addNode(CfgNode::Kind::Join, nullptr, joinSpan);
            cfg.addEdge(thenEnd, join);
            cfg.addEdge(elseEnd, join);
            return join;
        }
        case Stmt::Kind::While: {
            int head = cfg.addNode(CfgNode::Kind::Join, nullptr, s.span);
            cfg.addEdge(cur, head);
            int branch = cfg.addNode(CfgNode::Kind::Branch, &s, s.span);
            cfg.addEdge(head, branch);
            int bodyEnd = buildBlock(cfg, s.thenBlock.stmts, branch);
            cfg.addEdge(bodyEnd, head); // back edge
            return branch;              // fall-through successor added by caller
        }
    }
    return cur;
}

inline int buildBlock(Cfg& cfg, const std::vector<StmtPtr>& stmts, int cur) {
    for (const StmtPtr& s : stmts) cur = buildStmt(cfg, *s, cur);
    return cur;
}

} // namespace detail

inline Cfg buildCfg(const Program& program) {
    Cfg cfg;
    cfg.entry = cfg.addNode(CfgNode::Kind::Entry, nullptr, SourceSpan{0, 0, 0});
    int cur = detail::buildBlock(cfg, program.stmts, cfg.entry);
    cfg.exit = cfg.addNode(CfgNode::Kind::Exit, nullptr, SourceSpan{0, 0, 0});
    cfg.addEdge(cur, cfg.exit);
    return cfg;
}

inline std::string dumpDot(const Cfg& cfg) {
    std::ostringstream os;
    os << "digraph cfg {\n";
    for (const CfgNode& n : cfg.nodes) {
        os << "  n" << n.id << " [label=\"" << n.id << ": " << kindName(n.kind);
        if (n.span.line > 0) os << " (line " << n.span.line << ")";
        os << "\"";
        if (n.kind == CfgNode::Kind::Entry || n.kind == CfgNode::Kind::Exit)
            os << " shape=doublecircle";
        else if (n.kind == CfgNode::Kind::Join)
            os << " shape=diamond";
        os << "];\n";
    }
    for (const CfgNode& n : cfg.nodes)
        for (int s : n.succs) os << "  n" << n.id << " -> n" << s << ";\n";
    os << "}\n";
    return os.str();
}

/// The last node whose source line is `line` (query addressing).
inline int nodeAtLine(const Cfg& cfg, int line) {
    int best = -1;
    for (const CfgNode& n : cfg.nodes)
        if (n.span.line == line) best = n.id;
    return best;
}

} // namespace minidyn
