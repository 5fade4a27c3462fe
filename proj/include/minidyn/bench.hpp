#pragma once

#include <chrono>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "minidyn/cfg.hpp"
#include "minidyn/engine.hpp"
#include "minidyn/parser.hpp"

namespace minidyn::bench {

struct BenchSpec {
    size_t n = 0;
    bool merged = false; // mCODE vs CODE
};

namespace detail {

/// One replica of the §2 running-example body (its lines 2–19), every
/// variable except $any carrying the replica prefix.
inline void emitReplica(std::string& out, const std::string& prefix,
                        int indent) {
    auto p = [&](const std::string& name) { return "$" + prefix + name; };
    std::string pad(static_cast<size_t>(indent) * 4, ' ');
    auto line = [&](const std::string& text) { out += pad + text + "\n"; };
    line(p("alias") + " = 1; " + p("alias2") + " = 1; " + p("alias3") +
         " = 1;");
    line("if ($any) {");
    line("    " + p("arr") + "[$any] = &" + p("alias") + ";");
    line("    " + p("t") + " = " + p("arr") + "[1];");
    line("    " + p("t") + "[2] = 2;");
    line("    " + p("arr") + "[1][2] = 3;");
    line("    " + p("arr") + "[1][3] = 4;");
    line("    " + p("arr") + "[2][3] = 5;");
    line("} else {");
    line("    " + p("arr") + "[$any][2] = 6;");
    line("    " + p("arr") + "[1][$any] = 7;");
    line("}");
    line(p("arr") + "[2][1] = &" + p("alias2") + ";");
    line(p("arr") + "[2] = &" + p("alias3") + ";");
    line(p("arr2") + " = " + p("arr") + ";");
    line(p("arr2") + "[2] = 8;");
    line(p("arr2") + "[3] = 9;");
}

inline void emitBody(std::string& out, const std::string& armTag, size_t n,
                     int indent) {
    size_t replicas = size_t{1} << n;
    for (size_t k = 0; k < replicas; ++k)
        emitReplica(out, armTag + "r" + std::to_string(k) + "_", indent);
}

} // namespace detail

inline std::string generate(const BenchSpec& spec) {
    std::string out = "$any = input();\n";
    if (!spec.merged) {
        detail::emitBody(out, "", spec.n, 0);
        return out;
    }
    // Distinct prefixes per arm so the top-level merge touches every
    // variable of both copies.
    out += "if ($any) {\n";
    detail::emitBody(out, "a", spec.n, 1);
    out += "} else {\n";
    detail::emitBody(out, "b", spec.n, 1);
    out += "}\n";
    return out;
}

struct BenchRow {
    std::string variant; // "CODE" or "mCODE"
    size_t n = 0;
    size_t cfgNodes = 0;
    size_t variables = 0;
    double wallMs = 0.0;
};

inline BenchRow runOne(const BenchSpec& spec, const EngineConfig& config) {
    BenchRow row;
    row.variant = spec.merged ? "mCODE" : "CODE";
    row.n = spec.n;
    Program prog = parse(generate(spec));
    Cfg cfg = buildCfg(prog);
    row.cfgNodes = cfg.nodes.size();
    auto t0 = std::chrono::steady_clock::now();
    AnalysisResult res = analyze(cfg, config);
    auto t1 = std::chrono::steady_clock::now();
    row.wallMs =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (res.out[cfg.exit])
        row.variables = res.out[cfg.exit]->allVars().size() - 1; // sans root
    return row;
}

inline std::vector<BenchRow> runScaling(size_t maxN,
                                        const EngineConfig& config) {
    std::vector<BenchRow> rows;
    for (size_t n = 0; n <= maxN; ++n)
        rows.push_back(runOne(BenchSpec{n, false}, config));
    for (size_t n = 0; n <= maxN; ++n)
        rows.push_back(runOne(BenchSpec{n, true}, config));
    return rows;
}

inline std::string toCsv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "variant,n,cfg_nodes,variables,wall_ms\n";
    for (const auto& r : rows)
        os << r.variant << ',' << r.n << ',' << r.cfgNodes << ','
           << r.variables << ',' << r.wallMs << "\n";
    return os.str();
}

} // namespace minidyn::bench
