#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minidyn/bench.hpp"
#include "minidyn/cfg.hpp"
#include "minidyn/engine.hpp"
#include "minidyn/json_dump.hpp"
#include "minidyn/oracle.hpp"
#include "minidyn/parser.hpp"
#include "minidyn/query.hpp"

using namespace minidyn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInputError = 2;

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeFile(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << text;
}

struct Analyzed {
    Program prog;
    Cfg cfg;
    AnalysisResult result;
};

Analyzed analyzeFile(const std::string& file, const EngineConfig& cfg) {
    Analyzed a{parse(readFile(file)), {}, {}};
    a.cfg = buildCfg(a.prog);
    a.result = analyze(a.cfg, cfg);
    return a;
}

std::vector<oracle::CVal> parsePool(const std::string& spec) {
    std::vector<oracle::CVal> pool;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        bool numeric = tok[0] == '-' ? tok.size() > 1 : true;
        for (size_t i = (tok[0] == '-' ? 1 : 0); i < tok.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(tok[i])))
                numeric = false;
        if (numeric)
            pool.push_back(oracle::CVal{std::stoll(tok)});
        else
            pool.push_back(oracle::CVal{tok});
    }
    return pool;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minidyn — value and points-to analyzer for a small dynamic language"};
    app.require_subcommand(1);

    EngineConfig engineCfg;

    // analyze
    auto* cmdAnalyze = app.add_subcommand("analyze", "Run the analysis and print a summary");
    std::string anFile, anJson;
    cmdAnalyze->add_option("file", anFile)->required();
    cmdAnalyze->add_option("--json", anJson, "Write a full JSON report");
    cmdAnalyze->add_option("--depth-limit", engineCfg.depthLimit);
    cmdAnalyze->add_option("--value-limit", engineCfg.valueWidthLimit);

    // query
    auto* cmdQuery = app.add_subcommand("query", "Evaluate access paths at a program point");
    std::string qFile, qAt = "exit";
    std::vector<std::string> qPaths;
    cmdQuery->add_option("file", qFile)->required();
    cmdQuery->add_option("--at", qAt, "Source line or 'exit'");
    cmdQuery->add_option("--path", qPaths, "Access path (repeatable)")->required();
    cmdQuery->add_option("--depth-limit", engineCfg.depthLimit);
    cmdQuery->add_option("--value-limit", engineCfg.valueWidthLimit);

    // dump-cfg
    auto* cmdDump = app.add_subcommand("dump-cfg", "Print the CFG as DOT");
    std::string dFile;
    cmdDump->add_option("file", dFile)->required();

    // oracle-check
    auto* cmdOracle = app.add_subcommand("oracle-check", "Check analysis soundness against the concrete interpreter");
    std::string oFile, oPool = "0,1,2,3,k";
    uint64_t oSeed = 42;
    size_t oBudget = 100000;
    cmdOracle->add_option("file", oFile)->required();
    cmdOracle->add_option("--pool", oPool, "Comma-separated input pool");
    cmdOracle->add_option("--seed", oSeed);
    cmdOracle->add_option("--budget", oBudget, "Maximum input assignments");

    // gen-bench
    auto* cmdGen = app.add_subcommand("gen-bench", "Generate a benchmark program");
    size_t gN = 0;
    bool gMerged = false;
    std::string gOut;
    cmdGen->add_option("--n", gN)->required();
    cmdGen->add_flag("--merged", gMerged);
    cmdGen->add_option("-o,--output", gOut)->required();

    // run-bench
    auto* cmdRun = app.add_subcommand("run-bench", "Run the scaling benchmark suite");
    size_t rMaxN = 3;
    std::string rOut;
    cmdRun->add_option("--max-n", rMaxN)->required();
    cmdRun->add_option("-o,--output", rOut)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmdAnalyze->parsed()) {
            Analyzed a = analyzeFile(anFile, engineCfg);
            std::cout << "nodes: " << a.cfg.nodes.size()
                      << "\niterations: " << a.result.iterations
                      << "\nwidenings: " << a.result.widenings.size() << "\n";
            if (a.result.out[a.cfg.exit])
                std::cout << "exit variables: "
                          << a.result.out[a.cfg.exit]->allVars().size() - 1
                          << "\n";
            if (!anJson.empty())
                writeFile(anJson,
                          analysisToJson(a.cfg, a.result).dump(2) + "\n");
            return kExitOk;
        }
        if (cmdQuery->parsed()) {
            Analyzed a = analyzeFile(qFile, engineCfg);
            int node;
            if (qAt == "exit") {
                node = a.cfg.exit;
            } else {
                int line;
                try {
                    line = std::stoi(qAt);
                } catch (...) {
                    std::cerr << "error: --at expects a line number or 'exit'\n";
                    return kExitInputError;
                }
                node = nodeAtLine(a.cfg, line);
                if (node < 0) {
                    std::cerr << "error: no statement at line " << line << "\n";
                    return kExitInputError;
                }
            }
            if (!a.result.out[node]) {
                std::cerr << "error: no state computed at that point\n";
                return kExitInputError;
            }
            for (const std::string& p : qPaths) {
                auto ap = query::parsePath(p);
                if (!ap) {
                    std::cerr << "error: malformed access path: " << p << "\n";
                    return kExitInputError;
                }
                std::cout << query::renderValues(eval(*a.result.out[node], *ap))
                          << "\n";
            }
            return kExitOk;
        }
        if (cmdDump->parsed()) {
            Program prog = parse(readFile(dFile));
            std::cout << dumpDot(buildCfg(prog));
            return kExitOk;
        }
        if (cmdOracle->parsed()) {
            Analyzed a = analyzeFile(oFile, engineCfg);
            auto pool = parsePool(oPool);
            if (pool.empty()) {
                std::cerr << "error: empty input pool\n";
                return kExitInputError;
            }
            auto report = oracle::checkSoundness(a.prog, a.cfg, a.result, pool,
                                                 oBudget, oSeed);
            std::cout << "assignments tried: " << report.assignmentsTried
                      << "\ntraces completed: " << report.tracesCompleted
                      << "\nbudget exceeded: " << report.budgetExceeded
                      << "\ncycle-stopped traces: " << report.cyclesStopped
                      << "\npoints checked: " << report.pointsChecked
                      << "\nexhaustive: " << (report.exhaustive ? "yes" : "no")
                      << "\nviolations: " << report.violations.size() << "\n";
            for (const auto& v : report.violations)
                std::cout << "  line " << v.line << " " << v.path << " saw "
                          << v.value << " (inputs: " << v.inputsText << ")\n";
            return report.violations.empty() ? kExitOk : kExitViolations;
        }
        if (cmdGen->parsed()) {
            if (gN > 12) {
                std::cerr << "error: --n must be at most 12\n";
                return kExitInputError;
            }
            writeFile(gOut, bench::generate(bench::BenchSpec{gN, gMerged}));
            return kExitOk;
        }
        if (cmdRun->parsed()) {
            if (rMaxN > 12) {
                std::cerr << "error: --max-n must be at most 12\n";
                return kExitInputError;
            }
            auto rows = bench::runScaling(rMaxN, engineCfg);
            std::string csv = bench::toCsv(rows);
            writeFile(rOut, csv);
            std::cout << csv;
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInputError;
    } catch (const AnalysisError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
