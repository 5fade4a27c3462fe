#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace minidyn::randgen {

struct GenConfig {
    uint64_t seed = 1;
    size_t maxStmts = 30;
    int maxAccessDepth = 4;   // indices per access (syntactic)
    int maxInputs = 3;        // occurrences of input() in the program
    bool allowWhile = false;
    int maxBlockDepth = 3;
};

namespace detail {

class Gen {
public:
    explicit Gen(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

    std::string run() {
        std::string out;
        size_t n = 1 + rng_() % cfg_.maxStmts;
        genBlock(out, 0, n);
        return out;
    }

private:
    const GenConfig& cfg_;
    std::mt19937_64 rng_;
    int inputsUsed_ = 0;
    size_t emitted_ = 0;

    size_t pick(size_t n) { return rng_() % n; }

    std::string var() {
        static const char* pool[] = {"a", "b", "c", "d", "e"};
        return pool[pick(5)];
    }

    std::string indexExpr() {
        switch (pick(8)) {
            case 0: case 1: case 2: return std::to_string(pick(4)); // 0..3
            case 3: return "'k'";
            case 4: return "'x'";
            case 5: case 6: return "$" + var(); // dynamic index
            default:
                if (inputsUsed_ < cfg_.maxInputs) {
                    ++inputsUsed_;
                    return "input()";
                }
                return std::to_string(pick(4));
        }
    }

    std::string access() {
        std::string a = "$" + var();
        size_t depth = pick(static_cast<size_t>(cfg_.maxAccessDepth) + 1);
        for (size_t i = 0; i < depth; ++i) a += "[" + indexExpr() + "]";
        return a;
    }

    std::string rhs() {
        switch (pick(6)) {
            case 0: return std::to_string(pick(10));
            case 1: return "'" + std::string(1, char('p' + pick(4))) + "'";
            case 2:
                if (inputsUsed_ < cfg_.maxInputs) {
                    ++inputsUsed_;
                    return "input()";
                }
                [[fallthrough]];
            default: return access();
        }
    }

    std::string cond() {
        if (pick(3) == 0 && inputsUsed_ < cfg_.maxInputs) {
            ++inputsUsed_;
            return "input()";
        }
        return access();
    }

    void indent(std::string& out, int depth) {
        out.append(static_cast<size_t>(depth) * 4, ' ');
    }

    void genBlock(std::string& out, int depth, size_t budget) {
        size_t n = 1 + pick(budget);
        for (size_t i = 0; i < n && emitted_ < cfg_.maxStmts; ++i)
            genStmt(out, depth);
    }

    void genStmt(std::string& out, int depth) {
        ++emitted_;
        size_t roll = pick(10);
        if (depth < cfg_.maxBlockDepth && roll == 8) {
            indent(out, depth);
            out += "if (" + cond() + ") {\n";
            genBlock(out, depth + 1, 4);
            if (pick(2) == 0) {
                indent(out, depth);
                out += "} else {\n";
                genBlock(out, depth + 1, 4);
            }
            indent(out, depth);
            out += "}\n";
            return;
        }
        if (depth < cfg_.maxBlockDepth && roll == 9 && cfg_.allowWhile) {
            std::string loopVar = var();
            indent(out, depth);
            out += "while ($" + loopVar + ") {\n";
            genBlock(out, depth + 1, 3);
            // make concrete termination likely
            indent(out, depth + 1);
            out += "$" + loopVar + " = 0;\n";
            indent(out, depth);
            out += "}\n";
            return;
        }
        if (roll >= 6) {
            indent(out, depth);
            out += access() + " = &" + access() + ";\n";
            return;
        }
        indent(out, depth);
        out += access() + " = " + rhs() + ";\n";
    }
};

} // namespace detail

inline std::string genProgram(const GenConfig& cfg) {
    return detail::Gen(cfg).run();
}

} // namespace minidyn::randgen
