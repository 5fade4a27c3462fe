#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "minidyn/ast.hpp"
#include "minidyn/cfg.hpp"
#include "minidyn/engine.hpp"
#include "minidyn/read.hpp"

namespace minidyn::oracle {

// ---------------------------------------------------------------------------
// Concrete semantics. Deliberately independent of the abstract domain: the
// only shared vocabulary is the AST and, in the checker, the Value type
// for reporting.
// ---------------------------------------------------------------------------

struct CVal;
using CRef = std::shared_ptr<CVal>;

/// Concrete index key. Null keys arise from indexing with an undefined
/// value; they live in their own key space (no coercion).
struct CKey {
    enum class Kind { Int, Str, Null };
    Kind kind = Kind::Null;
    int64_t i = 0;
    std::string s;

    static CKey ofInt(int64_t v) { return {Kind::Int, v, {}}; }
    static CKey ofStr(std::string v) { return {Kind::Str, 0, std::move(v)}; }
    static CKey null() { return {}; }
    friend bool operator<(const CKey& a, const CKey& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.kind == Kind::Int) return a.i < b.i;
        if (a.kind == Kind::Str) return a.s < b.s;
        return false;
    }
    std::string toString() const {
        switch (kind) {
            case Kind::Int: return std::to_string(i);
            case Kind::Str: return s;
            case Kind::Null: return "<null>";
        }
        return "?";
    }
};

/// An array slot: a cell plus a reference mark. Copying an array shares
/// the cells of reference-marked slots and deep-copies the rest (§2.3's
/// copy semantics).
struct Slot {
    CRef cell;
    bool isRef = false;
};

struct CArr {
    std::map<CKey, Slot> slots;
};

struct CVal {
    // monostate = Null (concrete undefined)
    std::variant<std::monostate, int64_t, std::string, CArr> v;

    bool isNull() const { return std::holds_alternative<std::monostate>(v); }
    bool isArr() const { return std::holds_alternative<CArr>(v); }

    static CVal ofInt(int64_t x) { CVal c; c.v = x; return c; }
    static CVal ofStr(std::string x) { CVal c; c.v = std::move(x); return c; }
};

inline CVal copyVal(const CVal& src, int depthGuard = 24) {
    if (!src.isArr()) return src;
    if (depthGuard <= 0) return CVal{}; // cyclic references: truncate to Null
    CVal out;
    CArr arr;
    for (const auto& [k, slot] : std::get<CArr>(src.v).slots) {
        if (slot.isRef) {
            arr.slots[k] = slot; // shared cell
        } else {
            arr.slots[k] =
                Slot{std::make_shared<CVal>(copyVal(*slot.cell, depthGuard - 1)),
                     false};
        }
    }
    out.v = std::move(arr);
    return out;
}

struct NeedInput {
    size_t position;
};
struct StepBudgetExceeded {};
/// A statement would create a cyclic reference structure (e.g. writing an
/// array through a reference slot that the array's copy still shares).
/// PHP happily builds *RECURSION* here, but the analyzed language's
/// forest-shaped heap has no counterpart, so such executions stop at the
/// offending statement and the oracle checks only their acyclic prefix.
struct CycleDetected {};

inline bool cellReaches(const CVal& v, const CVal* target,
                        std::set<const CVal*>& visited) {
    if (!v.isArr()) return false;
    for (const auto& [k, slot] : std::get<CArr>(v.v).slots) {
        if (slot.cell.get() == target) return true;
        if (visited.insert(slot.cell.get()).second &&
            cellReaches(*slot.cell, target, visited))
            return true;
    }
    return false;
}

inline bool valueReaches(const CVal& v, const CVal* target) {
    std::set<const CVal*> visited;
    return cellReaches(v, target, visited);
}

/// Tree-walking interpreter over a fixed input tape. Throws NeedInput when
/// the tape runs dry (the enumerator extends and replays) and
/// StepBudgetExceeded when the statement budget is exhausted.
class Interp {
public:
    using Observer = std::function<void(const Stmt*)>; // nullptr = exit point

    Interp(const Program& prog, std::vector<CVal> tape, size_t stepBudget,
           Observer obs)
        : prog_(prog), tape_(std::move(tape)), stepBudget_(stepBudget),
          obs_(std::move(obs)) {}

    void run() {
        execBlock(prog_.stmts);
        if (obs_) obs_(nullptr);
    }

    size_t inputsConsumed() const { return pos_; }
    const CArr& globals() const { return globals_; }

private:
    void execBlock(const std::vector<StmtPtr>& stmts) {
        for (const auto& s : stmts) execStmt(*s);
    }

    void execStmt(const Stmt& s) {
        if (++steps_ > stepBudget_) throw StepBudgetExceeded{};
        switch (s.kind) {
            case Stmt::Kind::Assign: {
                CVal val = evalExpr(*s.rhs);
                writeAccess(s.lhs, std::move(val));
                if (obs_) obs_(&s);
                break;
            }
            case Stmt::Kind::AliasAssign: {
                execAlias(s);
                if (obs_) obs_(&s);
                break;
            }
            case Stmt::Kind::If: {
                if (truthy(evalExpr(*s.cond)))
                    execBlock(s.thenBlock.stmts);
                else if (s.hasElse)
                    execBlock(s.elseBlock.stmts);
                break;
            }
            case Stmt::Kind::While: {
                while (truthy(evalExpr(*s.cond))) {
                    if (++steps_ > stepBudget_) throw StepBudgetExceeded{};
                    execBlock(s.thenBlock.stmts);
                }
                break;
            }
        }
    }

    static bool truthy(const CVal& v) {
        if (v.isNull()) return false;
        if (auto* i = std::get_if<int64_t>(&v.v)) return *i != 0;
        if (auto* s = std::get_if<std::string>(&v.v)) return !s->empty();
        return true; // arrays
    }

    CVal input() {
        if (pos_ >= tape_.size()) throw NeedInput{pos_};
        return tape_[pos_++];
    }

    CVal evalExpr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Lit:
                return e.lit.kind == Literal::Kind::Int
                           ? CVal{e.lit.intVal}
                           : CVal{e.lit.strVal};
            case Expr::Kind::UnknownInput: return input();
            case Expr::Kind::Access: return readAccess(e.access);
        }
        return CVal{};
    }

    CKey toKey(const CVal& v) {
        if (auto* i = std::get_if<int64_t>(&v.v)) return CKey::ofInt(*i);
        if (auto* s = std::get_if<std::string>(&v.v)) return CKey::ofStr(*s);
        return CKey::null(); // Null (and arrays, degenerately) index as null
    }

    CKey baseKey(const AccessExpr& a) {
        if (a.baseExpr) return toKey(evalExpr(*a.baseExpr));
        return CKey::ofStr(a.baseName);
    }

    /// Read without creating anything (§2.1: read accesses do not create
    /// indices); any miss yields Null.
    CVal readAccess(const AccessExpr& a) {
        std::vector<CKey> keys{baseKey(a)};
        for (const auto& idx : a.indices) keys.push_back(toKey(evalExpr(*idx)));
        const CArr* cur = &globals_;
        for (size_t i = 0; i + 1 < keys.size(); ++i) {
            auto it = cur->slots.find(keys[i]);
            if (it == cur->slots.end() || !it->second.cell->isArr())
                return CVal{};
            cur = &std::get<CArr>(it->second.cell->v);
        }
        auto it = cur->slots.find(keys.back());
        if (it == cur->slots.end()) return CVal{};
        return copyVal(*it->second.cell);
    }

    /// Walks to the slot for a write, creating missing indices and
    /// materializing arrays over non-array values along the way. Collects
    /// the cells on the container chain for cycle detection.
    Slot& resolveWriteSlot(const AccessExpr& a, std::vector<const CVal*>& chain) {
        std::vector<CKey> keys{baseKey(a)};
        for (const auto& idx : a.indices) keys.push_back(toKey(evalExpr(*idx)));
        CArr* cur = &globals_;
        for (size_t i = 0; i + 1 < keys.size(); ++i) {
            Slot& slot = cur->slots
                             .try_emplace(keys[i],
                                          Slot{std::make_shared<CVal>(), false})
                             .first->second;
            if (!slot.cell->isArr()) slot.cell->v = CArr{}; // materialize in place
            chain.push_back(slot.cell.get());
            cur = &std::get<CArr>(slot.cell->v);
        }
        Slot& slot = cur->slots
                         .try_emplace(keys.back(),
                                      Slot{std::make_shared<CVal>(), false})
                         .first->second;
        chain.push_back(slot.cell.get());
        return slot;
    }

    void writeAccess(const AccessExpr& a, CVal val) {
        std::vector<const CVal*> chain;
        Slot& slot = resolveWriteSlot(a, chain);
        for (const CVal* c : chain)
            if (valueReaches(val, c)) throw CycleDetected{};
        // writing mutates the cell so reference partners observe the value
        slot.cell->v = std::move(val.v);
    }

    /// Alias statement: bind the lhs slot to the rhs cell. A rhs that does
    /// not resolve (the paper's footnote case, excluded) leaves the lhs a
    /// fresh Null, un-referenced.
    void execAlias(const Stmt& s) {
        Slot* rhs = resolveExistingSlot(s.aliasRhs);
        std::vector<const CVal*> chain;
        Slot& lhs = resolveWriteSlot(s.lhs, chain);
        if (!rhs) {
            lhs = Slot{std::make_shared<CVal>(), false};
            return;
        }
        // chain minus the lhs cell itself = the containers the binding
        // must not be reachable from the rhs cell
        chain.pop_back();
        for (const CVal* c : chain)
            if (rhs->cell.get() == c || valueReaches(*rhs->cell, c))
                throw CycleDetected{};
        rhs->isRef = true;
        lhs = Slot{rhs->cell, true};
    }

    Slot* resolveExistingSlot(const AccessExpr& a) {
        std::vector<CKey> keys{baseKey(a)};
        for (const auto& idx : a.indices) keys.push_back(toKey(evalExpr(*idx)));
        CArr* cur = &globals_;
        for (size_t i = 0; i + 1 < keys.size(); ++i) {
            auto it = cur->slots.find(keys[i]);
            if (it == cur->slots.end() || !it->second.cell->isArr())
                return nullptr;
            cur = &std::get<CArr>(it->second.cell->v);
        }
        auto it = cur->slots.find(keys.back());
        return it == cur->slots.end() ? nullptr : &it->second;
    }

    const Program& prog_;
    std::vector<CVal> tape_;
    size_t pos_ = 0;
    size_t steps_ = 0;
    size_t stepBudget_;
    Observer obs_;
    CArr globals_;
};

// ---------------------------------------------------------------------------
// Soundness checker (§3.6 as an executable property).
// ---------------------------------------------------------------------------

struct Violation {
    int node = 0;
    int line = 0;
    std::string path;
    std::string value; // offending concrete value ("null" for Null)
    std::vector<CVal> inputs;
    std::string inputsText;
};

struct OracleReport {
    size_t assignmentsTried = 0;
    size_t tracesCompleted = 0;
    size_t budgetExceeded = 0;
    size_t cyclesStopped = 0; // traces checked only up to a would-be reference cycle
    size_t pointsChecked = 0;
    bool exhaustive = true;
    std::vector<Violation> violations;
};

inline std::string cvalText(const CVal& v) {
    if (v.isNull()) return "null";
    if (auto* i = std::get_if<int64_t>(&v.v)) return std::to_string(*i);
    if (auto* s = std::get_if<std::string>(&v.v)) return "'" + *s + "'";
    return "<array>";
}

namespace detail {

struct Observation {
    // concrete scalar/Null values seen per path, with the first (shortest)
    // input tape exhibiting each
    std::map<std::string, std::map<std::string, std::vector<CVal>>> values;
    std::map<std::string, size_t> boundCount;
    size_t reachCount = 0;
};

inline Value keyToValue(const CKey& k) {
    switch (k.kind) {
        case CKey::Kind::Int: return Value::ofInt(k.i);
        case CKey::Kind::Str: return Value::ofStr(k.s);
        case CKey::Kind::Null: return Value::undef();
    }
    return Value::undef();
}

inline std::string pathText(const std::vector<CKey>& keys) {
    std::string out;
    for (size_t i = 0; i < keys.size(); ++i)
        out += (i == 0 ? "$" : "[") + keys[i].toString() + (i == 0 ? "" : "]");
    return out;
}

/// Record every path to a scalar/Null leaf (bounded depth; beyond the
/// abstract depth limit the analysis answers * anyway).
inline void collectLeaves(const CArr& arr, std::vector<CKey>& prefix,
                          size_t maxDepth, const std::vector<CVal>& tape,
                          Observation& obs) {
    for (const auto& [k, slot] : arr.slots) {
        prefix.push_back(k);
        std::string p = pathText(prefix);
        const CVal& v = *slot.cell;
        if (v.isArr()) {
            if (prefix.size() < maxDepth)
                collectLeaves(std::get<CArr>(v.v), prefix, maxDepth, tape, obs);
            obs.boundCount[p]++;
        } else {
            auto [it, fresh] = obs.values[p].try_emplace(cvalText(v), tape);
            (void)it;
            (void)fresh;
            obs.boundCount[p]++;
        }
        prefix.pop_back();
    }
}

inline ValueSet abstractEval(const State& s, const std::vector<CKey>& keys) {
    std::vector<AccessPath> elems;
    for (const CKey& k : keys)
        elems.push_back(AccessPath::mkAtom(keyToValue(k)));
    return eval(s, AccessPath::mkSeq(std::move(elems)));
}

inline std::vector<CKey> parsePathText(const std::string& text) {
    // inverse of pathText; used to re-derive keys from the map key
    std::vector<CKey> keys;
    size_t i = 1; // skip '$'
    std::string cur;
    auto push = [&](const std::string& tok) {
        if (!tok.empty() && (tok[0] == '-' || std::isdigit((unsigned char)tok[0]))) {
            bool numeric = tok.size() > (tok[0] == '-' ? 1u : 0u);
            for (size_t j = (tok[0] == '-' ? 1 : 0); j < tok.size(); ++j)
                if (!std::isdigit((unsigned char)tok[j])) numeric = false;
            if (numeric) {
                keys.push_back(CKey::ofInt(std::stoll(tok)));
                return;
            }
        }
        if (tok == "<null>") {
            keys.push_back(CKey::null());
            return;
        }
        keys.push_back(CKey::ofStr(tok));
    };
    size_t depth = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '[' && depth++ == 0) {
            push(cur);
            cur.clear();
        } else if (c == ']' && --depth == 0) {
            // token completed; pushed at next '[' or at end
        } else {
            cur += c;
        }
    }
    push(cur);
    return keys;
}

} // namespace detail

/// Enumerates input assignments (shortest-first over the pool; exact when
/// the reachable assignment tree fits the run budget, padded with seeded
/// random tapes otherwise), executes each, and checks every observed
/// concrete value — and every observed absence — against the abstract
/// states.
inline OracleReport checkSoundness(const Program& prog, const Cfg& cfg,
                                   const AnalysisResult& result,
                                   const std::vector<CVal>& pool,
                                   size_t maxRuns = 100000, uint64_t seed = 42,
                                   size_t stepBudget = 20000,
                                   size_t maxPathDepth = 8) {
    OracleReport report;
    std::map<int, detail::Observation> perNode; // node id → observations
    const int exitNode = cfg.exit;

    auto runTape = [&](const std::vector<CVal>& tape)
        -> std::optional<size_t> /*needs input at position*/ {
        Interp* interpPtr = nullptr;
        auto observe = [&](const Stmt* s) {
            int node = s ? cfg.stmtNode.at(s) : exitNode;
            detail::Observation& obs = perNode[node];
            obs.reachCount++;
            std::vector<CKey> prefix;
            detail::collectLeaves(interpPtr->globals(), prefix, maxPathDepth,
                                  tape, obs);
        };
        Interp interp(prog, tape, stepBudget, observe);
        interpPtr = &interp;
        try {
            interp.run();
            report.tracesCompleted++;
        } catch (const NeedInput& n) {
            return n.position;
        } catch (const StepBudgetExceeded&) {
            report.budgetExceeded++;
        } catch (const CycleDetected&) {
            report.cyclesStopped++;
        }
        return std::nullopt;
    };

    std::deque<std::vector<CVal>> queue;
    queue.push_back({});
    while (!queue.empty() && report.assignmentsTried < maxRuns) {
        std::vector<CVal> tape = std::move(queue.front());
        queue.pop_front();
        report.assignmentsTried++;
        // A tape that runs dry is replayed with every one-value extension;
        // probe without recording first so partial runs leave no trace.
        bool needs = false;
        {
            Interp probe(prog, tape, stepBudget, nullptr);
            try {
                probe.run();
            } catch (const NeedInput&) {
                needs = true;
            } catch (const StepBudgetExceeded&) {
            } catch (const CycleDetected&) {
            }
        }
        if (needs) {
            for (const CVal& v : pool) {
                std::vector<CVal> next = tape;
                next.push_back(v);
                queue.push_back(std::move(next));
            }
            continue;
        }
        runTape(tape);
    }
    if (!queue.empty()) {
        report.exhaustive = false;
        // seeded random tail sampling
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        size_t extra = std::min<size_t>(maxRuns / 4 + 16, 2000);
        for (size_t i = 0; i < extra; ++i) {
            std::vector<CVal> tape;
            for (size_t j = 0; j < 64; ++j) tape.push_back(pool[pick(rng)]);
            report.assignmentsTried++;
            runTape(tape);
        }
    }

    // check observations against abstract states
    for (auto& [node, obs] : perNode) {
        if (!result.out[node]) continue;
        const State& st = *result.out[node];
        int line = cfg.nodes[node].span.line;
        for (auto& [path, valueMap] : obs.values) {
            std::vector<CKey> keys = detail::parsePathText(path);
            ValueSet abs = detail::abstractEval(st, keys);
            bool hasStar = contains(abs, Value::star());
            for (auto& [valText, tape] : valueMap) {
                report.pointsChecked++;
                bool ok;
                if (valText == "null") {
                    ok = contains(abs, Value::undef());
                } else if (valText.size() >= 2 && valText.front() == '\'') {
                    ok = hasStar ||
                         contains(abs, Value::ofStr(valText.substr(
                                           1, valText.size() - 2)));
                } else {
                    ok = hasStar ||
                         contains(abs, Value::ofInt(std::stoll(valText)));
                }
                if (!ok) {
                    Violation v;
                    v.node = node;
                    v.line = line;
                    v.path = path;
                    v.value = valText;
                    v.inputs = tape;
                    for (const CVal& c : tape)
                        v.inputsText += (v.inputsText.empty() ? "" : ",") +
                                        cvalText(c);
                    report.violations.push_back(std::move(v));
                }
            }
        }
        // absence: a trace reached this point with the path unbound
        for (auto& [path, bound] : obs.boundCount) {
            if (bound >= obs.reachCount) continue;
            std::vector<CKey> keys = detail::parsePathText(path);
            ValueSet abs = detail::abstractEval(st, keys);
            report.pointsChecked++;
            if (!contains(abs, Value::undef())) {
                Violation v;
                v.node = node;
                v.line = line;
                v.path = path;
                v.value = "null";
                report.violations.push_back(std::move(v));
            }
        }
    }
    // deterministic order; shortest witness first per (node, path, value)
    std::sort(report.violations.begin(), report.violations.end(),
              [](const Violation& a, const Violation& b) {
                  if (a.node != b.node) return a.node < b.node;
                  if (a.path != b.path) return a.path < b.path;
                  if (a.value != b.value) return a.value < b.value;
                  return a.inputs.size() < b.inputs.size();
              });
    return report;
}

} // namespace minidyn::oracle
