#include <catch2/catch_amalgamated.hpp>

#include "minidyn/oracle.hpp"
#include "test_util.hpp"

using namespace minidyn;
using namespace minidyn::oracle;
using testutil::analyzeFixture;
using testutil::analyzeSource;

namespace {

/// Runs the program on a fixed tape and returns the final globals.
CArr runConcrete(const std::string& src, std::vector<CVal> tape) {
    Program p = parse(src);
    Interp interp(p, std::move(tape), 20000, nullptr);
    interp.run();
    return interp.globals();
}

const CVal* lookup(const CArr& a, std::initializer_list<CKey> keys) {
    const CArr* cur = &a;
    const CVal* found = nullptr;
    for (const CKey& k : keys) {
        auto it = cur->slots.find(k);
        if (it == cur->slots.end()) return nullptr;
        found = it->second.cell.get();
        if (found->isArr()) cur = &std::get<CArr>(found->v);
    }
    return found;
}

OracleReport checkSrc(const std::string& src, std::vector<CVal> pool,
                      size_t maxRuns = 100000) {
    auto a = analyzeSource(src);
    return checkSoundness(a.prog, a.cfg, a.result, pool, maxRuns);
}

} // namespace

TEST_CASE("interpreter: scalars, arrays and input") {
    CArr g = runConcrete("$x = 1;\n$y[2]['k'] = input();\n",
                         {CVal::ofStr("v")});
    const CVal* x = lookup(g, {CKey::ofStr("x")});
    REQUIRE(x);
    CHECK(std::get<int64_t>(x->v) == 1);
    const CVal* leaf = lookup(g, {CKey::ofStr("y"), CKey::ofInt(2), CKey::ofStr("k")});
    REQUIRE(leaf);
    CHECK(std::get<std::string>(leaf->v) == "v");
}

TEST_CASE("interpreter: aliases share one cell") {
    CArr g = runConcrete("$a = 1;\n$b = &$a;\n$b = 9;\n", {});
    const CVal* a = lookup(g, {CKey::ofStr("a")});
    REQUIRE(a);
    CHECK(std::get<int64_t>(a->v) == 9);
}

TEST_CASE("interpreter: assignment copies, cells stay distinct") {
    CArr g = runConcrete("$a[1] = 1;\n$b = $a;\n$b[1] = 9;\n", {});
    CHECK(std::get<int64_t>(lookup(g, {CKey::ofStr("a"), CKey::ofInt(1)})->v) == 1);
    CHECK(std::get<int64_t>(lookup(g, {CKey::ofStr("b"), CKey::ofInt(1)})->v) == 9);
}

TEST_CASE("interpreter: array used as index becomes the null key") {
    CArr g = runConcrete("$a[1] = 2;\n$x[$a] = 7;\n", {});
    const CVal* leaf = lookup(g, {CKey::ofStr("x"), CKey::null()});
    REQUIRE(leaf);
    CHECK(std::get<int64_t>(leaf->v) == 7);
}

TEST_CASE("interpreter: writing through a scalar materializes an array") {
    CArr g = runConcrete("$d = 9;\n$d[1] = 2;\n", {});
    const CVal* d = lookup(g, {CKey::ofStr("d")});
    REQUIRE(d);
    CHECK(d->isArr());
}

TEST_CASE("interpreter: branch conditions use truthiness") {
    CArr g = runConcrete("if ($missing) { $x = 1; } else { $x = 2; }\n", {});
    CHECK(std::get<int64_t>(lookup(g, {CKey::ofStr("x")})->v) == 2);
}

TEST_CASE("interpreter: tape exhaustion raises NeedInput") {
    Program p = parse("$x = input();\n");
    Interp interp(p, {}, 1000, nullptr);
    CHECK_THROWS_AS(interp.run(), NeedInput);
}

TEST_CASE("running example concrete reference: $any = 1") {
    std::string src = testutil::slurp(testutil::fixturePath("running_example.mdyn"));
    Program p = parse(src);
    Interp interp(p, {CVal::ofInt(1)}, 20000, nullptr);
    // with $any = 1 the full example creates a reference cycle at the last
    // line; everything before it must already be in place then
    try {
        interp.run();
    } catch (const CycleDetected&) {
    }
    const CArr& g = interp.globals();
    // line 6 ($t[2] = 2) turned the copied scalar into an array
    CHECK(std::get<int64_t>(
              lookup(g, {CKey::ofStr("t"), CKey::ofInt(2)})->v) == 2);
    CHECK(std::get<int64_t>(lookup(g, {CKey::ofStr("alias3")})->v) == 8);
    CHECK(std::get<int64_t>(
              lookup(g, {CKey::ofStr("arr"), CKey::ofInt(2)})->v) == 8);
}

TEST_CASE("oracle: running example is exhaustively sound") {
    auto a = analyzeFixture("running_example.mdyn");
    std::vector<CVal> pool = {CVal::ofInt(0), CVal::ofInt(1), CVal::ofInt(2),
                              CVal::ofInt(3), CVal::ofStr("k")};
    OracleReport rep = checkSoundness(a.prog, a.cfg, a.result, pool);
    CHECK(rep.exhaustive);
    CHECK(rep.violations.empty());
    CHECK(rep.tracesCompleted + rep.cyclesStopped == rep.assignmentsTried - 1);
    CHECK(rep.pointsChecked > 0);
}

TEST_CASE("oracle: sound on small alias/branch programs") {
    std::vector<CVal> pool = {CVal::ofInt(0), CVal::ofInt(1)};
    CHECK(checkSrc("$x = input();\nif ($x) { $y = &$x; }\n$y = 3;\n", pool)
              .violations.empty());
    CHECK(checkSrc("$a[input()][2] = 5;\n$b = $a;\n$b[1][2] = 6;\n", pool)
              .violations.empty());
}

TEST_CASE("oracle: detects an unsound analysis (weak updates disabled)") {
    EngineConfig broken;
    broken.disableWeakUpdates = true;
    std::string src = testutil::slurp(testutil::fixturePath("running_example.mdyn"));
    auto a = testutil::analyzeSource(src, broken);
    std::vector<CVal> pool = {CVal::ofInt(0), CVal::ofInt(1), CVal::ofInt(2),
                              CVal::ofInt(3), CVal::ofStr("k")};
    OracleReport rep = checkSoundness(a.prog, a.cfg, a.result, pool);
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("violations carry a witness tape and program point") {
    EngineConfig broken;
    broken.disableWeakUpdates = true;
    auto a = testutil::analyzeSource("$i = input();\n$x[1] = 7;\n$x[$i] = 9;\n",
                                     broken);
    std::vector<CVal> pool = {CVal::ofInt(1), CVal::ofInt(2)};
    OracleReport rep = checkSoundness(a.prog, a.cfg, a.result, pool);
    REQUIRE_FALSE(rep.violations.empty());
    const Violation& v = rep.violations.front();
    CHECK(v.line >= 1);
    CHECK_FALSE(v.path.empty());
    CHECK_FALSE(v.inputsText.empty());
}
