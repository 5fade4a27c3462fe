#include <catch2/catch_amalgamated.hpp>

#include "minidyn/merge.hpp"
#include "minidyn/write.hpp"
#include "test_util.hpp"

using namespace minidyn;
using testutil::analyzeSource;
using testutil::analyzeFixture;
using testutil::queryOut;
using testutil::queryExit;

namespace {

State stateOf(const char* src) {
    auto a = analyzeSource(src);
    return *a.result.out[a.cfg.exit];
}

} // namespace

TEST_CASE("merge joins values of variables present in both branches") {
    State s1 = stateOf("$x = 1;\n");
    State s2 = stateOf("$x = 2;\n");
    State m = mergeStates({&s1, &s2});
    validate(m);
    auto x = m.childOf(m.root(), Value::ofStr("x"));
    REQUIRE(x);
    CHECK(m.values(*x) == ValueSet{Value::ofInt(1), Value::ofInt(2)});
}

TEST_CASE("variable absent in one branch joins with undefined") {
    State s1 = stateOf("$x = 1;\n");
    State s2 = stateOf("$y = 2;\n");
    State m = mergeStates({&s1, &s2});
    auto x = m.childOf(m.root(), Value::ofStr("x"));
    REQUIRE(x);
    CHECK(m.values(*x) == ValueSet{Value::ofInt(1), Value::undef()});
}

TEST_CASE("merge is commutative up to path isomorphism") {
    State s1 = stateOf("$x[1] = 3;\n$y = &$x[1];\n");
    State s2 = stateOf("$x = 'v';\nif ($c) { $z = $x; }\n");
    State m12 = mergeStates({&s1, &s2});
    State m21 = mergeStates({&s2, &s1});
    CHECK(pathIsomorphic(m12, m21));
}

TEST_CASE("merge is idempotent") {
    State s = stateOf("$x[1] = 3;\n$y = &$x;\nif ($c) { $x[2] = 4; }\n");
    State m = mergeStates({&s, &s});
    CHECK(pathIsomorphic(m, mergeStates({&s})));
    CHECK(canonicalSerialize(m) == canonicalSerialize(s));
}

TEST_CASE("must aliases survive a merge only when present in all branches") {
    State s1 = stateOf("$y = 1;\n$x = &$y;\n");
    State s2 = stateOf("$y = 2;\n$x = &$y;\n");
    State s3 = stateOf("$x = 1;\n$y = 2;\n");
    State mAll = mergeStates({&s1, &s2});
    auto x = mAll.childOf(mAll.root(), Value::ofStr("x"));
    auto y = mAll.childOf(mAll.root(), Value::ofStr("y"));
    REQUIRE(x); REQUIRE(y);
    CHECK(mAll.mustAliases(*x).count(*y) == 1);

    State mSome = mergeStates({&s1, &s3});
    x = mSome.childOf(mSome.root(), Value::ofStr("x"));
    y = mSome.childOf(mSome.root(), Value::ofStr("y"));
    REQUIRE(x); REQUIRE(y);
    CHECK(mSome.mustAliases(*x).count(*y) == 0);
    CHECK(mSome.mayAliases(*x).count(*y) == 1);
}

TEST_CASE("unknown fields materialize against the other branch's literals") {
    // one branch wrote through * so its content sits under •; the other
    // branch has literal child 2 — after the merge, [2] sees both
    auto a = analyzeSource("if ($c) {\n"
                           "    $x[input()] = 7;\n"
                           "} else {\n"
                           "    $x[2] = 9;\n"
                           "}\n");
    std::string got = queryExit(a, "$x[2]");
    CHECK(got.find("7") != std::string::npos);
    CHECK(got.find("9") != std::string::npos);
}

TEST_CASE("running example: line 13 join") {
    auto a = analyzeFixture("running_example_l13.mdyn");
    CHECK(queryOut(a, 13, "$arr[1][2]") == "3 6 7 undef");
}

TEST_CASE("merge of a single state is the identity up to isomorphism") {
    State s = stateOf("$a[1][2] = 3;\n$b = &$a[1];\nif ($c) { $b = 0; }\n");
    CHECK(pathIsomorphic(mergeStates({&s}), s));
}

TEST_CASE("duplicate predecessor states are deduplicated") {
    State s1 = stateOf("$x = 1;\n");
    State s2 = stateOf("$x = 1;\n");
    State m = mergeStates({&s1, &s2, &s1});
    CHECK(pathIsomorphic(m, s1));
}
