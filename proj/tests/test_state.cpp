#include <catch2/catch_amalgamated.hpp>

#include "minidyn/state.hpp"
#include "test_util.hpp"

using namespace minidyn;

TEST_CASE("initial state has a root with an unknown child holding Undef") {
    State s(8);
    validate(s);
    CHECK(s.values(s.root()) == ValueSet{Value::undef()});
    auto unk = s.childOf(s.root(), Value::bullet());
    REQUIRE(unk);
    CHECK(s.values(*unk) == ValueSet{Value::undef()});
    CHECK(s.var(*unk).indexName.isBullet());
}

TEST_CASE("createIndex builds the forest and keeps names unique") {
    State s(8);
    VarId a = s.createIndex(s.root(), Value::ofStr("a"));
    VarId a1 = s.createIndex(a, Value::ofInt(1));
    CHECK(s.depthOf(a) == 1);
    CHECK(s.depthOf(a1) == 2);
    CHECK(s.var(a1).parent == a);
    CHECK(*s.childOf(a, Value::ofInt(1)) == a1);
    CHECK_THROWS_AS(s.createIndex(a, Value::ofInt(1)), AnalysisError);
    validate(s);
}

TEST_CASE("unknown-field variables always contain Undef") {
    State s(8);
    VarId a = s.createIndex(s.root(), Value::ofStr("a"));
    VarId unk = s.createIndex(a, Value::bullet());
    CHECK(contains(s.values(unk), Value::undef()));
    s.setValues(unk, ValueSet{Value::ofInt(3)});
    // validate() must reject a • variable without Undef
    CHECK_THROWS_AS(validate(s), AnalysisError);
}

TEST_CASE("value sets must be non-empty") {
    State s(8);
    VarId a = s.createIndex(s.root(), Value::ofStr("a"));
    s.setValues(a, ValueSet{});
    CHECK_THROWS_AS(validate(s), AnalysisError);
}

TEST_CASE("alias relations are symmetric, irreflexive in storage, disjoint") {
    State s(8);
    VarId a = s.createIndex(s.root(), Value::ofStr("a"));
    VarId b = s.createIndex(s.root(), Value::ofStr("b"));
    VarId c = s.createIndex(s.root(), Value::ofStr("c"));
    s.addMust(a, b);
    s.addMay(a, c);
    CHECK(s.mustAliases(a) == std::set<VarId>{a, b});
    CHECK(s.mustAliases(b) == std::set<VarId>{a, b});
    CHECK(s.mayAliases(a) == std::set<VarId>{c});
    CHECK(s.aliases(a) == std::set<VarId>{a, b, c});
    validate(s);
    // promoting a may pair to must removes it from may (DISJOINT)
    s.addMust(a, c);
    CHECK(s.mayAliases(a).empty());
    validate(s);
}

TEST_CASE("clearAliases removes every pair of the variable") {
    State s(8);
    VarId a = s.createIndex(s.root(), Value::ofStr("a"));
    VarId b = s.createIndex(s.root(), Value::ofStr("b"));
    s.addMust(a, b);
    s.addMay(a, b);
    s.clearAliases(a);
    CHECK(s.mustAliases(a) == std::set<VarId>{a});
    CHECK(s.mayAliases(a).empty());
    validate(s);
}

TEST_CASE("deepCopyAssign copies values and children but not aliases") {
    State s(8);
    VarId src = s.createIndex(s.root(), Value::ofStr("src"));
    VarId dst = s.createIndex(s.root(), Value::ofStr("dst"));
    VarId other = s.createIndex(s.root(), Value::ofStr("o"));
    s.setValues(src, ValueSet{Value::ofInt(7)});
    VarId child = s.createIndex(src, Value::ofInt(1));
    s.setValues(child, ValueSet{Value::ofStr("x"), Value::undef()});
    s.addMust(child, other);

    deepCopyAssign(s, src, dst);
    CHECK(contains(s.values(dst), Value::ofInt(7)));
    auto dchild = s.childOf(dst, Value::ofInt(1));
    REQUIRE(dchild);
    CHECK(s.values(*dchild) == ValueSet{Value::ofStr("x"), Value::undef()});
    // def 19: copied children carry their alias sets; only the top-level
    // target's alias sets are left to the caller
    CHECK(s.mustAliases(*dchild).count(other) == 1);
    CHECK(s.mustAliases(dst) == std::set<VarId>{dst});
    validate(s);
}

TEST_CASE("deepCopy (alias flavor) carries alias pairs to the copy") {
    State s(8);
    VarId src = s.createIndex(s.root(), Value::ofStr("src"));
    VarId dst = s.createIndex(s.root(), Value::ofStr("dst"));
    VarId other = s.createIndex(s.root(), Value::ofStr("o"));
    VarId child = s.createIndex(src, Value::ofInt(1));
    s.setValues(child, ValueSet{Value::ofInt(2)});
    s.addMay(child, other);

    deepCopy(s, src, dst);
    auto dchild = s.childOf(dst, Value::ofInt(1));
    REQUIRE(dchild);
    CHECK(s.mayAliases(*dchild).count(other) == 1);
    validate(s);
}

TEST_CASE("copies of array-like variables gain an unknown child") {
    State s(8);
    VarId src = s.createIndex(s.root(), Value::ofStr("src"));
    VarId dst = s.createIndex(s.root(), Value::ofStr("dst"));
    s.createIndex(src, Value::ofInt(1));
    deepCopyAssign(s, src, dst);
    CHECK(s.childOf(dst, Value::bullet()).has_value());

    // scalar (leaf) copies stay leaves: no unknown child materializes
    VarId leafSrc = s.createIndex(s.root(), Value::ofStr("ls"));
    VarId leafDst = s.createIndex(s.root(), Value::ofStr("ld"));
    s.setValues(leafSrc, ValueSet{Value::ofInt(4)});
    deepCopyAssign(s, leafSrc, leafDst);
    CHECK_FALSE(s.childOf(leafDst, Value::bullet()).has_value());
    validate(s);
}

TEST_CASE("canonicalSerialize is VarId-independent (path isomorphism)") {
    State s1(8);
    VarId a1 = s1.createIndex(s1.root(), Value::ofStr("a"));
    VarId b1 = s1.createIndex(s1.root(), Value::ofStr("b"));
    s1.setValues(a1, ValueSet{Value::ofInt(1)});
    s1.setValues(b1, ValueSet{Value::ofInt(2)});
    s1.addMay(a1, b1);

    State s2(8);
    VarId b2 = s2.createIndex(s2.root(), Value::ofStr("b")); // reversed order
    VarId a2 = s2.createIndex(s2.root(), Value::ofStr("a"));
    s2.setValues(a2, ValueSet{Value::ofInt(1)});
    s2.setValues(b2, ValueSet{Value::ofInt(2)});
    s2.addMay(b2, a2);

    CHECK(canonicalSerialize(s1) == canonicalSerialize(s2));
    CHECK(pathIsomorphic(s1, s2));
}

TEST_CASE("resolveExact and pathOf are inverses") {
    State s(8);
    VarId a = s.createIndex(s.root(), Value::ofStr("a"));
    VarId a2 = s.createIndex(a, Value::ofInt(2));
    ConcretePath p = s.pathOf(a2);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == Value::ofStr("a"));
    CHECK(p[1] == Value::ofInt(2));
    auto r = s.resolveExact(p);
    REQUIRE(r);
    CHECK(*r == a2);
}

TEST_CASE("depth limit is tracked per variable") {
    State s(3);
    VarId v = s.root();
    for (int i = 0; i < 3; ++i) v = s.createIndex(v, Value::ofInt(i));
    CHECK(s.depthOf(v) == 3);
    CHECK(s.depthOf(v) >= s.depthLimit());
}
