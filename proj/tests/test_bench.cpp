#include <catch2/catch_amalgamated.hpp>

#include "minidyn/bench.hpp"
#include "minidyn/randgen.hpp"
#include "test_util.hpp"

using namespace minidyn;

TEST_CASE("CODE node count follows 18*2^n + 3") {
    for (size_t n = 0; n <= 3; ++n) {
        Cfg cfg = buildCfg(parse(bench::generate({n, false})));
        CHECK(cfg.nodes.size() == 18 * (size_t{1} << n) + 3);
    }
}

TEST_CASE("mCODE node count doubles CODE minus a constant") {
    for (size_t n = 0; n <= 3; ++n) {
        size_t code = buildCfg(parse(bench::generate({n, false}))).nodes.size();
        size_t merged = buildCfg(parse(bench::generate({n, true}))).nodes.size();
        CHECK(merged == 2 * code - 1);
    }
}

TEST_CASE("benchmark programs parse and analyze") {
    for (bool merged : {false, true}) {
        auto a = testutil::analyzeSource(bench::generate({1, merged}));
        CHECK(a.result.out[a.cfg.exit].has_value());
    }
}

TEST_CASE("replicas are independent: per-replica results match the original") {
    auto a = testutil::analyzeSource(bench::generate({1, false}));
    // the running example's line-18 facts hold for every replica
    CHECK(testutil::queryExit(a, "$r0_arr2[3]") == "9");
    CHECK(testutil::queryExit(a, "$r1_arr2[3]") == "9");
    CHECK(testutil::queryExit(a, "$r0_arr2[2]") == "8");
    CHECK(testutil::queryExit(a, "$r1_arr2[2]") == "8");
}

TEST_CASE("variable count grows linearly with program size") {
    EngineConfig cfg;
    std::vector<bench::BenchRow> rows;
    for (size_t n = 0; n <= 3; ++n)
        rows.push_back(bench::runOne({n, false}, cfg));
    // successive doublings of the program at most ~double the variables
    for (size_t i = 2; i < rows.size(); ++i) {
        double ratio = double(rows[i].variables) / double(rows[i - 1].variables);
        CHECK(ratio < 2.1);
        CHECK(ratio > 1.8);
    }
}

TEST_CASE("csv output is well-formed") {
    EngineConfig cfg;
    std::vector<bench::BenchRow> rows = {bench::runOne({0, false}, cfg),
                                         bench::runOne({0, true}, cfg)};
    std::string csv = bench::toCsv(rows);
    CHECK(csv.rfind("variant,n,cfg_nodes,variables,wall_ms\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("CODE,0,21,") != std::string::npos);
    CHECK(csv.find("mCODE,0,41,") != std::string::npos);
}

TEST_CASE("random generator is deterministic per seed and parses") {
    randgen::GenConfig cfg;
    cfg.seed = 7;
    std::string p1 = randgen::genProgram(cfg);
    std::string p2 = randgen::genProgram(cfg);
    CHECK(p1 == p2);
    cfg.seed = 8;
    CHECK(randgen::genProgram(cfg) != p1);
    for (uint64_t s = 0; s < 20; ++s) {
        cfg.seed = s;
        CHECK_NOTHROW(parse(randgen::genProgram(cfg)));
    }
}
