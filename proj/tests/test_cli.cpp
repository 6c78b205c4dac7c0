#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "siegel/io.hpp"

using namespace siegel;

TEST_CASE("subgroup files parse, validate and reduce") {
    // identity only
    Subgroup t = parse_subgroup_json(R"({"level": 3, "generators": [[1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1]]})", false);
    CHECK(t.order() == 1);
    // phi0 at level 5 with the center adjoined: order 4
    Subgroup h = parse_subgroup_json(
        R"({"level": 5, "generators": [[1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1]]})", true);
    CHECK(h.order() == 4);
    // entries reduced mod n on load
    Subgroup r = parse_subgroup_json(
        R"({"level": 5, "generators": [[6,0,0,0, 0,-11,0,0, 0,0,21,0, 0,0,0,4]]})", false);
    CHECK(r.generators[0] == Mat4(5, {1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1}));
    // rejection names the offending generator
    try {
        parse_subgroup_json(
            R"({"level": 5, "generators": [[1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1],
                                            [1,1,0,0,0,1,0,0,0,0,1,0,0,0,0,1]]})",
            false);
        CHECK(false);
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("generator 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_subgroup_json(R"({"generators": []})", false), std::invalid_argument);
    CHECK_THROWS_AS(parse_subgroup_json("{not json", false), std::invalid_argument);
    CHECK_THROWS_AS(parse_subgroup_json(R"({"level": 500})", false), std::invalid_argument);
}

TEST_CASE("exact rationals round-trip as num/den strings") {
    CHECK(rational_str(Rational(1, 3)) == "1/3");
    CHECK(rational_str(Rational(7)) == "7");
    CHECK(parse_rational("22/7") == Rational(22, 7));
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("cyclotomic expression grammar") {
    auto f = CycloField::get(20);
    CHECK(parse_cyclo_expr("theta^5", f) == Cyclo::one(f));
    CHECK(parse_cyclo_expr("i*i", f) == Cyclo(f, -1));
    CHECK(parse_cyclo_expr("2 + 3/2", f) == Cyclo(f, Rational(7, 2)));
    CHECK(parse_cyclo_expr("(1 + theta)*(1 - theta)", f) ==
          Cyclo::one(f) - Cyclo::root_of_order(f, 5).pow(2));
    CHECK(parse_cyclo_expr("-theta", f) == -Cyclo::root_of_order(f, 5));
    CHECK_THROWS_AS(parse_cyclo_expr("q + 1", f), std::invalid_argument);
    CHECK_THROWS_AS(parse_cyclo_expr("1 +", f), std::invalid_argument);
    // the theta point parses and lies on the quartic
    auto pt = parse_quartic_point("0:theta:theta^2:theta^3:theta^4:1", f);
    CHECK(on_quartic(pt));
    CHECK_THROWS_AS(parse_quartic_point("1:2:3", f), std::invalid_argument);
}

TEST_CASE("weight list parsing") {
    auto ws = parse_weights("1,2,3;4,5,6");
    REQUIRE(ws.size() == 2);
    CHECK(ws[0] == Weight{1, 2, 3});
    CHECK(ws[1] == Weight{4, 5, 6});
    CHECK(parse_weights("0,0,1").size() == 1);
    CHECK_THROWS_AS(parse_weights("1,2"), std::invalid_argument);
}

TEST_CASE("report serialization is stable and exact") {
    Atlas atlas(3);
    Subgroup g = Subgroup::full_group(3);
    RamificationLab lab(atlas, g);
    auto rep = lab.report(false);
    Json j = report_to_json(rep);
    CHECK(j["families"]["D"]["mean"] == "1");
    CHECK(j["families"]["DDD"]["count"] == 160);
    // byte stability of the serialization
    CHECK(report_to_json(lab.report(false)).dump() == j.dump());
    // verdicts
    auto v = lab.bound_check(BoundFamily::D);
    Json vj = verdict_to_json(v);
    CHECK(vj["satisfied"] == true);
    CHECK(vj["index"] == "1");
    // identity reports across thread counts
    auto r1 = verify_identities(9, 500, 11, 1);
    auto r4 = verify_identities(9, 500, 11, 4);
    CHECK(identity_report_to_json(r1).dump() == identity_report_to_json(r4).dump());
}
