#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "siegel/subgroup.hpp"

using namespace siegel;

TEST_CASE("trivial and central subgroups") {
    Subgroup t(3, {Mat4::identity(3)});
    CHECK(t.order() == 1);
    Subgroup c = Subgroup::center(5);
    CHECK(c.order() == 2);
    CHECK(c.has_minus_one());
}

TEST_CASE("full group order matches the classical formula") {
    // q^4 (q^2-1)(q^4-1) for prime q
    CHECK(sp4_order(3) == 51840);
    CHECK(sp4_order(5) == BigInt(625) * 24 * 624);
    CHECK(sp4_order(9) == BigInt("3061100160"));
    for (u32 n : {3u, 4u, 5u}) {
        Subgroup g = Subgroup::full_group(n);
        CHECK(g.order() == sp4_order(n));
    }
}

TEST_CASE("chain order agrees with breadth-first closure at small levels") {
    for (u32 n : {2u, 3u, 4u}) {
        Subgroup g = Subgroup::full_group(n);
        auto elems = enumerate_elements(g, 800000);
        CHECK(BigInt(elems.size()) == g.order());
    }
    // the pointwise stabilizer family closure({phi0, -1}) has order 4
    Mat4 phi0(5, {1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1});
    Subgroup h(5, {phi0, -Mat4::identity(5)});
    CHECK(h.order() == 4);
    CHECK(BigInt(enumerate_elements(h, 100).size()) == 4);
}

TEST_CASE("closure order is generator-order and word invariant") {
    SplitMix64 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        u32 n = (trial % 2) ? 5 : 9;
        Subgroup g = Subgroup::full_group(n);
        const auto& ch = g.chain();
        std::vector<Mat4> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(ch.sample(rng));
        Subgroup h(n, gens);
        BigInt ord = h.order();

        auto shuffled = gens;
        std::reverse(shuffled.begin(), shuffled.end());
        std::rotate(shuffled.begin(), shuffled.begin() + 1, shuffled.end());
        CHECK(Subgroup(n, shuffled).order() == ord);

        // replace generators by random words in them
        std::vector<Mat4> words;
        for (int i = 0; i < 4; ++i) {
            Mat4 w = Mat4::identity(n);
            for (int j = 0; j < 5; ++j) w = w * gens[std::size_t(rng.below(gens.size()))];
            words.push_back(w);
        }
        for (const auto& orig : gens) words.push_back(orig);  // keep generation
        CHECK(Subgroup(n, words).order() == ord);
    }
}

TEST_CASE("membership, index and containment checks") {
    Subgroup g = Subgroup::full_group(3);
    CHECK(subgroup_index(g, g) == 1);
    Subgroup pm = Subgroup::center(3);
    CHECK(subgroup_index(g, pm) == 25920);
    // transvections generate: index 1
    Subgroup t(3, sp4_generators(3));
    CHECK(subgroup_index(g, t) == 1);
    // H not inside G is rejected
    Mat4 phi0(3, {1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1});
    Subgroup h(3, {phi0});
    Subgroup tiny(3, {Mat4::identity(3)});
    CHECK_THROWS_AS(subgroup_index(tiny, h), std::domain_error);
}

TEST_CASE("membership agrees with enumeration") {
    SplitMix64 rng(73);
    Subgroup g = Subgroup::full_group(3);
    const auto& ch = g.chain();
    std::vector<Mat4> gens{ch.sample(rng), ch.sample(rng)};
    Subgroup h(3, gens);
    auto elems = enumerate_elements(h, 200000);
    MembershipOracle oracle(h);
    for (int t = 0; t < 50; ++t) {
        Mat4 x = ch.sample(rng);
        bool in_list = std::find(elems.begin(), elems.end(), x) != elems.end();
        CHECK(h.contains(x) == in_list);
        CHECK(oracle.contains(x) == in_list);
    }
}

TEST_CASE("uniform chain sampling hits the whole group") {
    Subgroup h = Subgroup::center(3);
    auto all = enumerate_elements(h, 10);
    SplitMix64 rng(79);
    std::size_t hits = 0;
    for (int t = 0; t < 64; ++t)
        if (h.chain().sample(rng) == all[1]) ++hits;
    CHECK(hits > 10);  // -1 drawn with probability 1/2
    // samples always lie in the subgroup
    Subgroup g = Subgroup::full_group(5);
    for (int t = 0; t < 20; ++t) CHECK(g.contains(g.chain().sample(rng)));
}

TEST_CASE("ceiling exceeded reports partial depth") {
    CHECK_THROWS_AS(Subgroup::full_group(5).chain(BigInt(1000)), CeilingExceededError);
}

TEST_CASE("level mismatch among generators is rejected") {
    CHECK_THROWS_AS(Subgroup(5, {Mat4::identity(3)}), LevelMismatchError);
    std::vector<Mat4> bad{Mat4::identity(5), Mat4::identity(7)};
    CHECK_THROWS_AS(Subgroup(5, bad), LevelMismatchError);
    // non-symplectic generator rejected
    Mat4 m = Mat4::identity(5);
    m.set(0, 1, 1);
    CHECK_THROWS_AS(Subgroup(5, {m}), std::domain_error);
}
