#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "siegel/ramification.hpp"

using namespace siegel;

namespace {
const Atlas& atlas3() { static Atlas a(3); return a; }
const Atlas& atlas5() { static Atlas a(5); return a; }
Subgroup center_closure(u32 n) { return Subgroup::center(n); }
}

TEST_CASE("ram_v basic values") {
    // full group: every transvection present
    Subgroup g = Subgroup::full_group(5);
    CHECK(ram_v(g, Vec4(5, {0, 1, 0, 0})) == Rational(1));
    CHECK(ram_v(g, Vec4(5, {1, 2, 3, 4})) == Rational(1));
    // center only: alpha = 0 survives
    Subgroup c = center_closure(5);
    CHECK(ram_v(c, Vec4(5, {0, 1, 0, 0})) == Rational(1, 5));
    // closure({±1, r_{e2,p}}) at n = p^2: ram = 1/p along e2
    u32 n = 9, p = 3;
    Subgroup h(n, {transvection(Vec4(n, {0, 1, 0, 0}), p), -Mat4::identity(n)});
    CHECK(ram_v(h, Vec4(n, {0, 1, 0, 0})) == Rational(1, p));
    CHECK(ram_v(h, -Vec4(n, {0, 1, 0, 0})) == Rational(1, p));
    CHECK_THROWS_AS(ram_v(h, Vec4(n, {3, 0, 3, 0})), std::domain_error);
}

TEST_CASE("ram_v conjugation covariance") {
    SplitMix64 rng(301);
    Subgroup g = Subgroup::full_group(3);
    for (int t = 0; t < 20; ++t) {
        Mat4 x = g.chain().sample(rng);
        std::vector<Mat4> gens{g.chain().sample(rng), -Mat4::identity(3)};
        Subgroup h(3, gens);
        std::vector<Mat4> conj;
        for (const auto& gen : gens) conj.push_back(x.symplectic_inverse() * gen * x);
        Subgroup hx(3, conj);
        Vec4 v(3, {1, 0, 0, 0});
        CHECK(ram_v(h, x * v) == ram_v(hx, v));
    }
}

TEST_CASE("ram_E and ram_F") {
    const Atlas& a = atlas3();
    Subgroup g = Subgroup::full_group(3);
    Subgroup c = center_closure(3);
    for (u32 i = 0; i < 5; ++i) {
        CHECK(ram_E(g, a.epairs()[i]) == 1);
        CHECK(ram_E(c, a.epairs()[i]) == 0);
        CHECK(ram_F(g, a.fdivisors()[i]) == 1);
        CHECK(ram_F(c, a.fdivisors()[i]) == 0);
    }
    // closure({±1, standard phi}): 1 exactly on the H-conjugates of the standard pair
    Mat4 phi0(3, {1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1});
    Subgroup h(3, {phi0, -Mat4::identity(3)});
    auto orbit = orbit_of(a.standard_epair(), h.generators,
                          [&](const Mat4& m, u32 i) { return a.act_epair(m, i); });
    for (u32 i = 0; i < a.epairs().size(); ++i) {
        bool in_orbit = std::binary_search(orbit.begin(), orbit.end(), i);
        CHECK(ram_E(h, a.epairs()[i]) == (in_orbit ? 1 : 0));
    }
    // requires -1 in H
    Subgroup no_center(3, {phi0});
    CHECK_THROWS_AS(ram_E(no_center, a.epairs()[0]), std::domain_error);
}

TEST_CASE("ram_line and the one-sided values") {
    const Atlas& a = atlas5();
    const LineLD& l0 = a.lines()[a.standard_line()];
    Subgroup g = Subgroup::full_group(5);
    CHECK(ram_line(g, l0) == Rational(1));
    // spec example: H = closure({±1, printed matrix with a=1, c=0}); that
    // matrix is r_{(1,0,0,0),1}
    Mat4 m(5, {1,0,1,0, 0,1,0,0, 0,0,1,0, 0,0,0,1});
    CHECK(m == transvection(Vec4(5, {1, 0, 0, 0}), 1));
    Subgroup h(5, {m, -Mat4::identity(5)});
    // the value is 1 on the side of the divisor ±(0,1,0,0)
    bool side_is_va = l0.va == Vec4(5, {0, 1, 0, 0});
    CHECK(ram_line_in_divisor(h, l0, side_is_va) == Rational(1));
    CHECK(ram_line_in_divisor(h, l0, !side_is_va) == Rational(1, 5));
    CHECK(ram_line(h, l0) == Rational(1));
    // H-conjugation invariance of ram_line
    SplitMix64 rng(303);
    for (int t = 0; t < 100; ++t) {
        Mat4 x = g.chain().sample(rng);
        u32 li = u32(rng.below(a.lines().size()));
        std::vector<Mat4> gens{x, -Mat4::identity(5)};
        Subgroup hh(5, gens);
        u32 mapped = a.act_line(x, li);
        CHECK(ram_line(hh, a.lines()[li]) == ram_line(hh, a.lines()[mapped]));
    }
    // the inequality against the one-sided maxima
    for (int t = 0; t < 50; ++t) {
        Subgroup hr = random_subgroup(g, rng, 2);
        u32 li = u32(rng.below(a.lines().size()));
        Rational rl = ram_line(hr, a.lines()[li]);
        Rational sa = ram_line_in_divisor(hr, a.lines()[li], true);
        Rational sb = ram_line_in_divisor(hr, a.lines()[li], false);
        CHECK(rl <= std::max(sa, sb));
    }
}

TEST_CASE("the standard line's transvection group is the printed matrix family") {
    u32 n = 5;
    for (u32 aa = 0; aa < n; ++aa)
        for (u32 cc = 0; cc < n; ++cc) {
            Mat4 printed(n, {1,0,i64(aa),0, 0,1,0,i64(cc), 0,0,1,0, 0,0,0,1});
            CHECK(printed == transvection(Vec4(n, {1,0,0,0}), aa) * transvection(Vec4(n, {0,1,0,0}), cc));
        }
}

TEST_CASE("delta and multiplicity at triple points") {
    const Atlas& a = atlas3();
    const TriplePoint& p0 = a.triples()[a.standard_triple()];
    // trivial ramification group
    Subgroup c = center_closure(3);
    CHECK(delta_at_triple(c, p0) == Rational(1, 3));
    CHECK(mult_exact_at_triple(c, p0) == 1);
    // full group: the whole Ram_G(P) with group order n^3; the only
    // invariant monomials are n-th powers, so delta = 1 and the quotient is
    // smooth (multiplicity 1)
    Subgroup g = Subgroup::full_group(3);
    CHECK(delta_at_triple(g, p0) == Rational(1));
    CHECK(mult_bound_at_triple(g, p0) == Rational(1));  // n^3 * 1 / n^3
    CHECK(mult_exact_at_triple(g, p0) == 1);
    // cyclic with weights (1,1,1): delta = 1
    Mat4 diag111 = transvection(p0.wa, 1) * transvection(p0.wb, 1) * transvection(p0.wc, 1);
    Subgroup hc(3, {diag111, -Mat4::identity(3)});
    CHECK(delta_at_triple(hc, p0) == Rational(1));
    // delta does not decrease when H is enlarged inside Ram_G(P)
    CHECK(delta_at_triple(hc, p0) >= delta_at_triple(c, p0));
    CHECK(Rational(mult_exact_at_triple(hc, p0)) <= mult_bound_at_triple(hc, p0));
}

TEST_CASE("identity suite: zero failures and the printed values") {
    for (u32 n : {9u, 25u}) {
        auto rep = verify_identities(n, 500, 42);
        CHECK(rep.failures.empty());
        CHECK(rep.checks == 2000);
    }
    // the worked numeric instance: n=9, (x1,z1,x2,z2) = (1,2,3,4) gives
    // (2,4) entry 8(x1 z2 - x2 z1) = -16 = 2 mod 9
    u32 n = 9;
    auto phi = [&](i64 xx, i64 zz) {
        return Mat4(n, {1,0,0,-2*xx, -2*zz,-1,2*xx,0, 0,0,1,-2*zz, 0,0,0,-1});
    };
    Mat4 prod = phi(1, 2) * phi(0, 0) * phi(3, 4);
    Mat4 sq = prod * prod;
    CHECK(sq.at(1, 3) == 2);
    // boundD conjugation instance b = alpha = z = 1, n = 5: entries -1 and +1
    auto rep5 = verify_identities(5, 1, 7);
    CHECK(rep5.failures.empty());
    Mat4 R(5, {1,0,0,0, -1,1,0,0, 0,0,1,1, 0,0,0,1});
    CHECK(R.at(1, 0) == 4);  // -b a z^2 = -1
    CHECK(R.at(2, 3) == 1);  // +b a z^2 = 1
    // boundF instance b1=1, b2=0 at n=5: entries +1 at (1,3) and -1 at (2,4)
    Mat4 psi1(5, {0,1,0,1, 1,0,-1,0, 0,0,0,1, 0,0,1,0});
    Mat4 psi0(5, {0,1,0,0, 1,0,0,0, 0,0,0,1, 0,0,1,0});
    Mat4 ff = psi1 * psi0;
    CHECK(ff.at(0, 2) == 1);
    CHECK(ff.at(1, 3) == 4);
}

TEST_CASE("identity suite is deterministic across thread counts") {
    auto a = verify_identities(9, 2000, 123, 1);
    auto b = verify_identities(9, 2000, 123, 4);
    CHECK(a.checks == b.checks);
    CHECK(a.failures.size() == b.failures.size());
}

TEST_CASE("full report on the full group") {
    const Atlas& a = atlas3();
    Subgroup g = Subgroup::full_group(3);
    RamificationLab lab(a, g);
    auto rep = lab.report(true);
    CHECK(rep.mean(BoundFamily::D) == Rational(1));
    CHECK(rep.mean(BoundFamily::E) == Rational(1));
    CHECK(rep.mean(BoundFamily::F) == Rational(1));
    CHECK(rep.mean(BoundFamily::DD) == Rational(1));
    CHECK(rep.count_d == 40);
    CHECK(rep.count_l == 240);
    CHECK(rep.count_t == 160);
    // all triple orbits merge into one under the full group
    CHECK(rep.triple_orbits.size() == 1);
    for (auto v : lab.bound_check_all()) {
        CHECK(v.satisfied);
        CHECK(v.index == 1);
    }
}

TEST_CASE("report means are in [0,1] for the ram families") {
    const Atlas& a = atlas3();
    SplitMix64 rng(307);
    Subgroup g = Subgroup::full_group(3);
    for (int t = 0; t < 10; ++t) {
        Subgroup h = random_subgroup(g, rng, 3);
        RamificationLab lab(a, h);
        auto rep = lab.report(false);
        for (BoundFamily f : {BoundFamily::D, BoundFamily::E, BoundFamily::DD, BoundFamily::F}) {
            CHECK(rep.mean(f) >= 0);
            CHECK(rep.mean(f) <= 1);
        }
        CHECK(rep.mean(BoundFamily::DDD) > 0);
    }
}

TEST_CASE("line sums agree between orbit aggregation and direct evaluation") {
    const Atlas& a = atlas3();
    SplitMix64 rng(311);
    Subgroup g = Subgroup::full_group(3);
    for (int t = 0; t < 6; ++t) {
        Subgroup h = random_subgroup(g, rng, 2);
        RamificationLab lab(a, h);
        auto fast = lab.report(false);
        auto full = lab.report(true);
        CHECK(fast.sum_l == full.sum_l);
        // per-line values agree with the standalone scan
        for (u32 li = 0; li < 40; ++li)
            CHECK(full.ram_l[li] == ram_line(h, a.lines()[li]));
        // triple aggregation against the standalone ops
        Rational direct = 0;
        for (const auto& to : full.triple_orbits) {
            CHECK(to.delta == delta_at_triple(h, a.triples()[to.rep]));
            CHECK(to.mult == mult_exact_at_triple(h, a.triples()[to.rep]));
            direct += Rational(to.mult);
        }
        CHECK(direct == full.sum_mult);
    }
}

TEST_CASE("bound experiments on a small random sweep") {
    const Atlas& a = atlas3();
    SplitMix64 rng(313);
    Subgroup g = Subgroup::full_group(3);
    for (int t = 0; t < 12; ++t) {
        Subgroup h = random_subgroup(g, rng, 4);
        RamificationLab lab(a, h);
        for (auto v : lab.bound_check_all()) {
            INFO("family ", family_name(v.family), " index ", v.index.str());
            CHECK(v.satisfied);
        }
    }
}

TEST_CASE("monotonicity under enlarging the subgroup") {
    const Atlas& a = atlas3();
    SplitMix64 rng(317);
    Subgroup g = Subgroup::full_group(3);
    for (int t = 0; t < 8; ++t) {
        Subgroup h = random_subgroup(g, rng, 2);
        auto gens = h.generators;
        gens.push_back(g.chain().sample(rng));
        Subgroup h2(3, gens);
        RamificationLab lab(a, h), lab2(a, h2);
        auto r1 = lab.report(true), r2 = lab2.report(true);
        for (std::size_t i = 0; i < r1.ram_d.size(); ++i) CHECK(r2.ram_d[i] >= r1.ram_d[i]);
        for (std::size_t i = 0; i < r1.ram_e.size(); ++i) CHECK(r2.ram_e[i] >= r1.ram_e[i]);
        for (std::size_t i = 0; i < r1.ram_l.size(); ++i) CHECK(r2.ram_l[i] >= r1.ram_l[i]);
    }
}

TEST_CASE("composite level is rejected for experiments") {
    Atlas a6(6);
    Subgroup h = Subgroup::center(6);
    CHECK_THROWS_AS(RamificationLab(a6, h), std::domain_error);
}
