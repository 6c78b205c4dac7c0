#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "siegel/quartic.hpp"

using namespace siegel;

namespace {

std::shared_ptr<const CycloField> F20() { return CycloField::get(20); }

QuarticPoint theta_point(std::shared_ptr<const CycloField> f) {
    Cyclo th = Cyclo::root_of_order(f, 5);
    return QuarticPoint({Cyclo::zero(f), th, th.pow(2), th.pow(3), th.pow(4), Cyclo::one(f)});
}

QuarticPoint rational_point(std::shared_ptr<const CycloField> f, std::array<i64, 6> v) {
    std::array<Cyclo, 6> x;
    for (int i = 0; i < 6; ++i) x[std::size_t(i)] = Cyclo(f, v[std::size_t(i)]);
    return QuarticPoint(std::move(x));
}

bool is_even_perm(const Perm6& s) {
    int inv = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            if (s[std::size_t(i)] > s[std::size_t(j)]) ++inv;
    return inv % 2 == 0;
}

}  // namespace

TEST_CASE("cyclotomic arithmetic basics") {
    auto f = F20();
    CHECK(f->degree() == 8);
    Cyclo th = Cyclo::root_of_order(f, 5);
    CHECK(th.pow(5) == Cyclo::one(f));
    CHECK_FALSE(th.pow(4) == Cyclo::one(f));
    // 1 + th + th^2 + th^3 + th^4 = 0
    Cyclo sum = Cyclo::one(f) + th + th.pow(2) + th.pow(3) + th.pow(4);
    CHECK(sum.is_zero());
    Cyclo i = Cyclo::root_of_order(f, 4);
    CHECK(i * i == Cyclo(f, -1));
    // exact inverses
    Cyclo a = th + Cyclo(f, Rational(3, 7));
    CHECK(a * a.inverse() == Cyclo::one(f));
    CHECK_THROWS_AS(Cyclo::zero(f).inverse(), std::domain_error);
    // field with cube roots
    auto f60 = CycloField::get(60);
    Cyclo w = Cyclo::root_of_order(f60, 3);
    CHECK((Cyclo::one(f60) + w + w * w).is_zero());
}

TEST_CASE("on_quartic: the worked examples") {
    auto f = F20();
    CHECK(on_quartic(theta_point(f)));
    CHECK_FALSE(on_quartic(rational_point(f, {-1, 1, 0, 0, 0, 0})));
    CHECK_FALSE(on_quartic(rational_point(f, {1, 1, 1, 1, 1, -5})));
    CHECK(on_quartic(rational_point(f, {1, 1, -1, -1, 2, -2})));
    // invalid points
    std::array<Cyclo, 6> bad;
    for (int i = 0; i < 6; ++i) bad[std::size_t(i)] = Cyclo(f, 1);
    CHECK_THROWS_AS((void)QuarticPoint{bad}, std::domain_error);
    std::array<Cyclo, 6> zero;
    for (int i = 0; i < 6; ++i) zero[std::size_t(i)] = Cyclo::zero(f);
    CHECK_THROWS_AS((void)QuarticPoint{zero}, std::domain_error);
}

TEST_CASE("singular locus pattern and smoothness") {
    auto f = F20();
    // a singular double-line point: x1=x2, x3=x4, x5=x6
    auto sing = rational_point(f, {1, 1, 2, 2, -3, -3});
    CHECK(on_quartic(sing));
    CHECK(in_singular_locus(sing));
    CHECK_FALSE(is_smooth_point(sing));
    auto smooth = rational_point(f, {1, 1, -1, -1, 2, -2});
    CHECK_FALSE(in_singular_locus(smooth));
    CHECK(is_smooth_point(smooth));
    CHECK(is_smooth_point(theta_point(f)));
}

TEST_CASE("stabilizer of the theta point is the five-cycle group") {
    auto f = F20();
    auto pt = theta_point(f);
    auto stab = stabilizer(pt);
    CHECK(stab.size() == 5);
    Cyclo th = Cyclo::root_of_order(f, 5);
    int five_cycles = 0;
    for (const auto& s : stab) {
        // lambda is a fifth root of unity
        CHECK(s.lambda.pow(5) == Cyclo::one(f));
        // cycle type: identity or a 5-cycle fixing one letter
        int moved = 0;
        for (int i = 0; i < 6; ++i)
            if (s.sigma[std::size_t(i)] != i) ++moved;
        CHECK((moved == 0 || moved == 5));
        if (moved == 5 && s.lambda == th) ++five_cycles;
    }
    CHECK(five_cycles == 1);
    // group structure: closed under composition
    for (const auto& a : stab)
        for (const auto& b : stab) {
            Perm6 c;
            for (int i = 0; i < 6; ++i) c[std::size_t(i)] = a.sigma[std::size_t(b.sigma[std::size_t(i)])];
            bool found = false;
            for (const auto& d : stab)
                if (d.sigma == c) {
                    CHECK(d.lambda == a.lambda * b.lambda);
                    found = true;
                }
            CHECK(found);
        }
}

TEST_CASE("stabilizer of a divisor point contains the transposition with lambda 1") {
    auto f = F20();
    auto pt = rational_point(f, {1, 1, -1, -1, 2, -2});
    auto stab = stabilizer(pt);
    bool has_swap = false;
    for (const auto& s : stab) {
        Perm6 swap01{1, 0, 2, 3, 4, 5};
        if (s.sigma == swap01) {
            has_swap = true;
            Rational lam;
            CHECK(s.lambda.is_rational(&lam));
            CHECK(lam == 1);
        }
    }
    CHECK(has_swap);
    CHECK_THROWS_AS(stabilizer(rational_point(f, {-1, 1, 0, 0, 0, 0})), std::domain_error);
}

TEST_CASE("tangent determinants") {
    auto f = F20();
    auto pt = rational_point(f, {1, 1, -1, -1, 2, -2});
    auto stab = stabilizer(pt);
    for (const auto& s : stab) {
        Rational lam;
        bool rational_lambda = s.lambda.is_rational(&lam);
        Cyclo det = tangent_action_determinant(pt, s);
        // determinants are roots of unity
        bool root = false;
        Cyclo power = det;
        for (int k = 1; k <= 20; ++k) {
            if (power == Cyclo::one(f)) { root = true; break; }
            power *= det;
        }
        CHECK(root);
        // even permutations with lambda = 1 act through SL
        if (rational_lambda && lam == 1 && is_even_perm(s.sigma))
            CHECK(det == Cyclo::one(f));
        // the identity acts trivially
        Perm6 id{0, 1, 2, 3, 4, 5};
        if (s.sigma == id) CHECK(det == Cyclo::one(f));
    }
    // singular points are rejected
    auto sing = rational_point(f, {1, 1, 2, 2, -3, -3});
    StabilizerElement ident{{0, 1, 2, 3, 4, 5}, Cyclo::one(f)};
    CHECK_THROWS_AS(tangent_action_determinant(sing, ident), std::domain_error);
}

TEST_CASE("five-cycle tangent weights at the theta point give a terminal singularity") {
    auto f = F20();
    auto pt = theta_point(f);
    auto stab = stabilizer(pt);
    Cyclo th = Cyclo::root_of_order(f, 5);
    const StabilizerElement* gen = nullptr;
    for (const auto& s : stab)
        if (s.lambda == th) gen = &s;
    REQUIRE(gen != nullptr);
    auto ta = tangent_action(pt, *gen);
    // eigenvalues on the 4-space: 1 (Euler direction) and theta^{2,3,4}
    auto det_minus = [&](const Cyclo& mu) {
        auto m = ta.matrix;
        for (int i = 0; i < 4; ++i) m[std::size_t(i)][std::size_t(i)] -= mu;
        // 4x4 determinant by expansion through elimination
        Cyclo det = Cyclo::one(f);
        for (std::size_t c = 0; c < 4; ++c) {
            std::size_t sel = 4;
            for (std::size_t r = c; r < 4; ++r)
                if (!m[r][c].is_zero()) { sel = r; break; }
            if (sel == 4) return Cyclo::zero(f);
            if (sel != c) { std::swap(m[c], m[sel]); det = -det; }
            det *= m[c][c];
            Cyclo inv = m[c][c].inverse();
            for (std::size_t r = c + 1; r < 4; ++r) {
                if (m[r][c].is_zero()) continue;
                Cyclo coef = m[r][c] * inv;
                for (std::size_t j = c; j < 4; ++j) m[r][j] -= coef * m[c][j];
            }
        }
        return det;
    };
    CHECK(det_minus(Cyclo::one(f)).is_zero());
    CHECK(det_minus(th.pow(2)).is_zero());
    CHECK(det_minus(th.pow(3)).is_zero());
    CHECK(det_minus(th.pow(4)).is_zero());
    CHECK_FALSE(det_minus(th).is_zero());
    // Reid-Tai for weights (2,3,4) mod 5: ages strictly above 1, so the
    // quotient is terminal, hence canonical
    CHECK(reid_tai({2, 3, 4}, 5));
    for (const auto& age : reid_tai_ages({2, 3, 4}, 5)) CHECK(age > 1);
    // determinant of the tangent action is theta^(2+3+4) = theta^4
    CHECK(tangent_action_determinant(pt, *gen) == th.pow(4));
}

TEST_CASE("reid_tai basic behaviour") {
    CHECK(reid_tai({1, 1, 1}, 3));            // ages 1 and 2
    CHECK(reid_tai({1, 2, 0}, 3));            // age exactly 1 each
    CHECK_FALSE(reid_tai({1, 1}, 4));         // age 1/2
    CHECK(reid_tai({}, 5));                   // no weights: trivial action
    CHECK_THROWS_AS(reid_tai({1}, 0), std::invalid_argument);
}

TEST_CASE("fixed-locus classification matches the case analysis") {
    auto outcome_of = [](const CaseReport& r, const std::string& lam) {
        for (const auto& b : r.branches)
            if (b.lambda == lam) return b.outcome;
        throw std::logic_error("missing branch " + lam);
    };
    auto r12 = classify_permutation_fixed_locus("(1,2)");
    CHECK(outcome_of(r12, "1") == FixedLocusOutcome::DivisorXiEqXj);
    CHECK(outcome_of(r12, "-1") == FixedLocusOutcome::NotOnQuartic);

    auto r1234 = classify_permutation_fixed_locus("(1,2)(3,4)");
    CHECK(outcome_of(r1234, "1") == FixedLocusOutcome::DivisorXiEqXj);
    CHECK(outcome_of(r1234, "-1") == FixedLocusOutcome::SingularLocus);

    auto r123456 = classify_permutation_fixed_locus("(1,2)(3,4)(5,6)");
    CHECK(outcome_of(r123456, "1") == FixedLocusOutcome::SingularLocus);
    CHECK(outcome_of(r123456, "-1") == FixedLocusOutcome::InEDivisorImage);

    auto r123 = classify_permutation_fixed_locus("(1,2,3)");
    CHECK(outcome_of(r123, "1") == FixedLocusOutcome::DivisorXiEqXj);
    CHECK(outcome_of(r123, "zeta3") == FixedLocusOutcome::InEDivisorImage);
    CHECK(outcome_of(r123, "zeta3^2") == FixedLocusOutcome::InEDivisorImage);

    auto r33 = classify_permutation_fixed_locus("(1,2,3)(4,5,6)");
    CHECK(outcome_of(r33, "1") == FixedLocusOutcome::NotOnQuartic);
    CHECK(outcome_of(r33, "zeta3") == FixedLocusOutcome::InEDivisorImage);

    auto r5 = classify_permutation_fixed_locus("(1,2,3,4,5)");
    CHECK(outcome_of(r5, "1") == FixedLocusOutcome::NotOnQuartic);
    for (int k = 1; k < 5; ++k)
        CHECK(outcome_of(r5, "zeta5" + std::string(k > 1 ? "^" + std::to_string(k) : "")) ==
              FixedLocusOutcome::ThetaOrbit);

    CHECK_THROWS_AS(classify_permutation_fixed_locus("(1,2)(3,4,5)"), std::invalid_argument);
}

TEST_CASE("the (i,i) stabilizer relations and order") {
    auto rep = stab_ii_relations();
    CHECK(rep.relations_hold);
    CHECK(rep.non_abelian);
    CHECK(rep.group_order_mod_pm == 16);
}

TEST_CASE("involution normal form") {
    ZMat4 phi0{1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1};
    auto nf = involution_normal_form(phi0);
    CHECK(nf.conjugator == zmat_identity());
    // random conjugates g phi0 g^-1 round-trip
    SplitMix64 rng(401);
    std::vector<ZVec4> vs = {{1,0,0,0}, {0,1,0,0}, {0,0,1,0}, {0,0,0,1},
                             {1,0,1,0}, {0,1,0,1}, {1,1,0,0}};
    int done = 0;
    while (done < 20) {
        ZMat4 g = zmat_identity();
        for (int w = 0; w < 10; ++w) {
            const auto& v = vs[std::size_t(rng.below(vs.size()))];
            i64 alpha = i64(rng.below(3)) - 1;
            g = zmat_mul(g, z_transvection(v, alpha));
        }
        ZMat4 m = zmat_mul(zmat_mul(g, phi0), zmat_symplectic_inverse(g));
        if (m == phi0 || m == zmat_neg(phi0)) continue;
        InvolutionNormalForm nf2;
        try {
            nf2 = involution_normal_form(m);
        } catch (const std::domain_error&) {
            continue;  // degenerate gcd draw; redraw
        }
        ++done;
        // pairing postconditions over Z
        CHECK(zskew(nf2.e[0], nf2.e[2]) == 1);
        CHECK(zskew(nf2.e[1], nf2.e[3]) == 1);
        CHECK(zskew(nf2.e[0], nf2.e[1]) == 0);
        CHECK(zskew(nf2.e[2], nf2.e[3]) == 0);
        // S^-1 M S = phi0, i.e. M S = S phi0
        CHECK(zmat_mul(m, nf2.conjugator) == zmat_mul(nf2.conjugator, phi0));
        CHECK(zmat_is_symplectic(nf2.conjugator));
    }
    // rejected inputs
    CHECK_THROWS_AS(involution_normal_form(zmat_identity()), std::domain_error);
    ZMat4 not_inv = z_transvection({0, 1, 0, 0}, 2);
    CHECK_THROWS_AS(involution_normal_form(not_inv), std::domain_error);
    // the degenerate gcd shape is flagged, not guessed
    ZMat4 degen{1,2,0,0, 0,-1,0,0, 0,0,1,0, 0,0,2,-1};
    CHECK(zmat_is_symplectic(degen));
    CHECK(zmat_mul(degen, degen) == zmat_identity());
    CHECK_THROWS_AS(involution_normal_form(degen), std::domain_error);
}
