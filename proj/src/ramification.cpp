#include "siegel/ramification.hpp"

#include <algorithm>
#include <deque>

namespace siegel {

namespace {

void require_center(const Subgroup& h) {
    if (!h.has_minus_one())
        throw std::domain_error("ramification invariant requires -1 in H");
}

// element r_{wa,l1} r_{wb,l2} r_{wc,l3} of Ram_G for pairwise-commuting
// transvections along vectors inside one isotropic plane
Mat4 ram_element(const Vec4& wa, const Vec4& wb, const Vec4& wc, u32 l1, u32 l2, u32 l3) {
    return transvection(wa, l1) * transvection(wb, l2) * transvection(wc, l3);
}

}  // namespace

Rational ram_v(const Subgroup& h, const Vec4& v) {
    if (v.n != h.level) throw LevelMismatchError("ram_v: level mismatch");
    if (!v.is_primitive()) throw std::domain_error("ram_v: vector not primitive");
    u32 n = h.level, count = 0;
    for (u32 a = 0; a < n; ++a)
        if (h.contains(transvection(v, a))) ++count;
    return Rational(count, n);
}

int ram_E(const Subgroup& h, const DivisorE& e) {
    if (e.a1.n != h.level) throw LevelMismatchError("ram_E: level mismatch");
    require_center(h);
    return h.contains(e_involution(e).rep) ? 1 : 0;
}

int ram_F(const Subgroup& h, const DivisorF& f) {
    if (f.psi.rep.n != h.level) throw LevelMismatchError("ram_F: level mismatch");
    require_center(h);
    return h.contains(f.psi.rep) ? 1 : 0;
}

Rational ram_line(const Subgroup& h, const LineLD& l) {
    if (l.va.n != h.level) throw LevelMismatchError("ram_line: level mismatch");
    u32 n = h.level;
    u64 best = n;  // gcd achieved by (0,0)
    for (u32 a = 0; a < n; ++a)
        for (u32 b = 0; b < n; ++b) {
            u64 g = gcd_u64(gcd_u64(a, b), n);
            if (g >= best) continue;
            if (h.contains(transvection(l.va, a) * transvection(l.vb, b))) best = g;
        }
    return Rational(1, best);
}

Rational ram_line_in_divisor(const Subgroup& h, const LineLD& l, bool side_va) {
    if (l.va.n != h.level) throw LevelMismatchError("ram_line_in_divisor: level mismatch");
    u32 n = h.level;
    u64 total = 0, on_side = 0;
    const Vec4& vs = side_va ? l.va : l.vb;
    for (u32 a = 0; a < n; ++a)
        for (u32 b = 0; b < n; ++b)
            if (h.contains(transvection(l.va, a) * transvection(l.vb, b))) {
                ++total;
                // the side parameter is b for side_va (the va-transvection part
                // is a), so membership in Ram_G(v_side) means the *other*
                // parameter vanishes
                u32 other = side_va ? b : a;
                if (other == 0) ++on_side;
            }
    return Rational(total, on_side * u64(n));
}

namespace {

std::vector<std::array<u32, 3>> scan_triple_params(const Subgroup& h, const TriplePoint& p) {
    u32 n = h.level;
    std::vector<std::array<u32, 3>> members;
    for (u32 a = 0; a < n; ++a)
        for (u32 b = 0; b < n; ++b)
            for (u32 c = 0; c < n; ++c)
                if (h.contains(ram_element(p.wa, p.wb, p.wc, a, b, c)))
                    members.push_back({a, b, c});
    return members;
}

ToricSingularity triple_toric(u32 n, const std::vector<std::array<u32, 3>>& members) {
    std::vector<Weight> ws;
    for (const auto& m : members) ws.push_back(Weight{m[0], m[1], m[2]});
    return ToricSingularity(n, ws);
}

}  // namespace

Rational delta_at_triple(const Subgroup& h, const TriplePoint& p) {
    if (p.wa.n != h.level) throw LevelMismatchError("delta_at_triple: level mismatch");
    return triple_toric(h.level, scan_triple_params(h, p)).delta();
}

Rational mult_bound_at_triple(const Subgroup& h, const TriplePoint& p) {
    if (p.wa.n != h.level) throw LevelMismatchError("mult_bound_at_triple: level mismatch");
    return triple_toric(h.level, scan_triple_params(h, p)).mult_upper_bound();
}

BigInt mult_exact_at_triple(const Subgroup& h, const TriplePoint& p) {
    if (p.wa.n != h.level) throw LevelMismatchError("mult_exact_at_triple: level mismatch");
    return triple_toric(h.level, scan_triple_params(h, p)).mult_exact();
}

const char* family_name(BoundFamily f) {
    switch (f) {
        case BoundFamily::D: return "D";
        case BoundFamily::E: return "E";
        case BoundFamily::DD: return "DD";
        case BoundFamily::F: return "F";
        case BoundFamily::DDD: return "DDD";
    }
    return "?";
}

BoundFamily family_from_name(const std::string& s) {
    if (s == "D") return BoundFamily::D;
    if (s == "E") return BoundFamily::E;
    if (s == "DD") return BoundFamily::DD;
    if (s == "F") return BoundFamily::F;
    if (s == "DDD") return BoundFamily::DDD;
    throw std::invalid_argument("unknown bound family: " + s);
}

Rational RamificationReport::mean(BoundFamily f) const {
    switch (f) {
        case BoundFamily::D: return sum_d / Rational(count_d);
        case BoundFamily::E: return sum_e / Rational(count_e);
        case BoundFamily::DD: return sum_l / Rational(count_l);
        case BoundFamily::F: return sum_f / Rational(count_f);
        case BoundFamily::DDD: return sum_mult / Rational(count_t);
    }
    throw std::logic_error("bad family");
}

RamificationLab::RamificationLab(const Atlas& atlas, const Subgroup& h)
    : atlas_(atlas), h_(h), oracle_(h) {
    if (atlas.level() != h.level) throw LevelMismatchError("ramification lab: level mismatch");
    require_center(h);
    u32 p;
    if (!is_prime_power(h.level, &p))
        throw std::domain_error("ramification experiments require a prime-power level");
    cusp_cache_.resize(atlas.cusps().size());
}

const RamificationLab::CuspLocal& RamificationLab::cusp_local(u32 cusp) const {
    auto& slot = cusp_cache_[cusp];
    if (slot) return *slot;
    const IsotropicPlane& pl = atlas_.planes()[atlas_.cusps()[cusp].plane];
    u32 n = atlas_.level();
    Vec4 w3 = pl.w1 + pl.w2;
    CuspLocal local;
    // subgroup scan with saturation: skip parameters already generated
    std::vector<u8> known(std::size_t(n) * n * n, 0);
    known[0] = 1;
    local.elements.push_back({0, 0, 0});
    auto idx = [n](u32 a, u32 b, u32 c) { return (std::size_t(a) * n + b) * n + c; };
    for (u32 a = 0; a < n; ++a)
        for (u32 b = 0; b < n; ++b)
            for (u32 c = 0; c < n; ++c) {
                if (known[idx(a, b, c)]) continue;
                if (!oracle_.contains(ram_element(pl.w1, pl.w2, w3, a, b, c))) continue;
                // saturate: close the member set under addition of (a,b,c)
                auto snapshot = local.elements;
                for (const auto& e : snapshot) {
                    u32 x = e[0], y = e[1], z = e[2];
                    for (;;) {
                        x = (x + a) % n; y = (y + b) % n; z = (z + c) % n;
                        if (known[idx(x, y, z)]) break;
                        known[idx(x, y, z)] = 1;
                        local.elements.push_back({x, y, z});
                    }
                }
            }
    std::sort(local.elements.begin(), local.elements.end());
    slot = std::move(local);
    return *slot;
}

namespace {

// orbit partition of 0..count-1 under the index action of the generators;
// returns (representative, orbit size) pairs in increasing representative order
template <class ActFn>
std::vector<std::pair<u32, u64>> orbit_partition(std::size_t count,
                                                 const std::vector<Mat4>& gens, ActFn act) {
    std::vector<u8> seen(count, 0);
    std::vector<std::pair<u32, u64>> out;
    std::vector<u32> stack;
    for (u32 start = 0; start < count; ++start) {
        if (seen[start]) continue;
        u64 size = 1;
        seen[start] = 1;
        stack.assign(1, start);
        while (!stack.empty()) {
            u32 x = stack.back();
            stack.pop_back();
            for (const auto& g : gens) {
                u32 y = act(g, x);
                if (!seen[y]) {
                    seen[y] = 1;
                    ++size;
                    stack.push_back(y);
                }
            }
        }
        out.emplace_back(start, size);
    }
    return out;
}

}  // namespace

RamificationReport RamificationLab::report(bool keep_lines) const {
    const u32 n = atlas_.level();
    RamificationReport rep;
    rep.level = n;
    rep.subgroup_order = h_.order();

    // family D
    rep.count_d = atlas_.divisors().size();
    rep.sum_d = 0;
    for (const auto& d : atlas_.divisors()) {
        u32 cnt = 0;
        for (u32 a = 0; a < n; ++a)
            if (oracle_.contains(transvection(d.v, a))) ++cnt;
        Rational r(cnt, n);
        rep.ram_d.push_back(r);
        rep.sum_d += r;
    }

    // family E
    rep.count_e = atlas_.epairs().size();
    rep.sum_e = 0;
    for (const auto& e : atlas_.epairs()) {
        u8 r = oracle_.contains(e_involution(e).rep) ? 1 : 0;
        rep.ram_e.push_back(r);
        rep.sum_e += r;
    }

    // family F
    rep.count_f = atlas_.fdivisors().size();
    rep.sum_f = 0;
    for (const auto& f : atlas_.fdivisors()) {
        u8 r = oracle_.contains(f.psi.rep) ? 1 : 0;
        rep.ram_f.push_back(r);
        rep.sum_f += r;
    }

    // family DD: aggregate line sums over H-orbits of cusps
    rep.count_l = atlas_.lines().size();
    rep.sum_l = 0;
    rep.lines_kept = keep_lines;
    if (keep_lines) {
        rep.ram_l.resize(rep.count_l);
        rep.ram_l_sides.resize(rep.count_l);
    }
    // rewrite the symmetric datum S = [[p,q],[q,r]] (basis (w1,w2)) in the
    // basis (va,vb): with T = [coords(va) coords(vb)], U = T^-1 S T^-t, so
    // that S = U11 va va^t + 2 U12-mixed ... and membership in the two
    // transvection groups reads off the entries of U
    auto sym_in_pair_basis = [n](u64 p, u64 q, u64 r, u32 a1, u32 a2, u32 b1, u32 b2) {
        u64 det = (u64(a1) * b2 % n + n - u64(a2) * b1 % n) % n;
        u64 di = mod_inverse(u32(det), n);
        u64 t11 = di * b2 % n, t12 = (n - di * b1 % n) % n;
        u64 t21 = (n - di * a2 % n) % n, t22 = di * a1 % n;
        u64 u11 = (t11 * t11 % n * p + 2 * (t11 * t12 % n) * q + t12 * t12 % n * r) % n;
        u64 u12 = (t11 * t21 % n * p + (t11 * t22 % n + t12 * t21 % n) * q + t12 * t22 % n * r) % n;
        u64 u22 = (t21 * t21 % n * p + 2 * (t21 * t22 % n) * q + t22 * t22 % n * r) % n;
        return std::array<u64, 3>{u11, u12, u22};
    };
    auto eval_line = [&](u32 li) {
        const LineLD& l = atlas_.lines()[li];
        const CuspLocal& local = cusp_local(l.cusp);
        const IsotropicPlane& pl = atlas_.planes()[atlas_.cusps()[l.cusp].plane];
        auto [a1, a2] = solve_pair_coeffs(pl.w1, pl.w2, l.va);
        auto [b1, b2] = solve_pair_coeffs(pl.w1, pl.w2, l.vb);
        u64 best = n, total = 0, side_a = 0, side_b = 0;
        for (const auto& e : local.elements) {
            // symmetric form of the element in the (w1,w2) basis: [[x+z, z], [z, y+z]]
            u64 p = (e[0] + e[2]) % n, q = e[2], r = (e[1] + e[2]) % n;
            auto [s, off, t] = sym_in_pair_basis(p, q, r, a1, a2, b1, b2);
            // S = s va va^t + t vb vb^t requires the mixed entry to vanish
            if (off != 0) continue;
            ++total;
            if (t == 0) ++side_a;  // lies in Ram_G(va)
            if (s == 0) ++side_b;
            best = std::min(best, gcd_u64(gcd_u64(s, t), n));
        }
        Rational rl(1, best);
        if (keep_lines) {
            rep.ram_l[li] = rl;
            rep.ram_l_sides[li] = {Rational(total, side_a * u64(n)), Rational(total, side_b * u64(n))};
        }
        return rl;
    };
    auto cusp_orbits = orbit_partition(atlas_.cusps().size(), h_.generators,
                                       [&](const Mat4& g, u32 q) { return atlas_.act_cusp(g, q); });
    if (keep_lines) {
        // per-stratum values requested: evaluate every line directly
        for (u32 li = 0; li < rep.count_l; ++li) rep.sum_l += eval_line(li);
    } else {
        for (const auto& [rep_cusp, orbit_size] : cusp_orbits) {
            Rational local_sum = 0;
            for (u32 li : atlas_.lines_over_cusp(rep_cusp)) local_sum += eval_line(li);
            rep.sum_l += local_sum * Rational(orbit_size);
        }
    }

    // family DDD: one representative per H-orbit of triple points
    rep.count_t = atlas_.triples().size();
    rep.sum_mult = 0;
    auto triple_orbits = orbit_partition(atlas_.triples().size(), h_.generators,
                                         [&](const Mat4& g, u32 t) { return atlas_.act_triple(g, t); });
    for (const auto& [ti, orbit_size] : triple_orbits) {
        const TriplePoint& tp = atlas_.triples()[ti];
        const CuspLocal& local = cusp_local(tp.cusp);
        const IsotropicPlane& pl = atlas_.planes()[atlas_.cusps()[tp.cusp].plane];
        // weight coordinates of the cusp-local elements along this triple
        auto [a1, a2] = solve_pair_coeffs(pl.w1, pl.w2, tp.wa);
        auto [b1, b2] = solve_pair_coeffs(pl.w1, pl.w2, tp.wb);
        std::vector<Weight> ws;
        for (const auto& e : local.elements) {
            u64 p = (e[0] + e[2]) % n, q = e[2], r = (e[1] + e[2]) % n;
            // S = l1 wa wa^t + l2 wb wb^t + l3 wc wc^t with wc = -(wa+wb):
            // in the (wa,wb) basis U = [[l1+l3, l3], [l3, l2+l3]]
            auto [u11, u12, u22] = sym_in_pair_basis(p, q, r, a1, a2, b1, b2);
            u32 l3 = u32(u12);
            u32 l1 = u32((u11 + n - l3) % n);
            u32 l2 = u32((u22 + n - l3) % n);
            ws.push_back(Weight{l1, l2, l3});
        }
        ToricSingularity toric(n, ws);
        auto key = toric.key();
        auto it = toric_cache_.find(key);
        if (it == toric_cache_.end())
            it = toric_cache_.emplace(key, std::make_pair(toric.delta(), toric.mult_exact())).first;
        Rational delta = it->second.first;
        BigInt mult = it->second.second;
        Rational bound = Rational(BigInt(n) * n * n) * delta / Rational(toric.group_order());
        rep.triple_orbits.push_back(TripleOrbitEntry{ti, orbit_size, delta, bound, mult});
        rep.sum_mult += Rational(mult);
    }
    return rep;
}

Rational printed_bound(BoundFamily f, const Rational& epsilon, u32 p) {
    if (epsilon <= 0 || epsilon > 1) throw std::domain_error("printed_bound: epsilon out of (0,1]");
    Rational inv(boost::multiprecision::denominator(epsilon),
                 boost::multiprecision::numerator(epsilon));
    auto ipow = [](const Rational& x, unsigned e) {
        Rational r = 1;
        for (unsigned i = 0; i < e; ++i) r *= x;
        return r;
    };
    auto p2 = [](unsigned e) { return Rational(BigInt(1) << e); };
    switch (f) {
        case BoundFamily::D:
            return p2(5) * ipow(inv, 2) * Rational(p_floor(p2(72) * ipow(inv, 42), p).value);
        case BoundFamily::E:
            return p2(7) * ipow(inv, 2) * Rational(p_floor(p2(246) * ipow(inv, 130), p).value);
        case BoundFamily::DD:
            return p2(11) * ipow(inv, 2) * Rational(p_floor(p2(1020) * ipow(inv, 350), p).value);
        case BoundFamily::F:
            return p2(13) * ipow(inv, 2) * Rational(p_floor(p2(1722) * ipow(inv, 702), p).value);
        case BoundFamily::DDD:
            return p2(69) * ipow(inv, 34) * Rational(p_floor(p2(11170) * ipow(inv, 5950), p).value);
    }
    throw std::logic_error("bad family");
}

namespace {

BoundVerdict make_verdict(const RamificationLab& lab, const RamificationReport& rep,
                          BoundFamily f) {
    u32 p = 0;
    is_prime_power(lab.atlas().level(), &p);
    BoundVerdict v;
    v.family = f;
    v.epsilon = rep.mean(f);
    v.index = sp4_order(lab.atlas().level()) / lab.subgroup().order();
    v.strict = (f == BoundFamily::D || f == BoundFamily::E);
    if (v.epsilon == 0) {
        // the hypothesis is vacuous; the printed bound diverges
        v.bound_infinite = true;
        v.bound = 0;
        v.satisfied = true;
        return v;
    }
    // multiplicity means can exceed 1; the implication still applies at any
    // smaller epsilon, so clamp into the printed bound's domain
    Rational eps = v.epsilon > 1 ? Rational(1) : v.epsilon;
    v.bound_infinite = false;
    v.bound = printed_bound(f, eps, p);
    v.satisfied = v.strict ? (Rational(v.index) < v.bound) : (Rational(v.index) <= v.bound);
    return v;
}

}  // namespace

BoundVerdict RamificationLab::bound_check(BoundFamily f) const {
    return make_verdict(*this, report(false), f);
}

std::vector<BoundVerdict> RamificationLab::bound_check_all() const {
    RamificationReport rep = report(false);
    std::vector<BoundVerdict> out;
    for (BoundFamily f : {BoundFamily::D, BoundFamily::E, BoundFamily::DD, BoundFamily::F,
                          BoundFamily::DDD})
        out.push_back(make_verdict(*this, rep, f));
    return out;
}

IdentityReport verify_identities(u32 n, u64 trials, u64 seed, unsigned threads) {
    check_level(n);
    if (n < 3) throw std::invalid_argument("verify_identities: level must be >= 3");
    IdentityReport rep;
    rep.level = n;
    rep.trials = trials;
    rep.seed = seed;
    std::vector<std::vector<IdentityFailure>> fails(trials);
    std::vector<u64> checks(trials, 0);

    auto run_trial = [&](std::size_t t) {
        SplitMix64 rng(mix_seed(seed, t));
        auto draw = [&] { return i64(rng.below(n)); };
        // identity 1 (divisor family): W * M * U * M^-1 is the printed
        // unipotent with entries -b a z^2 and +b a z^2
        {
            i64 x = draw(), y = draw(), z = draw(), b = draw(), a = draw();
            Mat4 M(n, {1 + a * x * z, 0, -a * x * x, -a * x * y,
                       a * y * z, 1, -a * x * y, -a * y * y,
                       a * z * z, 0, 1 - a * x * z, -a * y * z,
                       0, 0, 0, 1});
            Mat4 U(n, {1, 0, 0, b, 0, 1, b, 0, 0, 0, 1, 0, 0, 0, 0, 1});
            Mat4 W(n, {1, 0, 0, -b - b * a * x * z,
                       0, 1, -b - b * a * x * z, b * a * z * (-2 * y + b * z + b * a * x * z * z),
                       0, 0, 1, 0,
                       0, 0, 0, 1});
            Mat4 R(n, {1, 0, 0, 0, -b * a * z * z, 1, 0, 0, 0, 0, 1, b * a * z * z, 0, 0, 0, 1});
            ++checks[t];
            if (!(W * M * U * M.symplectic_inverse() == R))
                fails[t].push_back(IdentityFailure{"boundD", t, {x, y, z, b, a}});
        }
        // identity 2 (E family): (phi_{x1,z1} phi_{0,0} phi_{x2,z2})^2
        {
            i64 x1 = draw(), z1 = draw(), x2 = draw(), z2 = draw();
            auto phi = [&](i64 xx, i64 zz) {
                return Mat4(n, {1, 0, 0, -2 * xx, -2 * zz, -1, 2 * xx, 0, 0, 0, 1, -2 * zz,
                                0, 0, 0, -1});
            };
            Mat4 prod = phi(x1, z1) * phi(0, 0) * phi(x2, z2);
            Mat4 R(n, {1, 0, 0, 0, 0, 1, 0, 8 * (x1 * z2 - x2 * z1), 0, 0, 1, 0, 0, 0, 0, 1});
            ++checks[t];
            if (!(prod * prod == R))
                fails[t].push_back(IdentityFailure{"boundE", t, {x1, z1, x2, z2}});
        }
        // identity 3 (line family): the printed commutator word evaluates to
        // the unipotent with (2,4) entry 2 x^2 f^2 a0 (the printed right-hand
        // side carries the parameter -a0 of the same matrix family)
        {
            i64 x = draw(), s = draw(), d = draw(), e = draw(), f = draw(), a0 = draw(), c = draw();
            Mat4 rho(n, {1, 0, 0, x, 0, 1, x, s, 0, 0, 1, 0, 0, 0, 0, 1});
            Mat4 rho1(n, {1 + d * f * a0, 0, -d * d * a0, -d * e * a0,
                          e * f * a0, 1, -d * e * a0, -e * e * a0 + c,
                          f * f * a0, 0, 1 - d * f * a0, -e * f * a0,
                          0, 0, 0, 1});
            Mat4 ri = rho.symplectic_inverse(), r1i = rho1.symplectic_inverse();
            Mat4 lhs = rho1 * rho * r1i * ri * rho1 * ri * r1i * rho;
            Mat4 R(n, {1, 0, 0, 0, 0, 1, 0, 2 * x * x * f * f * a0, 0, 0, 1, 0, 0, 0, 0, 1});
            ++checks[t];
            if (!(lhs == R))
                fails[t].push_back(IdentityFailure{"boundDD", t, {x, s, d, e, f, a0, c}});
        }
        // identity 4 (F family): phi_{b1} phi_{b2}
        {
            i64 b1 = draw(), b2 = draw();
            auto psi = [&](i64 b) {
                return Mat4(n, {0, 1, 0, b, 1, 0, -b, 0, 0, 0, 0, 1, 0, 0, 1, 0});
            };
            Mat4 lhs = psi(b1) * psi(b2);
            Mat4 R(n, {1, 0, b1 - b2, 0, 0, 1, 0, b2 - b1, 0, 0, 1, 0, 0, 0, 0, 1});
            ++checks[t];
            if (!(lhs == R))
                fails[t].push_back(IdentityFailure{"boundF", t, {b1, b2}});
        }
    };
    parallel_for(trials, threads, run_trial);
    for (auto& f : fails)
        for (auto& x : f) rep.failures.push_back(std::move(x));
    for (u64 c : checks) rep.checks += c;
    return rep;
}

Subgroup random_subgroup(const Subgroup& ambient, SplitMix64& rng, int max_gens) {
    u32 n = ambient.level;
    int k = 1 + int(rng.below(u64(max_gens)));
    std::vector<Mat4> gens;
    for (int i = 0; i < k; ++i) {
        // mix uniform elements with transvections and conjugated involutions,
        // so the sweep reaches subgroups with nontrivial ramification
        switch (rng.below(3)) {
            case 0:
                gens.push_back(ambient.chain().sample(rng));
                break;
            case 1: {
                Vec4 v;
                do {
                    v = Vec4(n, {i64(rng.below(n)), i64(rng.below(n)), i64(rng.below(n)),
                                 i64(rng.below(n))});
                } while (!v.is_primitive());
                gens.push_back(transvection(v, 1 + u32(rng.below(n - 1))));
                break;
            }
            default: {
                Mat4 g = ambient.chain().sample(rng);
                Mat4 phi0(n, {1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1});
                gens.push_back(g * phi0 * g.symplectic_inverse());
            }
        }
    }
    gens.push_back(-Mat4::identity(n));
    return Subgroup(n, std::move(gens));
}

}  // namespace siegel
