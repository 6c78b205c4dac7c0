#include "siegel/congruence.hpp"

namespace siegel {

LevelSplit level_split(u32 n, u32 p) {
    if (p < 2) throw std::invalid_argument("level_split: bad prime");
    u32 ppart = 1, rest = n;
    while (rest % p == 0) {
        ppart *= p;
        rest /= p;
    }
    if (ppart == 1) throw std::domain_error("level_split: p does not divide the level");
    if (gcd_u64(ppart, rest) != 1) throw std::logic_error("level_split: factorization failure");
    return LevelSplit{n, ppart, rest};
}

Mat4 reduce_level(const Mat4& g, u32 m) {
    Mat4 r = Mat4::zero(m);
    for (int i = 0; i < 16; ++i) r.e[std::size_t(i)] = g.e[std::size_t(i)] % m;
    return r;
}

std::pair<Mat4, Mat4> crt_split(const Mat4& g, const LevelSplit& split) {
    if (g.n != split.n) throw LevelMismatchError("crt_split: level mismatch");
    if (split.n2 == 1)
        throw std::domain_error("crt_split: level is a prime power, nothing to split");
    return {reduce_level(g, split.n1), reduce_level(g, split.n2)};
}

Mat4 crt_combine_elements(const Mat4& g1, const Mat4& g2, const LevelSplit& split) {
    if (g1.n != split.n1 || g2.n != split.n2)
        throw LevelMismatchError("crt_combine: component level mismatch");
    Mat4 out = Mat4::zero(split.n);
    for (int i = 0; i < 16; ++i)
        out.e[std::size_t(i)] =
            crt_combine({g1.e[std::size_t(i)], g2.e[std::size_t(i)]}, {split.n1, split.n2});
    return out;
}

Subgroup p_projection(const Subgroup& h, u32 p) {
    LevelSplit split = level_split(h.level, p);
    std::vector<Mat4> gens;
    for (const auto& g : h.generators) gens.push_back(reduce_level(g, split.n1));
    return Subgroup(split.n1, std::move(gens));
}

KernelLayer kernel_layer(u32 p, u32 i) {
    if (i < 2) throw std::invalid_argument("kernel_layer: need i >= 2");
    KernelLayer layer{p, i, {}};
    // {X : X^t J + J X = 0} = [[A, B], [C, -A^t]] with B, C symmetric
    auto push = [&](std::array<i64, 16> e) { layer.basis.push_back(Mat4(p, e)); };
    // A entries
    push({1,0,0,0, 0,0,0,0, 0,0,-1,0, 0,0,0,0});
    push({0,1,0,0, 0,0,0,0, 0,0,0,0, 0,0,-1,0});
    push({0,0,0,0, 1,0,0,0, 0,0,0,-1, 0,0,0,0});
    push({0,0,0,0, 0,1,0,0, 0,0,0,0, 0,0,0,-1});
    // B symmetric
    push({0,0,1,0, 0,0,0,0, 0,0,0,0, 0,0,0,0});
    push({0,0,0,1, 0,0,1,0, 0,0,0,0, 0,0,0,0});
    push({0,0,0,0, 0,0,0,1, 0,0,0,0, 0,0,0,0});
    // C symmetric
    push({0,0,0,0, 0,0,0,0, 1,0,0,0, 0,0,0,0});
    push({0,0,0,0, 0,0,0,0, 0,1,0,0, 1,0,0,0});
    push({0,0,0,0, 0,0,0,0, 0,0,0,0, 0,1,0,0});
    return layer;
}

std::array<u32, 10> layer_coordinates(const KernelLayer& layer, const Mat4& x) {
    u32 p = layer.p;
    if (x.n != p) throw LevelMismatchError("layer_coordinates: wrong characteristic");
    // X = [[A,B],[C,D]] with D = -A^t, B and C symmetric
    auto at = [&](int r, int c) { return x.at(r, c); };
    auto want = [&](int r, int c, u32 value) {
        if (at(r, c) != value) throw std::domain_error("layer_coordinates: not in the algebra");
    };
    want(2, 2, (p - at(0, 0)) % p);
    want(3, 2, (p - at(0, 1)) % p);
    want(2, 3, (p - at(1, 0)) % p);
    want(3, 3, (p - at(1, 1)) % p);
    want(1, 2, at(0, 3));
    want(3, 0, at(2, 1));
    return {at(0, 0), at(0, 1), at(1, 0), at(1, 1), at(0, 2), at(0, 3), at(1, 3),
            at(2, 0), at(2, 1), at(3, 1)};
}

namespace {

// rank-extending Gaussian elimination over F_p
struct LayerSpan {
    u32 p;
    std::vector<std::array<u32, 10>> rows;  // reduced
    bool add(std::array<u32, 10> v) {
        for (const auto& r : rows) {
            // eliminate at r's pivot
            int pc = -1;
            for (int c = 0; c < 10; ++c)
                if (r[std::size_t(c)] != 0) { pc = c; break; }
            u32 coef = v[std::size_t(pc)];
            if (coef == 0) continue;
            u32 inv = mod_inverse(r[std::size_t(pc)], p);
            u64 mult = u64(coef) * inv % p;
            for (int c = 0; c < 10; ++c)
                v[std::size_t(c)] =
                    u32((v[std::size_t(c)] + u64(p) * p - mult * r[std::size_t(c)] % p) % p);
        }
        bool nonzero = false;
        for (u32 c : v) nonzero |= (c != 0);
        if (nonzero) rows.push_back(v);
        return nonzero;
    }
    u32 rank() const { return u32(rows.size()); }
};

}  // namespace

KernelGenerationResult verify_kernel_generation(u32 p, u32 i, u64 seed, u64 sample_cap,
                                                bool exhaustive) {
    if (p < 5) throw std::domain_error("verify_kernel_generation: requires p >= 5");
    if (i < 2) throw std::invalid_argument("verify_kernel_generation: requires i >= 2");
    u64 q = 1;
    for (u32 t = 0; t < i; ++t) {
        q *= p;
        if (q > kMaxModulus) throw CeilingExceededError("verify_kernel_generation: p^i cap", q);
    }
    KernelLayer layer = kernel_layer(p, i);
    // h^(p^(i-1)) is congruent to 1 + p^(i-1) E13 mod p^i: conjugating by g at
    // level p^i acts on the layer as X -> g X g^-1 mod p
    Mat4 x0 = Mat4::zero(p);
    x0.set(0, 2, 1);
    LayerSpan span{p, {}};
    KernelGenerationResult res{false, 0, 0};
    auto feed = [&](const Mat4& g_mod_p) {
        Mat4 conj = g_mod_p * x0 * g_mod_p.symplectic_inverse();
        ++res.conjugators_used;
        span.add(layer_coordinates(layer, conj));
        return span.rank() == 10;
    };
    if (exhaustive) {
        // breadth-first walk of the level-p group, stopping at full rank
        auto gens = sp4_generators(p);
        std::unordered_map<Mat4::Key, std::size_t, Mat4KeyHash> seen;
        std::vector<Mat4> elems{Mat4::identity(p)};
        seen[elems[0].key()] = 0;
        bool done = feed(elems[0]);
        for (std::size_t head = 0; head < elems.size() && !done; ++head) {
            for (const auto& gen : gens) {
                Mat4 y = elems[head] * gen;
                if (seen.count(y.key())) continue;
                if (elems.size() >= 2'000'000)
                    throw CeilingExceededError("verify_kernel_generation: exhaustive cap", elems.size());
                seen[y.key()] = elems.size();
                elems.push_back(y);
                if (feed(elems.back())) { done = true; break; }
            }
        }
    } else {
        Subgroup g = Subgroup::full_group(p);
        const auto& chain = g.chain();
        SplitMix64 rng(mix_seed(seed, 7));
        for (u64 t = 0; t < sample_cap; ++t)
            if (feed(chain.sample(rng))) break;
    }
    res.rank = span.rank();
    res.generated = (res.rank == 10);
    return res;
}

}  // namespace siegel
