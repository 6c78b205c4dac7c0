#include "siegel/toric.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "siegel/polytope.hpp"

namespace siegel {

ToricSingularity::ToricSingularity(u32 modulus, std::vector<Weight> weights) : n_(modulus) {
    if (modulus < 1 || modulus > kMaxToricModulus)
        throw std::invalid_argument("toric modulus out of range");
    std::vector<Row> rows;
    for (const auto& w : weights) rows.push_back({w[0] % n_, w[1] % n_, w[2] % n_});
    for (const auto& r : howell(rows, n_, 3)) {
        if (r[0] == 0 && r[1] == 0 && r[2] == 0) continue;
        gens_.push_back(Weight{r[0], r[1], r[2]});
    }
}

BigInt ToricSingularity::group_order() const {
    // Howell rows have pivots dividing n; the span size is the product of the
    // row orders n / pivot
    BigInt order = 1;
    for (const auto& g : gens_) {
        u32 pivot = g[0] ? g[0] : (g[1] ? g[1] : g[2]);
        order *= n_ / u32(gcd_u64(pivot, n_));
    }
    return order;
}

u32 ToricSingularity::group_exponent() const {
    u64 e = 1;
    for (const auto& g : gens_) {
        u64 ord = n_ / gcd_u64(gcd_u64(gcd_u64(g[0], g[1]), g[2]), n_);
        e = e / gcd_u64(e, ord) * ord;
    }
    return u32(e);
}

std::string ToricSingularity::key() const {
    std::string s = std::to_string(n_) + ":";
    for (const auto& g : gens_)
        s += std::to_string(g[0]) + "," + std::to_string(g[1]) + "," + std::to_string(g[2]) + ";";
    return s;
}

bool ToricSingularity::is_invariant(u64 l1, u64 l2, u64 l3) const {
    for (const auto& g : gens_)
        if ((l1 * g[0] + l2 * g[1] + l3 * g[2]) % n_ != 0) return false;
    return true;
}

Rational ToricSingularity::delta() const {
    // shortest nonzero invariant monomial via breadth-first search over the
    // residue states of the generator congruences
    std::size_t r = gens_.size();
    if (r == 0) return Rational(1, n_);
    u64 space = 1;
    for (std::size_t i = 0; i < r; ++i) space *= n_;
    if (space > 50'000'000) throw CeilingExceededError("delta: state space too large", space);
    auto step = [&](u64 state, int j) {
        u64 out = 0, mul = 1;
        for (std::size_t i = 0; i < r; ++i) {
            u64 digit = (state / mul) % n_;
            digit = (digit + gens_[i][std::size_t(j)]) % n_;
            out += digit * mul;
            mul *= n_;
        }
        return out;
    };
    std::vector<u32> dist(space, 0);
    std::deque<u64> queue;
    for (int j = 0; j < 3; ++j) {
        u64 s = step(0, j);
        if (s == 0) return Rational(1, n_);
        if (!dist[s]) { dist[s] = 1; queue.push_back(s); }
    }
    while (!queue.empty()) {
        u64 s = queue.front();
        queue.pop_front();
        for (int j = 0; j < 3; ++j) {
            u64 t = step(s, j);
            if (t == 0) return Rational(dist[s] + 1, n_);
            if (!dist[t]) { dist[t] = dist[s] + 1; queue.push_back(t); }
        }
    }
    throw std::logic_error("delta: search did not close");  // unreachable: x_i^n is invariant
}

Rational ToricSingularity::mult_upper_bound() const {
    return Rational(BigInt(n_) * n_ * n_) * delta() / Rational(group_order());
}

BigInt ToricSingularity::mult_exact() const {
    if (n_ > 32) throw CeilingExceededError("mult_exact modulus cap (32) exceeded", n_);
    // minimal points of the invariant-exponent staircase: per column (a,b) the
    // least c with (a,b,c) invariant, pruned to the antichain
    std::vector<IPoint> raw;
    for (u32 a = 0; a <= n_; ++a)
        for (u32 b = 0; b <= n_; ++b)
            for (u32 c = 0; c <= n_; ++c)
                if (!(a == 0 && b == 0 && c == 0) && is_invariant(a, b, c)) {
                    raw.push_back(IPoint{i64(a), i64(b), i64(c)});
                    break;  // smallest c for this column
                }
    std::vector<IPoint> min_pts;
    for (const auto& p : raw) {
        bool dominated = false;
        for (const auto& q : raw)
            if (!(q == p) && q[0] <= p[0] && q[1] <= p[1] && q[2] <= p[2]) { dominated = true; break; }
        if (!dominated) min_pts.push_back(p);
    }
    // The complement of conv(K \ 0) + R^3_{>=0} in the positive octant is the
    // union of the cones from the origin over the strictly-positive-normal
    // facets of conv(min_pts); its normalized volume is a sum of |det|.
    BigInt vol = 0;
    int rank = affine_rank(min_pts);
    if (rank <= 1) throw std::logic_error("mult_exact: degenerate staircase");
    if (rank == 2) {
        // all minimal points on one plane (it passes through the three axis
        // points, so its normal is strictly positive); the region is the cone
        // over the polygon conv(min_pts)
        const IPoint& p0 = min_pts[0];
        IPoint nrm{0, 0, 0};
        for (std::size_t i = 1; i < min_pts.size() && nrm == IPoint{0, 0, 0}; ++i)
            for (std::size_t j = i + 1; j < min_pts.size(); ++j) {
                IPoint u{min_pts[i][0] - p0[0], min_pts[i][1] - p0[1], min_pts[i][2] - p0[2]};
                IPoint v{min_pts[j][0] - p0[0], min_pts[j][1] - p0[1], min_pts[j][2] - p0[2]};
                nrm = IPoint{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                             u[0] * v[1] - u[1] * v[0]};
                if (!(nrm == IPoint{0, 0, 0})) break;
            }
        int drop = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(nrm[std::size_t(i)]) > std::abs(nrm[std::size_t(drop)])) drop = i;
        std::vector<std::array<i64, 2>> proj;
        for (const auto& p : min_pts) {
            if (drop == 0) proj.push_back({p[1], p[2]});
            else if (drop == 1) proj.push_back({p[0], p[2]});
            else proj.push_back({p[0], p[1]});
        }
        auto ring = convex_hull_2d(proj);
        for (std::size_t t = 1; t + 1 < ring.size(); ++t) {
            const IPoint &x = min_pts[ring[0]], &y = min_pts[ring[t]], &z = min_pts[ring[t + 1]];
            i64 det = x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
                      x[2] * (y[0] * z[1] - y[1] * z[0]);
            vol += det < 0 ? -det : det;
        }
    } else {
        for (const auto& tri : convex_hull_3d(min_pts)) {
            // keep facets with strictly positive inward normal and offset
            if (tri.inward[0] <= 0 || tri.inward[1] <= 0 || tri.inward[2] <= 0) continue;
            if (tri.offset <= 0) continue;
            const IPoint &x = min_pts[tri.v[0]], &y = min_pts[tri.v[1]], &z = min_pts[tri.v[2]];
            i64 det = x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
                      x[2] * (y[0] * z[1] - y[1] * z[0]);
            vol += det < 0 ? -det : det;
        }
    }
    BigInt order = group_order();
    if (vol % order != 0)
        throw std::logic_error("mult_exact: volume not divisible by the group order");
    return vol / order;
}

std::vector<std::array<u32, 3>> ToricSingularity::semigroup_points(u32 degree_cap) const {
    std::vector<std::array<u32, 3>> out;
    for (u32 a = 0; a <= degree_cap; ++a)
        for (u32 b = 0; a + b <= degree_cap; ++b)
            for (u32 c = 0; a + b + c <= degree_cap; ++c)
                if (!(a == 0 && b == 0 && c == 0) && is_invariant(a, b, c))
                    out.push_back({a, b, c});
    return out;
}

std::vector<std::array<u32, 3>> ToricSingularity::semigroup_generators(u32 degree_cap) const {
    auto pts = semigroup_points(degree_cap);
    std::vector<std::array<u32, 3>> gens;
    for (const auto& p : pts) {
        bool reducible = false;
        for (const auto& q : pts) {
            if (q[0] > p[0] || q[1] > p[1] || q[2] > p[2]) continue;
            if (q == p) continue;
            if (is_invariant(p[0] - q[0], p[1] - q[1], p[2] - q[2]) &&
                !(p[0] == q[0] && p[1] == q[1] && p[2] == q[2])) {
                reducible = true;
                break;
            }
        }
        if (!reducible) gens.push_back(p);
    }
    return gens;
}

Rational delta_uvw(u32 u, u32 v, u32 w, u32 p, u32 s) {
    u64 q = 1;
    for (u32 i = 0; i < s; ++i) q *= p;
    if (q > ToricSingularity::kMaxToricModulus)
        throw CeilingExceededError("delta_uvw: p^s cap exceeded", q);
    return ToricSingularity(u32(q), {Weight{u % u32(q), v % u32(q), w % u32(q)}}).delta();
}

CensusResult census(u32 p, u32 s, const Rational& epsilon, unsigned threads) {
    u64 q = 1;
    for (u32 i = 0; i < s; ++i) q *= p;
    if (q > 1024) throw CeilingExceededError("census: p^s cap (1024) exceeded", q);
    u32 qq = u32(q);

    auto val = [&](u32 x) {  // p-adic valuation, with v(0) = s
        if (x == 0) return s;
        u32 v = 0;
        while (x % p == 0) { x /= p; ++v; }
        return v;
    };
    // canonical representative up to unit scaling: the first coordinate of
    // minimal valuation has unit part exactly 1
    auto canonical = [&](u32 u, u32 v, u32 w) {
        u32 vs[3] = {val(u), val(v), val(w)};
        int j = 0;
        for (int i = 1; i < 3; ++i)
            if (vs[i] < vs[j]) j = i;
        u32 coords[3] = {u, v, w};
        if (vs[j] == s) return true;  // (0,0,0)
        u32 unit_part = coords[j];
        for (u32 i = 0; i < vs[j]; ++i) unit_part /= p;
        return unit_part == 1;
    };

    // count canonical triples with delta >= epsilon, deterministically
    // partitioned by first coordinate
    std::vector<u64> partial(qq, 0);
    parallel_for(qq, threads, [&](std::size_t ui) {
        u32 u = u32(ui);
        u64 cnt = 0;
        for (u32 v = 0; v < qq; ++v)
            for (u32 w = 0; w < qq; ++w) {
                if (!canonical(u, v, w)) continue;
                if (delta_uvw(u, v, w, p, s) >= epsilon) ++cnt;
            }
        partial[ui] = cnt;
    });
    u64 count = 0;
    for (u64 c : partial) count += c;

    // bound 2^2 eps^-8 [4 eps^-5]_p
    Rational inv = Rational(boost::multiprecision::denominator(epsilon),
                            boost::multiprecision::numerator(epsilon));
    Rational pow8 = 1, pow5 = 1;
    for (int i = 0; i < 8; ++i) pow8 *= inv;
    for (int i = 0; i < 5; ++i) pow5 *= inv;
    Rational bound = Rational(4) * pow8 * Rational(p_floor(Rational(4) * pow5, p).value);
    return CensusResult{count, bound, Rational(count) <= bound};
}

namespace {

Perm compose(const Perm& a, const Perm& b) {  // (a*b)(x) = a(b(x))
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
}

Perm identity_perm(u32 degree) {
    Perm p(degree);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

std::vector<Perm> close_group(u32 degree, const std::vector<Perm>& gens, std::size_t cap) {
    std::vector<Perm> elems{identity_perm(degree)};
    std::map<Perm, bool> seen{{elems[0], true}};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : gens) {
            Perm x = compose(elems[i], g);
            if (seen.count(x)) continue;
            if (elems.size() >= cap) throw CeilingExceededError("permutation closure cap", cap);
            seen[x] = true;
            elems.push_back(std::move(x));
        }
    std::sort(elems.begin(), elems.end());
    return elems;
}

}  // namespace

std::vector<Perm> PermGroup::elements() const { return close_group(degree, generators, 1 << 20); }

u64 k_constant(const SolvableChain& chain, std::vector<u64>* exponents_out) {
    if (chain.levels.empty()) throw std::invalid_argument("k_constant: empty chain");
    u64 k = 1;
    std::vector<u64> exps;
    std::vector<Perm> prev = close_group(chain.degree, chain.levels[0], 1 << 20);
    for (std::size_t li = 1; li < chain.levels.size(); ++li) {
        auto cur = close_group(chain.degree, chain.levels[li], 1 << 20);
        auto contains = [&](const Perm& p) {
            return std::binary_search(prev.begin(), prev.end(), p);
        };
        // previous level must be normal in this one
        for (const auto& g : cur)
            for (const auto& h : prev) {
                Perm ginv(chain.degree);
                for (u32 x = 0; x < chain.degree; ++x) ginv[g[x]] = x;
                if (!contains(compose(compose(g, h), ginv)))
                    throw std::domain_error("k_constant: chain member not normal");
            }
        // quotient abelian: commutators land in the previous level
        for (const auto& a : cur)
            for (const auto& b : cur) {
                Perm ainv(chain.degree), binv(chain.degree);
                for (u32 x = 0; x < chain.degree; ++x) { ainv[a[x]] = x; binv[b[x]] = x; }
                Perm comm = compose(compose(a, b), compose(ainv, binv));
                if (!contains(comm)) throw std::domain_error("k_constant: quotient not abelian");
            }
        // exponent of the quotient
        u64 e = 1;
        for (const auto& a : cur) {
            Perm pw = a;
            u64 o = 1;
            while (!contains(pw)) { pw = compose(pw, a); ++o; }
            e = std::lcm(e, o);
        }
        exps.push_back(e);
        k *= e;
        prev = std::move(cur);
    }
    if (exponents_out) *exponents_out = exps;
    return k;
}

SolvableChain solvable_chain_of_toric(const ToricSingularity& h1, std::size_t order_cap) {
    BigInt ord = h1.group_order();
    if (ord > BigInt(order_cap))
        throw CeilingExceededError("solvable_chain_of_toric: order cap", order_cap);
    // enumerate the subgroup of (Z/n)^3 and act on itself by translation
    u32 n = h1.modulus();
    std::vector<std::array<u32, 3>> elems{{0, 0, 0}};
    std::map<std::array<u32, 3>, u32> index{{{0, 0, 0}, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : h1.generators()) {
            std::array<u32, 3> x{(elems[i][0] + g[0]) % n, (elems[i][1] + g[1]) % n,
                                 (elems[i][2] + g[2]) % n};
            if (index.count(x)) continue;
            index[x] = u32(elems.size());
            elems.push_back(x);
        }
    SolvableChain chain;
    chain.degree = u32(elems.size());
    chain.levels.resize(2);
    for (const auto& g : h1.generators()) {
        Perm p(chain.degree);
        for (u32 i = 0; i < chain.degree; ++i) {
            std::array<u32, 3> x{(elems[i][0] + g[0]) % n, (elems[i][1] + g[1]) % n,
                                 (elems[i][2] + g[2]) % n};
            p[i] = index.at(x);
        }
        chain.levels[1].push_back(std::move(p));
    }
    return chain;
}

bool verify_klem(const ToricSingularity& h1, u32 k, u32 l, u32 N, u32 degree_cap) {
    u32 lo = k * l + N;
    if (degree_cap < lo) throw std::invalid_argument("verify_klem: cap below k*l+N");
    // maxparts[m] = largest number of nonzero invariant factors of m
    std::size_t side = degree_cap + 1;
    std::vector<u32> maxparts(side * side * side, 0);
    auto at = [&](u32 a, u32 b, u32 c) -> u32& {
        return maxparts[(std::size_t(a) * side + b) * side + c];
    };
    auto invariants = h1.semigroup_points(degree_cap);
    // process in increasing total degree
    std::sort(invariants.begin(), invariants.end(), [](const auto& x, const auto& y) {
        return x[0] + x[1] + x[2] < y[0] + y[1] + y[2];
    });
    for (const auto& m : invariants) {
        u32 best = 1;
        u32 mdeg = m[0] + m[1] + m[2];
        for (const auto& q : invariants) {
            if (q[0] + q[1] + q[2] >= mdeg) break;  // sorted by total degree
            if (q[0] > m[0] || q[1] > m[1] || q[2] > m[2]) continue;
            u32 rest = at(m[0] - q[0], m[1] - q[1], m[2] - q[2]);
            if (rest + 1 > best) best = rest + 1;
        }
        at(m[0], m[1], m[2]) = best;
    }
    for (const auto& m : invariants) {
        if (m[0] + m[1] + m[2] < lo) continue;
        if (at(m[0], m[1], m[2]) < l) return false;
    }
    return true;
}

}  // namespace siegel
