#include "siegel/modlinalg.hpp"

#include <algorithm>
#include <map>

namespace siegel {

namespace {

u32 modded(i64 x, u32 n) {
    i64 r = x % i64(n);
    if (r < 0) r += n;
    return u32(r);
}

// unit u with u*a ≡ gcd(a,n) (mod n)
u32 unit_normalizer(u32 a, u32 n) {
    u32 d = u32(gcd_u64(a, n));
    if (d == 0) return 1;
    u32 ap = (a / d) % (n / d);
    u32 u0 = (n / d == 1) ? 0 : mod_inverse(ap, n / d);
    for (u32 k = 0;; ++k) {
        u32 cand = u32((u0 + u64(k) * (n / d)) % n);
        if (cand != 0 && is_unit(cand, n)) return cand;
        if (k > n) throw std::logic_error("unit_normalizer failed");
    }
}

void row_axpy(Row& dst, const Row& src, u32 coef, u32 n) {
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = u32((dst[i] + u64(coef) * src[i]) % n);
}

Row row_scale(const Row& r, u32 coef, u32 n) {
    Row out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = u32((u64(coef) * r[i]) % n);
    return out;
}

bool row_is_zero(const Row& r) {
    return std::all_of(r.begin(), r.end(), [](u32 x) { return x == 0; });
}

}  // namespace

std::vector<Row> howell(std::vector<Row> rows, u32 n, std::size_t width) {
    std::vector<Row> done;
    std::vector<Row> pending = std::move(rows);
    for (auto& r : pending)
        for (auto& x : r) x %= n;

    for (std::size_t col = 0; col < width; ++col) {
        // combine all pending rows with nonzero entry in this column into one
        std::optional<Row> pivot;
        std::vector<Row> rest;
        for (auto& r : pending) {
            if (row_is_zero(r)) continue;
            if (r[col] == 0) { rest.push_back(std::move(r)); continue; }
            if (!pivot) { pivot = std::move(r); continue; }
            // unimodular 2x2 transform bringing gcd into the pivot row
            i64 x, y;
            i64 g = egcd(i64((*pivot)[col]), i64(r[col]), x, y);
            u32 a = (*pivot)[col] / u32(g), b = r[col] / u32(g);
            Row new_pivot = row_scale(*pivot, modded(x, n), n);
            row_axpy(new_pivot, r, modded(y, n), n);
            Row new_other = row_scale(*pivot, (n - b % n) % n, n);
            row_axpy(new_other, r, a % n, n);
            *pivot = std::move(new_pivot);
            if (!row_is_zero(new_other)) rest.push_back(std::move(new_other));
        }
        pending = std::move(rest);
        if (!pivot) continue;
        // normalize pivot entry to gcd(entry, n)
        u32 d = u32(gcd_u64((*pivot)[col], n));
        *pivot = row_scale(*pivot, unit_normalizer((*pivot)[col], n), n);
        // Howell closure: the annihilator multiple lives in later columns
        if (d > 1) {
            Row extra = row_scale(*pivot, n / d, n);
            if (!row_is_zero(extra)) pending.push_back(std::move(extra));
        }
        // reduce earlier rows' entries in this column mod d
        for (auto& r : done) {
            u32 q = r[col] / d;
            if (q) row_axpy(r, *pivot, n - u32((u64(q) * 1) % n), n);
        }
        done.push_back(std::move(*pivot));
    }
    return done;
}

std::string span_key(const std::vector<Row>& rows, u32 n, std::size_t width) {
    auto h = howell(rows, n, width);
    std::string key;
    key.reserve(h.size() * width);
    for (const auto& r : h)
        for (u32 x : r) key.push_back(char(u8(x)));
    return key;
}

bool span_contains(const std::vector<Row>& hw, Row v, u32 n) {
    for (auto& x : v) x %= n;
    std::size_t width = v.size();
    for (const auto& r : hw) {
        std::size_t col = 0;
        while (col < width && r[col] == 0) ++col;
        if (col == width) continue;
        u32 d = r[col];  // canonical pivot divides n
        if (v[col] % d) return false;
        u32 q = v[col] / d;
        if (q) row_axpy(v, r, (n - q % n) % n, n);
    }
    return row_is_zero(v);
}

std::vector<Vec4> span_elements(const Vec4& u1, const Vec4& u2) {
    u32 n = u1.n;
    std::vector<u32> keys;
    keys.reserve(std::size_t(n) * n);
    for (u32 a = 0; a < n; ++a) {
        Vec4 base = u1.scaled(a);
        for (u32 b = 0; b < n; ++b) keys.push_back((base + u2.scaled(b)).encode());
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<Vec4> out;
    out.reserve(keys.size());
    for (u32 k : keys) out.push_back(Vec4::decode(n, k));
    return out;
}

bool is_free_pair(const Vec4& u1, const Vec4& u2) {
    if (u1.n != u2.n) throw LevelMismatchError("is_free_pair: modulus mismatch");
    u32 n = u1.n;
    // free of rank 2 iff the 2x2 minors generate the unit ideal
    u64 g = n;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            i64 m = i64(u1[i]) * u2[j] - i64(u1[j]) * u2[i];
            g = gcd_u64(g, modded(m, n));
            if (g == 1) return true;
        }
    return g == 1;
}

std::pair<u32, u32> solve_pair_coeffs(const Vec4& u1, const Vec4& u2, const Vec4& w) {
    u32 n = u1.n;
    auto primes = factorize(n);
    std::vector<u32> res_a, res_b, mods;
    for (const auto& pp : primes) {
        u32 q = pp.q, p = pp.p;
        // find coordinate pair (i,j) whose minor is a unit mod p
        int pi = -1, pj = -1;
        for (int i = 0; i < 4 && pi < 0; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                i64 m = i64(u1[i]) * u2[j] - i64(u1[j]) * u2[i];
                if (modded(m, p) != 0) { pi = i; pj = j; break; }
            }
        if (pi < 0) throw std::domain_error("solve_pair_coeffs: pair not free at p=" + std::to_string(p));
        // solve [u1[i] u2[i]; u1[j] u2[j]] (a,b)^t = (w[i], w[j])^t mod q
        i64 det = i64(u1[pi]) * u2[pj] - i64(u2[pi]) * u1[pj];
        u32 dinv = mod_inverse(modded(det, q), q);
        u32 a = u32(u64(modded(i64(u2[pj]) * w[pi] - i64(u2[pi]) * w[pj], q)) * dinv % q);
        u32 b = u32(u64(modded(i64(u1[pi]) * w[pj] - i64(u1[pj]) * w[pi], q)) * dinv % q);
        res_a.push_back(a); res_b.push_back(b); mods.push_back(q);
    }
    u32 a = crt_combine(res_a, mods), b = crt_combine(res_b, mods);
    if (!(u1.scaled(a) + u2.scaled(b) == w))
        throw std::domain_error("solve_pair_coeffs: vector not in span");
    return {a, b};
}

std::pair<Vec4, Vec4> lex_min_basis(const Vec4& u1, const Vec4& u2) {
    auto elems = span_elements(u1, u2);
    const Vec4* w1 = nullptr;
    for (const auto& v : elems)
        if (!v.is_zero() && v.is_primitive()) { w1 = &v; break; }
    if (!w1) throw std::domain_error("lex_min_basis: span has no primitive vector");
    for (const auto& v : elems) {
        if (v.is_zero()) continue;
        if (is_free_pair(*w1, v)) return {*w1, v};
    }
    throw std::domain_error("lex_min_basis: span not free of rank 2");
}

Mat4 symplectic_completion(const Vec4& va, const Vec4& vb) {
    u32 n = va.n;
    if (skew_form(va, vb).value() != 0)
        throw std::domain_error("symplectic_completion: pair not isotropic");
    auto primes = factorize(n);
    std::array<std::vector<u32>, 16> res;
    std::vector<u32> mods;
    for (const auto& pp : primes) {
        u32 q = pp.q, p = pp.p;
        auto red = [&](const Vec4& v) {
            return Vec4(q, {i64(v[0] % q), i64(v[1] % q), i64(v[2] % q), i64(v[3] % q)});
        };
        Vec4 a = red(va), b = red(vb);
        auto sk = [&](const Vec4& x, const Vec4& y) { return skew_form(x, y).value(); };
        // u3 with <a,u3> = 1
        Vec4 u3;
        {
            int pick = -1;
            for (int i = 0; i < 4; ++i)
                if (sk(a, Vec4::basis(q, i)) % p != 0) { pick = i; break; }
            if (pick < 0) throw std::domain_error("symplectic_completion: va not primitive mod p");
            u3 = Vec4::basis(q, pick).scaled(mod_inverse(sk(a, Vec4::basis(q, pick)), q));
        }
        // vhat = b + <u3,b> a  lies in span(a,u3)-perp
        Vec4 vhat = b + a.scaled(sk(u3, b));
        // projection into P = {w : <a,w> = <u3,w> = 0}
        auto proj = [&](const Vec4& w) {
            return w + a.scaled(sk(u3, w)) - u3.scaled(sk(a, w));
        };
        Vec4 u4;
        {
            int pick = -1;
            for (int i = 0; i < 4; ++i)
                if (sk(vhat, proj(Vec4::basis(q, i))) % p != 0) { pick = i; break; }
            if (pick < 0) throw std::domain_error("symplectic_completion: vb not free mod p");
            Vec4 w = proj(Vec4::basis(q, pick));
            u4 = w.scaled(mod_inverse(sk(vhat, w), q));
        }
        // correct u3 to pair only with va
        Vec4 u3f = u3 - u4.scaled(sk(b, u3));
        Mat4 g = Mat4::zero(q);
        for (int i = 0; i < 4; ++i) {
            g.set(i, 0, a[i]); g.set(i, 1, b[i]); g.set(i, 2, u3f[i]); g.set(i, 3, u4[i]);
        }
        if (!g.is_symplectic()) throw std::logic_error("symplectic_completion: local completion failed");
        for (int i = 0; i < 16; ++i) res[std::size_t(i)].push_back(g.e[std::size_t(i)]);
        mods.push_back(q);
    }
    Mat4 out = Mat4::zero(n);
    for (int i = 0; i < 16; ++i) out.e[std::size_t(i)] = crt_combine(res[std::size_t(i)], mods);
    if (!out.is_symplectic()) throw std::logic_error("symplectic_completion: CRT recombination not symplectic");
    return out;
}

std::pair<Vec4, Vec4> orthogonal_complement(const Vec4& w1, const Vec4& w2) {
    u32 n = w1.n;
    u32 c = skew_form(w1, w2).value();
    u32 cinv = mod_inverse(c, n);
    auto proj = [&](const Vec4& u) {
        u32 bcoef = u32(u64(skew_form(w1, u).value()) * cinv % n);
        u32 acoef = u32(u64((n - skew_form(w2, u).value() % n) % n) * cinv % n);
        return u - w1.scaled(acoef) - w2.scaled(bcoef);
    };
    std::array<Vec4, 4> pr;
    for (int i = 0; i < 4; ++i) pr[std::size_t(i)] = proj(Vec4::basis(n, i));

    auto primes = factorize(n);
    std::array<std::vector<u32>, 8> res;
    std::vector<u32> mods;
    for (const auto& pp : primes) {
        int bi = -1, bj = -1;
        for (int i = 0; i < 4 && bi < 0; ++i)
            for (int j = i + 1; j < 4; ++j) {
                // independence mod p via some 2x2 minor
                bool indep = false;
                for (int r = 0; r < 4 && !indep; ++r)
                    for (int s = r + 1; s < 4; ++s) {
                        i64 m = i64(pr[std::size_t(i)][r]) * pr[std::size_t(j)][s] -
                                i64(pr[std::size_t(i)][s]) * pr[std::size_t(j)][r];
                        if (modded(m, pp.p) != 0) { indep = true; break; }
                    }
                if (indep) { bi = i; bj = j; break; }
            }
        if (bi < 0) throw std::domain_error("orthogonal_complement: complement not free");
        for (int k = 0; k < 4; ++k) {
            res[std::size_t(k)].push_back(pr[std::size_t(bi)][k] % pp.q);
            res[std::size_t(k) + 4].push_back(pr[std::size_t(bj)][k] % pp.q);
        }
        mods.push_back(pp.q);
    }
    Vec4 b1, b2; b1.n = n; b2.n = n;
    for (int k = 0; k < 4; ++k) {
        b1.c[std::size_t(k)] = crt_combine(res[std::size_t(k)], mods);
        b2.c[std::size_t(k)] = crt_combine(res[std::size_t(k) + 4], mods);
    }
    return {b1, b2};
}

}  // namespace siegel
