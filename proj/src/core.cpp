#include "siegel/core.hpp"

#include <ostream>
#include <algorithm>

namespace siegel {

std::vector<PrimePower> factorize(u32 n) {
    std::vector<PrimePower> out;
    u32 m = n;
    for (u32 p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            PrimePower pp{p, 0, 1};
            while (m % p == 0) { m /= p; pp.t++; pp.q *= p; }
            out.push_back(pp);
        }
    }
    if (m > 1) out.push_back(PrimePower{m, 1, m});
    return out;
}

bool is_prime_power(u32 n, u32* p_out, u32* t_out) {
    if (n < 2) return false;
    auto f = factorize(n);
    if (f.size() != 1) return false;
    if (p_out) *p_out = f[0].p;
    if (t_out) *t_out = f[0].t;
    return true;
}

u32 crt_combine(const std::vector<u32>& r, const std::vector<u32>& q) {
    u64 m = 1, x = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        // solve x' ≡ x (mod m), x' ≡ r[i] (mod q[i])
        u64 qi = q[i];
        u64 inv = mod_inverse(u32(m % qi), u32(qi));
        u64 diff = (u64(r[i]) + qi - x % qi) % qi;
        x = x + m * ((diff * inv) % qi);
        m *= qi;
        x %= m;
    }
    return u32(x);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    unsigned nt = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (count + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// ---- Vec4 ----

Vec4::Vec4(u32 modulus, std::array<i64, 4> coords) : n(modulus) {
    check_level(modulus);
    for (int i = 0; i < 4; ++i) {
        i64 r = coords[std::size_t(i)] % i64(modulus);
        if (r < 0) r += modulus;
        c[std::size_t(i)] = u32(r);
    }
}

Vec4 Vec4::basis(u32 n, int i) {
    Vec4 v; v.n = n; v.c = {0,0,0,0}; v.c[std::size_t(i)] = 1 % n;
    return v;
}

Vec4 Vec4::operator+(const Vec4& o) const {
    if (n != o.n) throw LevelMismatchError("vector modulus mismatch");
    Vec4 r; r.n = n;
    for (int i = 0; i < 4; ++i) r.c[std::size_t(i)] = (c[std::size_t(i)] + o.c[std::size_t(i)]) % n;
    return r;
}

Vec4 Vec4::operator-(const Vec4& o) const {
    if (n != o.n) throw LevelMismatchError("vector modulus mismatch");
    Vec4 r; r.n = n;
    for (int i = 0; i < 4; ++i) r.c[std::size_t(i)] = (c[std::size_t(i)] + n - o.c[std::size_t(i)]) % n;
    return r;
}

Vec4 Vec4::operator-() const {
    Vec4 r; r.n = n;
    for (int i = 0; i < 4; ++i) r.c[std::size_t(i)] = (n - c[std::size_t(i)]) % n;
    return r;
}

Vec4 Vec4::scaled(u32 s) const {
    Vec4 r; r.n = n;
    for (int i = 0; i < 4; ++i) r.c[std::size_t(i)] = u32((u64(c[std::size_t(i)]) * s) % n);
    return r;
}

Vec4 Vec4::decode(u32 n, u32 key) {
    Vec4 v; v.n = n;
    v.c = {key & 0xff, (key >> 8) & 0xff, (key >> 16) & 0xff, (key >> 24) & 0xff};
    return v;
}

Vec4 Vec4::canonical_pm() const {
    Vec4 m = -*this;
    return (m.c < c) ? m : *this;
}

Residue skew_form(const Vec4& u, const Vec4& v) {
    if (u.n != v.n) throw LevelMismatchError("skew_form: modulus mismatch");
    u64 n = u.n;
    u64 pos = (u64(u.c[0]) * v.c[2] + u64(u.c[1]) * v.c[3]) % n;
    u64 neg = (u64(u.c[2]) * v.c[0] + u64(u.c[3]) * v.c[1]) % n;
    return Residue(i64((pos + n - neg) % n), u.n);
}

// ---- Mat4 ----

Mat4::Mat4(u32 modulus, std::array<i64, 16> entries) : n(modulus) {
    check_level(modulus);
    for (int i = 0; i < 16; ++i) {
        i64 r = entries[std::size_t(i)] % i64(modulus);
        if (r < 0) r += modulus;
        e[std::size_t(i)] = u32(r);
    }
}

Mat4 Mat4::identity(u32 n) {
    Mat4 m; m.n = n; m.e.fill(0);
    for (int i = 0; i < 4; ++i) m.e[std::size_t(i) * 5] = 1 % n;
    return m;
}

Mat4 Mat4::zero(u32 n) {
    Mat4 m; m.n = n; m.e.fill(0);
    return m;
}

Mat4 Mat4::operator*(const Mat4& o) const {
    if (n != o.n) throw LevelMismatchError("matrix modulus mismatch");
    Mat4 r; r.n = n;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            u64 s = 0;
            for (int k = 0; k < 4; ++k) s += u64(at(i, k)) * o.at(k, j);
            r.e[std::size_t(i) * 4 + std::size_t(j)] = u32(s % n);
        }
    return r;
}

Vec4 Mat4::operator*(const Vec4& v) const {
    if (n != v.n) throw LevelMismatchError("matrix/vector modulus mismatch");
    Vec4 r; r.n = n;
    for (int i = 0; i < 4; ++i) {
        u64 s = 0;
        for (int k = 0; k < 4; ++k) s += u64(at(i, k)) * v.c[std::size_t(k)];
        r.c[std::size_t(i)] = u32(s % n);
    }
    return r;
}

Mat4 Mat4::operator-() const {
    Mat4 r; r.n = n;
    for (int i = 0; i < 16; ++i) r.e[std::size_t(i)] = (n - e[std::size_t(i)]) % n;
    return r;
}

Mat4 Mat4::transpose() const {
    Mat4 r; r.n = n;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.e[std::size_t(i) * 4 + std::size_t(j)] = at(j, i);
    return r;
}

bool Mat4::is_identity() const { return *this == identity(n); }

namespace {
// J for <x,y> = x^t J y with the spec's form
const std::array<i64, 16> kJ = {0,0,1,0, 0,0,0,1, -1,0,0,0, 0,-1,0,0};
}

bool Mat4::is_symplectic() const {
    Mat4 J(n, kJ);
    return transpose() * J * (*this) == J;
}

Mat4 Mat4::symplectic_inverse() const {
    // M^-1 = J^-1 M^t J = -J M^t J for symplectic M
    Mat4 J(n, kJ);
    Mat4 r = -(J * transpose() * J);
    if (!((*this) * r).is_identity()) throw std::domain_error("symplectic_inverse: matrix not symplectic");
    return r;
}

u32 Mat4::det() const {
    // cofactor expansion with exact 64-bit intermediates (entries < 256)
    auto m3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) -> i64 {
        auto a = [&](int r, int c) { return i64(at(r, c)); };
        return a(r0,c0)*(a(r1,c1)*a(r2,c2) - a(r1,c2)*a(r2,c1))
             - a(r0,c1)*(a(r1,c0)*a(r2,c2) - a(r1,c2)*a(r2,c0))
             + a(r0,c2)*(a(r1,c0)*a(r2,c1) - a(r1,c1)*a(r2,c0));
    };
    i64 d = i64(at(0,0)) * m3(1,2,3, 1,2,3)
          - i64(at(0,1)) * m3(1,2,3, 0,2,3)
          + i64(at(0,2)) * m3(1,2,3, 0,1,3)
          - i64(at(0,3)) * m3(1,2,3, 0,1,2);
    i64 r = d % i64(n);
    if (r < 0) r += n;
    return u32(r);
}

Mat4 Mat4::inverse() const {
    u32 d = det();
    u32 dinv = mod_inverse(d, n);  // throws if inverse does not exist
    Mat4 adj; adj.n = n;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            int rr[3], cc[3], ri = 0, ci = 0;
            for (int k = 0; k < 4; ++k) { if (k != i) rr[ri++] = k; if (k != j) cc[ci++] = k; }
            auto a = [&](int r, int c) { return i64(at(rr[r], cc[c])); };
            i64 m3 = a(0,0)*(a(1,1)*a(2,2) - a(1,2)*a(2,1))
                   - a(0,1)*(a(1,0)*a(2,2) - a(1,2)*a(2,0))
                   + a(0,2)*(a(1,0)*a(2,1) - a(1,1)*a(2,0));
            if ((i + j) % 2) m3 = -m3;
            i64 v = (m3 % i64(n) + i64(n)) % i64(n);
            adj.e[std::size_t(j) * 4 + std::size_t(i)] = u32((u64(v) * dinv) % n);  // transposed cofactor
        }
    }
    return adj;
}

Mat4::Key Mat4::key() const {
    Key k;
    for (int i = 0; i < 8; ++i) k.a |= u64(e[std::size_t(i)]) << (8 * i);
    for (int i = 0; i < 8; ++i) k.b |= u64(e[std::size_t(i) + 8]) << (8 * i);
    return k;
}

Mat4 Mat4::canonical_pm() const {
    Mat4 m = -*this;
    return (m.e < e) ? m : *this;
}

bool is_symplectic(const std::array<i64, 16>& entries, u32 n) {
    return Mat4(n, entries).is_symplectic();
}

Mat4 transvection(const Vec4& v, u32 alpha) {
    if (!v.is_primitive())
        throw std::domain_error("transvection: vector is not primitive");
    u32 n = v.n;
    Mat4 r = Mat4::identity(n);
    // column j of the correction is alpha <v, e_j> v
    for (int j = 0; j < 4; ++j) {
        Residue coef = Residue(i64(alpha), n) * skew_form(v, Vec4::basis(n, j));
        for (int i = 0; i < 4; ++i) {
            u64 add = u64(coef.value()) * v.c[std::size_t(i)];
            r.e[std::size_t(i) * 4 + std::size_t(j)] = u32((r.at(i, j) + add) % n);
        }
    }
    return r;
}

PPowerFloor p_floor(const Rational& x, u32 p) {
    if (p < 2) throw std::invalid_argument("p_floor: p must be >= 2");
    if (x < 1) throw std::domain_error("p_floor: x must be >= 1");
    PPowerFloor out{p, 0, BigInt(1)};
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    // largest e with p^e * den <= num
    BigInt pw = 1;
    while (pw * p * den <= num) { pw *= p; out.exponent++; }
    out.value = pw;
    return out;
}

std::ostream& operator<<(std::ostream& os, const Vec4& v) {
    os << "(" << v.c[0] << "," << v.c[1] << "," << v.c[2] << "," << v.c[3] << ")";
    return os;
}

std::ostream& operator<<(std::ostream& os, const Mat4& m) {
    os << "[";
    for (int i = 0; i < 4; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < 4; ++j) os << (j ? "," : "") << m.at(i, j);
    }
    os << "] mod " << m.n;
    return os;
}

}  // namespace siegel
