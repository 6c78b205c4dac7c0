#pragma once

#include <array>
#include <compare>
#include <iosfwd>

#include "siegel/common.hpp"

namespace siegel {

// An element of Z/nZ.  Arithmetic goes through 64-bit intermediates; the
// modulus cap keeps everything overflow-free.
class Residue {
public:
    Residue() : v_(0), n_(1) {}
    Residue(i64 value, u32 modulus) : n_(modulus) {
        check_level(modulus);
        i64 r = value % i64(modulus);
        if (r < 0) r += modulus;
        v_ = u32(r);
    }
    u32 value() const { return v_; }
    u32 modulus() const { return n_; }
    bool is_unit() const { return siegel::is_unit(v_, n_); }
    Residue inverse() const { return raw(mod_inverse(v_, n_), n_); }

    friend Residue operator+(Residue a, Residue b) { a.match(b); return raw(u32((u64(a.v_) + b.v_) % a.n_), a.n_); }
    friend Residue operator-(Residue a, Residue b) { a.match(b); return raw(u32((u64(a.v_) + a.n_ - b.v_) % a.n_), a.n_); }
    friend Residue operator*(Residue a, Residue b) { a.match(b); return raw(u32((u64(a.v_) * b.v_) % a.n_), a.n_); }
    Residue operator-() const { return raw((n_ - v_) % n_, n_); }
    friend bool operator==(const Residue& a, const Residue& b) { return a.v_ == b.v_ && a.n_ == b.n_; }

private:
    static Residue raw(u32 v, u32 n) { Residue r; r.v_ = v; r.n_ = n; return r; }
    void match(const Residue& o) const {
        if (n_ != o.n_) throw LevelMismatchError("residue modulus mismatch");
    }
    u32 v_;
    u32 n_;
};

// Column vector in V = (Z/nZ)^4.
struct Vec4 {
    u32 n = 1;
    std::array<u32, 4> c{0, 0, 0, 0};

    Vec4() = default;
    Vec4(u32 modulus, std::array<i64, 4> coords);
    static Vec4 basis(u32 n, int i);

    u32 operator[](int i) const { return c[std::size_t(i)]; }
    friend bool operator==(const Vec4&, const Vec4&) = default;
    auto operator<=>(const Vec4& o) const { return c <=> o.c; }

    Vec4 operator+(const Vec4& o) const;
    Vec4 operator-(const Vec4& o) const;
    Vec4 operator-() const;
    Vec4 scaled(u32 s) const;
    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }

    // order of the vector in the group V; "primitive" means order exactly n
    u32 order() const { return n / u32(gcd_u64(gcd_u64(gcd_u64(c[0], c[1]), gcd_u64(c[2], c[3])), n)); }
    bool is_primitive() const { return order() == n; }

    // dense encoding, unique for n <= 255
    u32 encode() const { return c[0] | (c[1] << 8) | (c[2] << 16) | (u32(c[3]) << 24); }
    static Vec4 decode(u32 n, u32 key);

    // lexicographically minimal of {v, -v}
    Vec4 canonical_pm() const;
};

// <x,y> = x1 y3 + x2 y4 - x3 y1 - x4 y2
Residue skew_form(const Vec4& u, const Vec4& v);

// 4x4 matrix over Z/nZ (row-major).
struct Mat4 {
    u32 n = 1;
    std::array<u32, 16> e{};

    Mat4() = default;
    Mat4(u32 modulus, std::array<i64, 16> entries);
    static Mat4 identity(u32 n);
    static Mat4 zero(u32 n);

    u32 at(int r, int c) const { return e[std::size_t(r) * 4 + std::size_t(c)]; }
    void set(int r, int c, i64 v) {
        i64 x = v % i64(n); if (x < 0) x += n;
        e[std::size_t(r) * 4 + std::size_t(c)] = u32(x);
    }

    friend bool operator==(const Mat4&, const Mat4&) = default;
    auto operator<=>(const Mat4& o) const { return e <=> o.e; }

    Mat4 operator*(const Mat4& o) const;
    Vec4 operator*(const Vec4& v) const;
    Mat4 operator-() const;
    Mat4 transpose() const;
    bool is_identity() const;

    bool is_symplectic() const;
    // inverse of a symplectic matrix via -J M^t J; throws if not symplectic
    Mat4 symplectic_inverse() const;
    // general inverse via adjugate; throws if det is not a unit
    Mat4 inverse() const;
    u32 det() const;

    struct Key {
        u64 a = 0, b = 0;
        friend bool operator==(const Key&, const Key&) = default;
        auto operator<=>(const Key&) const = default;
    };
    Key key() const;

    // lexicographically minimal of {g, -g} on the flattened entries
    Mat4 canonical_pm() const;
};

struct Mat4KeyHash {
    std::size_t operator()(const Mat4::Key& k) const {
        u64 h = k.a * 0x9e3779b97f4a7c15ULL;
        h ^= (k.b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        return std::size_t(h);
    }
};

// true iff the three symplectic block relations hold mod n for the given
// integer matrix (entries arbitrary, reduced mod n)
bool is_symplectic(const std::array<i64, 16>& entries, u32 n);

// r_{v,alpha}: w -> w + alpha <v,w> v.  Requires v primitive.
Mat4 transvection(const Vec4& v, u32 alpha);

// An element of Sp(4,Z/nZ)/{±1}: canonical representative under g ~ -g.
struct PElement {
    Mat4 rep;
    PElement() = default;
    explicit PElement(const Mat4& g) : rep(g.canonical_pm()) {}
    friend bool operator==(const PElement&, const PElement&) = default;
    auto operator<=>(const PElement& o) const { return rep <=> o.rep; }
    Mat4::Key key() const { return rep.key(); }
};

// largest p^t <= x (t >= 0) for rational x >= 1
struct PPowerFloor {
    u32 p;
    u32 exponent;
    BigInt value;
};
PPowerFloor p_floor(const Rational& x, u32 p);

std::ostream& operator<<(std::ostream&, const Vec4&);
std::ostream& operator<<(std::ostream&, const Mat4&);

}  // namespace siegel
