#pragma once

#include <memory>
#include <string>
#include <vector>

#include "siegel/common.hpp"

namespace siegel {

// Exact arithmetic in Q(zeta_m): rational-coefficient polynomials reduced
// modulo the m-th cyclotomic polynomial.  Everything the quartic analysis
// needs (theta = zeta_5, i = zeta_4, cube roots for the proportionality
// factors) lives in small m.

class CycloField : public std::enable_shared_from_this<CycloField> {
public:
    static std::shared_ptr<const CycloField> get(u32 m);  // cached per conductor

    u32 conductor() const { return m_; }
    u32 degree() const { return u32(minpoly_.size() - 1); }
    const std::vector<BigInt>& minimal_polynomial() const { return minpoly_; }

private:
    explicit CycloField(u32 m);
    friend class Cyclo;
    u32 m_;
    std::vector<BigInt> minpoly_;                  // monic, degree phi(m)
    std::vector<std::vector<Rational>> powers_;    // x^(deg..2deg-2) reduced
};

class Cyclo {
public:
    Cyclo() = default;
    Cyclo(std::shared_ptr<const CycloField> field, Rational value);
    static Cyclo zero(std::shared_ptr<const CycloField> f) { return Cyclo(std::move(f), 0); }
    static Cyclo one(std::shared_ptr<const CycloField> f) { return Cyclo(std::move(f), 1); }
    // zeta_m^k
    static Cyclo root_of_unity(std::shared_ptr<const CycloField> f, i64 k);
    // zeta_d for d | m
    static Cyclo root_of_order(std::shared_ptr<const CycloField> f, u32 d, i64 power = 1);

    const std::shared_ptr<const CycloField>& field() const { return field_; }
    bool is_zero() const;
    bool is_rational(Rational* out = nullptr) const;

    Cyclo operator+(const Cyclo& o) const;
    Cyclo operator-(const Cyclo& o) const;
    Cyclo operator*(const Cyclo& o) const;
    Cyclo operator-() const;
    Cyclo inverse() const;  // throws on zero
    Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
    Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
    Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }
    friend bool operator==(const Cyclo& a, const Cyclo& b);

    Cyclo pow(u64 e) const;
    std::string str() const;  // polynomial in z

    const std::vector<Rational>& coeffs() const { return c_; }

private:
    void match(const Cyclo& o) const;
    std::shared_ptr<const CycloField> field_;
    std::vector<Rational> c_;
};

}  // namespace siegel
