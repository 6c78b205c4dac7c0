#include "siegel/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace siegel {

namespace {

// exact division of integer polynomials (quotient known integral)
std::vector<BigInt> poly_div_exact(std::vector<BigInt> num, const std::vector<BigInt>& den) {
    std::vector<BigInt> q(num.size() - den.size() + 1, 0);
    for (std::size_t i = q.size(); i-- > 0;) {
        BigInt c = num[i + den.size() - 1] / den.back();
        q[i] = c;
        for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    for (const auto& r : num)
        if (r != 0) throw std::logic_error("cyclotomic division not exact");
    return q;
}

std::vector<BigInt> cyclotomic_poly(u32 m) {
    // x^m - 1 divided by the cyclotomic polynomials of the proper divisors
    std::vector<BigInt> poly(m + 1, 0);
    poly[0] = -1;
    poly[m] = 1;
    for (u32 d = 1; d < m; ++d)
        if (m % d == 0) poly = poly_div_exact(poly, cyclotomic_poly(d));
    return poly;
}

}  // namespace

std::shared_ptr<const CycloField> CycloField::get(u32 m) {
    static std::mutex mu;
    static std::map<u32, std::shared_ptr<const CycloField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto f = std::shared_ptr<const CycloField>(new CycloField(m));
    cache[m] = f;
    return f;
}

CycloField::CycloField(u32 m) : m_(m) {
    if (m < 1 || m > 120) throw std::invalid_argument("cyclotomic conductor out of range");
    minpoly_ = cyclotomic_poly(m);
    u32 deg = degree();
    // reduction table for x^k, k = deg .. 2 deg - 2
    std::vector<Rational> xk(deg, 0);
    for (u32 i = 0; i < deg; ++i) xk[i] = -Rational(minpoly_[i]);
    powers_.push_back(xk);
    for (u32 k = deg + 1; k <= 2 * deg - 2; ++k) {
        std::vector<Rational> next(deg, 0);
        const auto& prev = powers_.back();
        for (u32 i = 0; i + 1 < deg; ++i) next[i + 1] = prev[i];
        if (deg >= 1 && !(prev[deg - 1] == 0))
            for (u32 i = 0; i < deg; ++i) next[i] += prev[deg - 1] * powers_[0][i];
        powers_.push_back(next);
    }
}

Cyclo::Cyclo(std::shared_ptr<const CycloField> field, Rational value)
    : field_(std::move(field)), c_(field_->degree(), 0) {
    c_[0] = std::move(value);
}

Cyclo Cyclo::root_of_unity(std::shared_ptr<const CycloField> f, i64 k) {
    u32 m = f->conductor();
    i64 r = k % i64(m);
    if (r < 0) r += m;
    u32 deg = f->degree();
    std::vector<Rational> acc(deg, 0);
    acc[0] = 1;
    for (i64 i = 0; i < r; ++i) {
        std::vector<Rational> next(deg, 0);
        for (u32 j = 0; j + 1 < deg; ++j) next[j + 1] = acc[j];
        if (!(acc[deg - 1] == 0))
            for (u32 j = 0; j < deg; ++j) next[j] += acc[deg - 1] * f->powers_[0][j];
        acc = std::move(next);
    }
    Cyclo out = Cyclo::zero(std::move(f));
    out.c_ = std::move(acc);
    return out;
}

Cyclo Cyclo::root_of_order(std::shared_ptr<const CycloField> f, u32 d, i64 power) {
    if (d == 0 || f->conductor() % d != 0)
        throw std::invalid_argument("root_of_order: order does not divide the conductor");
    return root_of_unity(f, i64(f->conductor() / d) * power);
}

void Cyclo::match(const Cyclo& o) const {
    if (!field_ || !o.field_ || field_->conductor() != o.field_->conductor())
        throw std::invalid_argument("cyclotomic field mismatch");
}

bool Cyclo::is_zero() const {
    for (const auto& x : c_)
        if (!(x == 0)) return false;
    return true;
}

bool Cyclo::is_rational(Rational* out) const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (!(c_[i] == 0)) return false;
    if (out) *out = c_.empty() ? Rational(0) : c_[0];
    return true;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
    match(o);
    Cyclo r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

Cyclo Cyclo::operator-(const Cyclo& o) const {
    match(o);
    Cyclo r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
}

Cyclo Cyclo::operator-() const {
    Cyclo r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Cyclo Cyclo::operator*(const Cyclo& o) const {
    match(o);
    u32 deg = field_->degree();
    std::vector<Rational> prod(2 * deg - 1, 0);
    for (u32 i = 0; i < deg; ++i) {
        if (c_[i] == 0) continue;
        for (u32 j = 0; j < deg; ++j) {
            if (o.c_[j] == 0) continue;
            prod[i + j] += c_[i] * o.c_[j];
        }
    }
    Cyclo r = Cyclo::zero(field_);
    for (u32 i = 0; i < deg; ++i) r.c_[i] = prod[i];
    for (u32 k = deg; k <= 2 * deg - 2; ++k) {
        if (prod[k] == 0) continue;
        const auto& red = field_->powers_[k - deg];
        for (u32 i = 0; i < deg; ++i) r.c_[i] += prod[k] * red[i];
    }
    return r;
}

Cyclo Cyclo::inverse() const {
    if (is_zero()) throw std::domain_error("cyclotomic inverse of zero");
    u32 deg = field_->degree();
    // extended Euclid in Q[x] against the minimal polynomial; track only the
    // cofactor of this element
    std::vector<Rational> r0(deg + 1);
    for (u32 i = 0; i <= deg; ++i) r0[i] = Rational(field_->minimal_polynomial()[i]);
    std::vector<Rational> r1(c_.begin(), c_.end());
    std::vector<Rational> s0, s1{Rational(1)};
    auto deg_of = [](const std::vector<Rational>& p) {
        for (std::size_t i = p.size(); i-- > 0;)
            if (!(p[i] == 0)) return i64(i);
        return i64(-1);
    };
    auto trim = [](std::vector<Rational>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trim(r1);
    while (deg_of(r1) > 0) {
        std::vector<Rational> rem = r0;
        std::vector<Rational> q(std::size_t(deg_of(r0) - deg_of(r1) + 1), 0);
        i64 d1 = deg_of(r1);
        for (i64 i = deg_of(rem); i >= d1; --i) {
            if (rem[std::size_t(i)] == 0) continue;
            Rational coef = rem[std::size_t(i)] / r1[std::size_t(d1)];
            q[std::size_t(i - d1)] = coef;
            for (i64 j = 0; j <= d1; ++j) rem[std::size_t(i - d1 + j)] -= coef * r1[std::size_t(j)];
        }
        trim(rem);
        std::vector<Rational> s2 = s0;
        s2.resize(std::max(s2.size(), q.size() + s1.size()), 0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (std::size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
        }
        trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (deg_of(r1) != 0) throw std::logic_error("cyclotomic inverse: gcd has positive degree");
    Rational lead = r1[0];
    Cyclo out = Cyclo::zero(field_);
    for (std::size_t i = 0; i < s1.size() && i < out.c_.size(); ++i) out.c_[i] = s1[i] / lead;
    return out;
}

bool operator==(const Cyclo& a, const Cyclo& b) {
    a.match(b);
    return a.c_ == b.c_;
}

Cyclo Cyclo::pow(u64 e) const {
    Cyclo r = Cyclo::one(field_), base = *this;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

std::string Cyclo::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        os << c_[i];
        if (i >= 1) os << "*z" << (i > 1 ? "^" + std::to_string(i) : "");
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace siegel
