#include "siegel/atlas.hpp"

#include <algorithm>
#include <deque>

#include "siegel/subgroup.hpp"

namespace siegel {

namespace {

Row to_row(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

u64 line_key(const Vec4& a, const Vec4& b) {
    u32 x = a.encode(), y = b.encode();
    if (x > y) std::swap(x, y);
    return (u64(x) << 32) | y;
}

}  // namespace

Atlas::Atlas(u32 n) : n_(n) {
    check_level(n);
    if (n < 3) throw std::invalid_argument("atlas requires level >= 3");
    build_divisors();
    build_planes_and_cusps();
    build_epairs();
    build_fdivisors();
    build_lines_and_triples();
}

void Atlas::build_divisors() {
    u64 total = u64(n_) * n_ * n_ * n_;
    for (u64 k = 0; k < total; ++k) {
        Vec4 v(n_, {i64(k % n_), i64(k / n_ % n_), i64(k / (u64(n_) * n_) % n_),
                    i64(k / (u64(n_) * n_ * n_))});
        if (!v.is_primitive()) continue;
        if (!(v.canonical_pm() == v)) continue;
        divisor_by_enc_[v.encode()] = u32(divisors_.size());
        divisors_.push_back(DivisorD{v});
    }
}

namespace {

inline u64 dense_index(const Vec4& v) {
    u64 n = v.n;
    return v[0] + n * (v[1] + n * (v[2] + n * u64(v[3])));
}

// mark every second generator of span(v,w) through v: s*w + t*v, s a unit
void mark_plane_through(const Vec4& v, const Vec4& w, std::vector<u8>& seen) {
    u32 n = v.n;
    for (u32 s = 1; s < n; ++s) {
        if (!is_unit(s, n)) continue;
        Vec4 sw = w.scaled(s);
        for (u32 t = 0; t < n; ++t) seen[dense_index(sw + v.scaled(t))] = 1;
    }
}

}  // namespace

void Atlas::build_planes_and_cusps() {
    u64 total = u64(n_) * n_ * n_ * n_;
    std::vector<u8> seen(total);
    for (const auto& d : divisors_) {
        const Vec4& v = d.v;
        std::fill(seen.begin(), seen.end(), u8(0));
        for (u64 k = 0; k < total; ++k) {
            if (seen[k]) continue;
            Vec4 w(n_, {i64(k % n_), i64(k / n_ % n_), i64(k / (u64(n_) * n_) % n_),
                        i64(k / (u64(n_) * n_ * n_))});
            if (skew_form(v, w).value() != 0) continue;
            if (!is_free_pair(v, w)) continue;
            mark_plane_through(v, w, seen);
            std::string key = span_key({to_row(v), to_row(w)}, n_, 4);
            if (plane_by_key_.count(key)) continue;
            auto [b1, b2] = lex_min_basis(v, w);
            IsotropicPlane pl{b1, b2, howell({to_row(b1), to_row(b2)}, n_, 4), key};
            plane_by_key_[key] = u32(planes_.size());
            planes_.push_back(std::move(pl));
        }
    }
    // stable order: sort planes by key, rebuild index
    std::sort(planes_.begin(), planes_.end(),
              [](const IsotropicPlane& a, const IsotropicPlane& b) { return a.key < b.key; });
    plane_by_key_.clear();
    for (u32 i = 0; i < planes_.size(); ++i) plane_by_key_[planes_[i].key] = i;

    for (u32 c = 1; c <= n_ / 2; ++c)
        if (is_unit(c, n_)) cusp_fvalues_.push_back(c);
    for (u32 p = 0; p < planes_.size(); ++p)
        for (u32 fi = 0; fi < cusp_fvalues_.size(); ++fi)
            cusps_.push_back(CuspPoint{p, cusp_fvalues_[fi]});
}

void Atlas::build_epairs() {
    u64 total = u64(n_) * n_ * n_ * n_;
    std::vector<u8> seen(total);
    for (const auto& d : divisors_) {
        const Vec4& v = d.v;
        std::fill(seen.begin(), seen.end(), u8(0));
        for (u64 k = 0; k < total; ++k) {
            if (seen[k]) continue;
            Vec4 w(n_, {i64(k % n_), i64(k / n_ % n_), i64(k / (u64(n_) * n_) % n_),
                        i64(k / (u64(n_) * n_ * n_))});
            if (!is_unit(skew_form(v, w).value(), n_)) continue;
            mark_plane_through(v, w, seen);
            std::string key1 = span_key({to_row(v), to_row(w)}, n_, 4);
            if (seen_w1_.count(key1)) continue;
            seen_w1_.insert(key1);
            auto [c1, c2] = orthogonal_complement(v, w);
            std::string key2 = span_key({to_row(c1), to_row(c2)}, n_, 4);
            std::string pair_key = key1 < key2 ? key1 + "|" + key2 : key2 + "|" + key1;
            if (epair_by_key_.count(pair_key)) continue;
            auto [a1, a2] = lex_min_basis(v, w);
            auto [b1, b2] = lex_min_basis(c1, c2);
            DivisorE e;
            if (key1 < key2) e = DivisorE{a1, a2, b1, b2, key1, key2};
            else e = DivisorE{b1, b2, a1, a2, key2, key1};
            epair_by_key_[pair_key] = u32(epairs_.size());
            epairs_.push_back(std::move(e));
        }
    }
    seen_w1_.clear();
    std::sort(epairs_.begin(), epairs_.end(),
              [](const DivisorE& a, const DivisorE& b) { return a.key1 + a.key2 < b.key1 + b.key2; });
    epair_by_key_.clear();
    for (u32 i = 0; i < epairs_.size(); ++i)
        epair_by_key_[epairs_[i].key1 + "|" + epairs_[i].key2] = i;
}

void Atlas::build_fdivisors() {
    Mat4 psi0(n_, {0,1,0,0, 1,0,0,0, 0,0,0,1, 0,0,1,0});
    auto gens = sp4_generators(n_);
    std::vector<Mat4> gen_invs;
    for (const auto& g : gens) gen_invs.push_back(g.symplectic_inverse());
    std::deque<PElement> frontier{PElement(psi0)};
    f_by_key_[frontier.front().key()] = 0;
    std::vector<PElement> found{frontier.front()};
    while (!frontier.empty()) {
        PElement x = frontier.front();
        frontier.pop_front();
        for (std::size_t s = 0; s < gens.size(); ++s) {
            PElement y(gens[s] * x.rep * gen_invs[s]);
            if (f_by_key_.count(y.key())) continue;
            f_by_key_[y.key()] = u32(found.size());
            found.push_back(y);
            frontier.push_back(y);
        }
    }
    std::sort(found.begin(), found.end());
    f_by_key_.clear();
    for (u32 i = 0; i < found.size(); ++i) f_by_key_[found[i].key()] = i;
    for (auto& p : found) fdivisors_.push_back(DivisorF{p});
}

void Atlas::build_lines_and_triples() {
    lines_by_cusp_.resize(cusps_.size());
    triples_by_cusp_.resize(cusps_.size());
    for (u32 pi = 0; pi < planes_.size(); ++pi) {
        const auto& pl = planes_[pi];
        auto elems = span_elements(pl.w1, pl.w2);
        std::vector<Vec4> classes;
        for (const auto& v : elems)
            if (v.is_primitive() && v.canonical_pm() == v) classes.push_back(v);
        for (std::size_t i = 0; i < classes.size(); ++i) {
            for (std::size_t j = i + 1; j < classes.size(); ++j) {
                const Vec4 &va = classes[i], &vb = classes[j];
                if (!is_free_pair(va, vb)) continue;
                // the unique cusp over this pair has f(va,vb) = ±1
                auto [x1, y1] = solve_pair_coeffs(pl.w1, pl.w2, va);
                auto [x2, y2] = solve_pair_coeffs(pl.w1, pl.w2, vb);
                u32 det = u32((u64(x1) * y2 % n_ + u64(n_) - u64(y1) * x2 % n_) % n_);
                u32 f = mod_inverse(det, n_);
                f = std::min(f, n_ - f);
                LineLD line{va, vb, cusp_index(pi, f)};
                line_by_key_[line_key(va, vb)] = u32(lines_.size());
                lines_by_cusp_[line.cusp].push_back(u32(lines_.size()));
                lines_.push_back(line);
                // triple candidates: ±(va+vb) and ±(va-vb) when primitive
                for (int sgn = 0; sgn < 2; ++sgn) {
                    Vec4 w = sgn ? va - vb : va + vb;
                    if (!w.is_primitive()) continue;
                    Vec4 wc = w.canonical_pm();
                    std::array<u32, 3> enc{va.encode(), vb.encode(), wc.encode()};
                    std::sort(enc.begin(), enc.end());
                    TripleKey tk{(u64(enc[0]) << 32) | enc[1], enc[2]};
                    if (triple_by_key_.count(tk)) continue;
                    // representatives with zero sum: (va, ±vb, -(va ± vb))
                    TriplePoint tp{va, sgn ? -vb : vb, -w, cusp_index(pi, f)};
                    triple_by_key_[tk] = u32(triples_.size());
                    triples_by_cusp_[tp.cusp].push_back(u32(triples_.size()));
                    triples_.push_back(tp);
                }
            }
        }
    }
}

u32 Atlas::divisor_index(const Vec4& v) const {
    auto it = divisor_by_enc_.find(v.canonical_pm().encode());
    if (it == divisor_by_enc_.end()) throw std::domain_error("divisor_index: not a primitive vector");
    return it->second;
}

u32 Atlas::plane_index(const std::string& key) const {
    auto it = plane_by_key_.find(key);
    if (it == plane_by_key_.end()) throw std::domain_error("plane_index: unknown plane");
    return it->second;
}

u32 Atlas::cusp_index(u32 plane, u32 f_value) const {
    for (u32 fi = 0; fi < cusp_fvalues_.size(); ++fi)
        if (cusp_fvalues_[fi] == f_value) return plane * u32(cusp_fvalues_.size()) + fi;
    throw std::domain_error("cusp_index: bad f value");
}

u32 Atlas::fdivisor_index(const PElement& p) const {
    auto it = f_by_key_.find(p.key());
    if (it == f_by_key_.end()) throw std::domain_error("fdivisor_index: not in the class");
    return it->second;
}

u32 Atlas::line_index(const Vec4& va, const Vec4& vb) const {
    auto it = line_by_key_.find(line_key(va.canonical_pm(), vb.canonical_pm()));
    if (it == line_by_key_.end()) throw std::domain_error("line_index: not a line");
    return it->second;
}

u32 Atlas::triple_index(const Vec4& a, const Vec4& b, const Vec4& c) const {
    std::array<u32, 3> enc{a.canonical_pm().encode(), b.canonical_pm().encode(),
                           c.canonical_pm().encode()};
    std::sort(enc.begin(), enc.end());
    auto it = triple_by_key_.find(TripleKey{(u64(enc[0]) << 32) | enc[1], enc[2]});
    if (it == triple_by_key_.end()) throw std::domain_error("triple_index: not a triple point");
    return it->second;
}

u32 Atlas::act_divisor(const Mat4& g, u32 d) const {
    return divisor_by_enc_.at((g * divisors_[d].v).canonical_pm().encode());
}

std::pair<std::string, u32> transport_cusp(const Mat4& g, const Vec4& w1, const Vec4& w2,
                                           u32 f_value) {
    u32 n = g.n;
    Vec4 u1 = g * w1, u2 = g * w2;
    auto [b1, b2] = lex_min_basis(u1, u2);
    auto [a, b] = solve_pair_coeffs(u1, u2, b1);
    auto [c, d] = solve_pair_coeffs(u1, u2, b2);
    u32 det = u32((u64(a) * d % n + u64(n) - u64(b) * c % n) % n);
    u32 f = u32(u64(f_value) * det % n);
    f = std::min(f, n - f);
    return {span_key({to_row(b1), to_row(b2)}, n, 4), f};
}

u32 Atlas::act_cusp(const Mat4& g, u32 q) const {
    const CuspPoint& c = cusps_[q];
    const IsotropicPlane& pl = planes_[c.plane];
    auto [key, f] = transport_cusp(g, pl.w1, pl.w2, c.f_value);
    return cusp_index(plane_by_key_.at(key), f);
}

u32 Atlas::act_epair(const Mat4& g, u32 e) const {
    const DivisorE& ep = epairs_[e];
    std::string k1 = span_key({to_row(g * ep.a1), to_row(g * ep.a2)}, n_, 4);
    std::string k2 = span_key({to_row(g * ep.b1), to_row(g * ep.b2)}, n_, 4);
    std::string pk = k1 < k2 ? k1 + "|" + k2 : k2 + "|" + k1;
    return epair_by_key_.at(pk);
}

u32 Atlas::act_fdivisor(const Mat4& g, u32 f) const {
    return f_by_key_.at(PElement(g * fdivisors_[f].psi.rep * g.symplectic_inverse()).key());
}

u32 Atlas::act_line(const Mat4& g, u32 l) const {
    const LineLD& ln = lines_[l];
    return line_by_key_.at(line_key((g * ln.va).canonical_pm(), (g * ln.vb).canonical_pm()));
}

u32 Atlas::act_triple(const Mat4& g, u32 t) const {
    const TriplePoint& tp = triples_[t];
    return triple_index(g * tp.wa, g * tp.wb, g * tp.wc);
}

u32 Atlas::standard_divisor() const { return divisor_index(Vec4(n_, {0, 1, 0, 0})); }

u32 Atlas::standard_cusp() const {
    std::string key = span_key({{1, 0, 0, 0}, {0, 1, 0, 0}}, n_, 4);
    return cusp_index(plane_by_key_.at(key), 1);
}

u32 Atlas::standard_epair() const {
    std::string k1 = span_key({{1, 0, 0, 0}, {0, 0, 1, 0}}, n_, 4);
    std::string k2 = span_key({{0, 1, 0, 0}, {0, 0, 0, 1}}, n_, 4);
    std::string pk = k1 < k2 ? k1 + "|" + k2 : k2 + "|" + k1;
    return epair_by_key_.at(pk);
}

u32 Atlas::standard_fdivisor() const {
    return f_by_key_.at(PElement(Mat4(n_, {0,1,0,0, 1,0,0,0, 0,0,0,1, 0,0,1,0})).key());
}

u32 Atlas::standard_line() const {
    return line_index(Vec4(n_, {1, 0, 0, 0}), Vec4(n_, {0, 1, 0, 0}));
}

u32 Atlas::standard_triple() const {
    return triple_index(Vec4(n_, {0, 1, 0, 0}), Vec4(n_, {-1, 1, 0, 0}), Vec4(n_, {1, 0, 0, 0}));
}

PElement e_involution(const DivisorE& e) {
    u32 n = e.a1.n;
    Mat4 basis = Mat4::zero(n);
    for (int i = 0; i < 4; ++i) {
        basis.set(i, 0, e.a1[i]);
        basis.set(i, 1, e.a2[i]);
        basis.set(i, 2, e.b1[i]);
        basis.set(i, 3, e.b2[i]);
    }
    Mat4 diag(n, {1,0,0,0, 0,1,0,0, 0,0,-1,0, 0,0,0,-1});
    Mat4 m = basis * diag * basis.inverse();
    if (!m.is_symplectic()) throw std::domain_error("e_involution: pair is not complementary-orthogonal");
    return PElement(m);
}

bool incidence_D_cusp(const Atlas& atlas, const DivisorD& d, const CuspPoint& q) {
    if (d.v.n != atlas.level()) throw LevelMismatchError("incidence_D_cusp: level mismatch");
    return span_contains(atlas.planes()[q.plane].hw, to_row(d.v), atlas.level());
}

bool incidence_E_D(const DivisorE& e, const DivisorD& d) {
    u32 n = d.v.n;
    if (e.a1.n != n) throw LevelMismatchError("incidence_E_D: level mismatch");
    auto in_span = [&](const Vec4& b1, const Vec4& b2) {
        return span_contains(howell({to_row(b1), to_row(b2)}, n, 4), to_row(d.v), n);
    };
    return in_span(e.a1, e.a2) || in_span(e.b1, e.b2);
}

std::vector<DivisorF> f_through_line(const LineLD& line) {
    u32 n = line.va.n;
    Mat4 g = symplectic_completion(line.va, line.vb);
    Mat4 ginv = g.symplectic_inverse();
    std::vector<DivisorF> out;
    out.reserve(n);
    for (u32 b = 0; b < n; ++b) {
        Mat4 psi(n, {0,1,0,i64(b), 1,0,-i64(b),0, 0,0,0,1, 0,0,1,0});
        out.push_back(DivisorF{PElement(g * psi * ginv)});
    }
    std::sort(out.begin(), out.end(),
              [](const DivisorF& a, const DivisorF& b) { return a.psi < b.psi; });
    return out;
}

BigInt divisor_count_formula(u32 n) {
    // n^4 prod_{p|n} (1 - p^-4) / 2
    BigInt num = (BigInt(n) * n) * (BigInt(n) * n);
    BigInt den = 2;
    for (const auto& pp : factorize(n)) {
        BigInt p4 = BigInt(pp.p) * pp.p * pp.p * pp.p;
        num *= p4 - 1;
        den *= p4;
    }
    if (num % den != 0) throw std::logic_error("divisor count not integral");
    return num / den;
}

BigInt line_count_formula(u32 n) {
    // n^7 prod_{p|n} (1 - p^-4)(1 - p^-2) / 8
    BigInt num = 1;
    for (int i = 0; i < 7; ++i) num *= n;
    BigInt den = 8;
    for (const auto& pp : factorize(n)) {
        BigInt p2 = BigInt(pp.p) * pp.p, p4 = p2 * p2;
        num *= (p4 - 1) * (p2 - 1);
        den *= p4 * p2;
    }
    if (num % den != 0) throw std::logic_error("line count not integral");
    return num / den;
}

}  // namespace siegel
