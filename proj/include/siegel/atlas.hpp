#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "siegel/core.hpp"
#include "siegel/modlinalg.hpp"

namespace siegel {

// Combinatorial models of the boundary strata of the level-n compactification:
// infinity divisors are primitive ±vectors, cusp points are pairs (W, ±f) with
// W a free rank-2 isotropic subgroup, E divisors are orthogonal complementary
// plane pairs (equivalently conjugates of diag(1,-1,1,-1)), F divisors are the
// conjugates of the coordinate-swap involution, lines and triple points are
// the multi-divisor incidences inside a cusp's plane.

struct DivisorD {
    Vec4 v;  // canonical ± representative
};

struct IsotropicPlane {
    Vec4 w1, w2;               // lexicographically minimal basis
    std::vector<Row> hw;       // Howell rows, for membership
    std::string key;
};

struct CuspPoint {
    u32 plane;    // index into Atlas::planes()
    u32 f_value;  // f(w1,w2) normalized to min(c, n-c); always a unit
};

struct DivisorE {
    Vec4 a1, a2;  // lex-min basis of W1 (the pair ordered by span key)
    Vec4 b1, b2;  // lex-min basis of W2 = W1-perp
    std::string key1, key2;
};

struct DivisorF {
    PElement psi;
};

struct LineLD {
    Vec4 va, vb;  // canonical ± representatives, va.encode() < vb.encode()
    u32 cusp;
};

struct TriplePoint {
    Vec4 wa, wb, wc;  // exact representatives with wa + wb + wc = 0
    u32 cusp;
};

class Atlas {
public:
    explicit Atlas(u32 n);

    u32 level() const { return n_; }

    const std::vector<DivisorD>& divisors() const { return divisors_; }
    const std::vector<IsotropicPlane>& planes() const { return planes_; }
    const std::vector<CuspPoint>& cusps() const { return cusps_; }
    const std::vector<DivisorE>& epairs() const { return epairs_; }
    const std::vector<DivisorF>& fdivisors() const { return fdivisors_; }
    const std::vector<LineLD>& lines() const { return lines_; }
    const std::vector<TriplePoint>& triples() const { return triples_; }

    const std::vector<u32>& lines_over_cusp(u32 cusp) const { return lines_by_cusp_[cusp]; }
    const std::vector<u32>& triples_over_cusp(u32 cusp) const { return triples_by_cusp_[cusp]; }

    u32 divisor_index(const Vec4& v) const;          // v canonicalized here
    u32 plane_index(const std::string& key) const;
    u32 cusp_index(u32 plane, u32 f_value) const;
    u32 fdivisor_index(const PElement& p) const;
    u32 line_index(const Vec4& va, const Vec4& vb) const;
    u32 triple_index(const Vec4& a, const Vec4& b, const Vec4& c) const;

    // group action on stratum indexes
    u32 act_divisor(const Mat4& g, u32 d) const;
    u32 act_cusp(const Mat4& g, u32 q) const;
    u32 act_epair(const Mat4& g, u32 e) const;
    u32 act_fdivisor(const Mat4& g, u32 f) const;
    u32 act_line(const Mat4& g, u32 l) const;
    u32 act_triple(const Mat4& g, u32 t) const;

    // standard objects
    u32 standard_divisor() const;   // ±(0,1,0,0)
    u32 standard_cusp() const;      // (span(e1,e2), f(e1,e2)=1)
    u32 standard_epair() const;     // (span(e1,e3), span(e2,e4))
    u32 standard_fdivisor() const;  // the coordinate-swap involution
    u32 standard_line() const;      // {±e1, ±e2}
    u32 standard_triple() const;    // {±(0,1,0,0), ±(-1,1,0,0), ±(1,0,0,0)}

private:
    struct TripleKey {
        u64 ab; u32 c;
        friend bool operator==(const TripleKey&, const TripleKey&) = default;
    };
    struct TripleKeyHash {
        std::size_t operator()(const TripleKey& k) const {
            return std::size_t(k.ab * 0x9e3779b97f4a7c15ULL ^ (u64(k.c) << 17 ^ k.c));
        }
    };

    void build_divisors();
    void build_planes_and_cusps();
    void build_epairs();
    void build_fdivisors();
    void build_lines_and_triples();

    u32 n_;
    std::vector<DivisorD> divisors_;
    std::vector<IsotropicPlane> planes_;
    std::vector<CuspPoint> cusps_;
    std::vector<DivisorE> epairs_;
    std::vector<DivisorF> fdivisors_;
    std::vector<LineLD> lines_;
    std::vector<TriplePoint> triples_;
    std::vector<std::vector<u32>> lines_by_cusp_;
    std::vector<std::vector<u32>> triples_by_cusp_;
    std::vector<u32> cusp_fvalues_;  // the admissible canonical f values
    std::unordered_map<u32, u32> divisor_by_enc_;
    std::unordered_map<std::string, u32> plane_by_key_;
    std::unordered_map<std::string, u32> epair_by_key_;
    std::unordered_set<std::string> seen_w1_;  // scratch during construction
    std::unordered_map<Mat4::Key, u32, Mat4KeyHash> f_by_key_;
    std::unordered_map<u64, u32> line_by_key_;
    std::unordered_map<TripleKey, u32, TripleKeyHash> triple_by_key_;
};

// cusp datum transported by g: returns (plane key, canonical f value)
std::pair<std::string, u32> transport_cusp(const Mat4& g, const Vec4& w1, const Vec4& w2,
                                           u32 f_value);

// the involution acting as +1 on W1 and -1 on W2
PElement e_involution(const DivisorE& e);

// incidence predicates
bool incidence_D_cusp(const Atlas& atlas, const DivisorD& d, const CuspPoint& q);
bool incidence_E_D(const DivisorE& e, const DivisorD& d);

// the n class-F involutions fixing the given line pointwise
std::vector<DivisorF> f_through_line(const LineLD& line);

// closed count formulas (multiplicative extension over the prime factors)
BigInt divisor_count_formula(u32 n);        // n^4 prod (1-p^-4) / 2
BigInt line_count_formula(u32 n);           // n^7 prod (1-p^-4)(1-p^-2) / 8

// orbit of a stratum index under generators, via an index-level action
template <class ActFn>
std::vector<u32> orbit_of(u32 start, const std::vector<Mat4>& gens, ActFn act) {
    std::vector<u32> orbit{start};
    std::unordered_map<u32, bool> seen{{start, true}};
    for (std::size_t i = 0; i < orbit.size(); ++i)
        for (const auto& g : gens) {
            u32 y = act(g, orbit[i]);
            if (!seen.count(y)) {
                seen[y] = true;
                orbit.push_back(y);
            }
        }
    std::sort(orbit.begin(), orbit.end());
    return orbit;
}

}  // namespace siegel
