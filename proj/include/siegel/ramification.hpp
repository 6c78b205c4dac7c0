#pragma once

#include <optional>

#include "siegel/atlas.hpp"
#include "siegel/subgroup.hpp"
#include "siegel/toric.hpp"

namespace siegel {

// Ramification invariants of a subgroup H (with ±1) against the boundary
// strata, the displayed matrix identities, and the index-bound experiments.

Rational ram_v(const Subgroup& h, const Vec4& v);
int ram_E(const Subgroup& h, const DivisorE& e);
int ram_F(const Subgroup& h, const DivisorF& f);
Rational ram_line(const Subgroup& h, const LineLD& l);
// the displayed fraction |Ram_H(l)| / (|Ram_H(l) ∩ Ram_G(v_side)| n); measures
// the part of Ram_H(l) transverse to the chosen divisor
Rational ram_line_in_divisor(const Subgroup& h, const LineLD& l, bool side_va);
Rational delta_at_triple(const Subgroup& h, const TriplePoint& p);
Rational mult_bound_at_triple(const Subgroup& h, const TriplePoint& p);
BigInt mult_exact_at_triple(const Subgroup& h, const TriplePoint& p);

enum class BoundFamily { D, E, DD, F, DDD };
const char* family_name(BoundFamily f);
BoundFamily family_from_name(const std::string& s);

struct BoundVerdict {
    BoundFamily family;
    Rational epsilon;       // achieved family mean
    bool bound_infinite;    // epsilon vanished: the bound is vacuous
    Rational bound;         // printed bound evaluated at epsilon (exact)
    BigInt index;           // |G:H|
    bool strict;            // whether the printed inequality is strict
    bool satisfied;
};

struct TripleOrbitEntry {
    u32 rep;           // triple index of the orbit representative
    u64 orbit_size;
    Rational delta;
    Rational mult_bound;
    BigInt mult;       // exact multiplicity
};

struct RamificationReport {
    u32 level = 0;
    BigInt subgroup_order;
    // per-stratum values (divisor/E/F always; lines kept only on request)
    std::vector<Rational> ram_d;
    std::vector<u8> ram_e;
    std::vector<u8> ram_f;
    bool lines_kept = false;
    std::vector<Rational> ram_l;
    std::vector<std::array<Rational, 2>> ram_l_sides;  // (side va, side vb)
    std::vector<TripleOrbitEntry> triple_orbits;
    // family sums and counts
    Rational sum_d, sum_e, sum_f, sum_l, sum_mult;
    u64 count_d = 0, count_e = 0, count_f = 0, count_l = 0, count_t = 0;
    Rational mean(BoundFamily f) const;
};

// Batched computation against one atlas; builds the membership oracle once
// and reuses H-orbit structure across the line and triple families.
class RamificationLab {
public:
    RamificationLab(const Atlas& atlas, const Subgroup& h);

    const Atlas& atlas() const { return atlas_; }
    const Subgroup& subgroup() const { return h_; }

    RamificationReport report(bool keep_lines) const;
    BoundVerdict bound_check(BoundFamily f) const;
    std::vector<BoundVerdict> bound_check_all() const;

private:
    struct CuspLocal {
        // H ∩ Ram_G(W) in the (w1, w2, w1+w2) transvection parameters
        std::vector<std::array<u32, 3>> elements;
    };
    const CuspLocal& cusp_local(u32 cusp) const;

    const Atlas& atlas_;
    const Subgroup& h_;
    MembershipOracle oracle_;
    mutable std::vector<std::optional<CuspLocal>> cusp_cache_;
    mutable std::unordered_map<std::string, std::pair<Rational, BigInt>> toric_cache_;
};

// the printed bound of the given family evaluated at epsilon (exact);
// epsilon must be in (0, 1]
Rational printed_bound(BoundFamily f, const Rational& epsilon, u32 p);

// ---- the four displayed identity families ----

struct IdentityFailure {
    std::string identity;
    u64 trial;
    std::vector<i64> params;
};

struct IdentityReport {
    u32 level;
    u64 trials;
    u64 seed;
    u64 checks = 0;
    std::vector<IdentityFailure> failures;
};

// verifies, for `trials` seeded random parameter draws each, that the four
// displayed products equal their printed right-hand sides mod n
IdentityReport verify_identities(u32 n, u64 trials, u64 seed, unsigned threads = 1);

// random subgroup for the experiments: 1..max_gens uniform elements, ±1 adjoined
Subgroup random_subgroup(const Subgroup& ambient, SplitMix64& rng, int max_gens = 4);

}  // namespace siegel
