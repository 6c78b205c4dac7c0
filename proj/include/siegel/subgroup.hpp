#pragma once

#include <deque>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "siegel/core.hpp"

namespace siegel {

// Order, membership and uniform sampling for subgroups of Sp(4,Z/nZ) via a
// stabilizer chain on the action on V = (Z/nZ)^4.
class StabilizerChain {
public:
    static StabilizerChain build(u32 n, const std::vector<Mat4>& gens,
                                 const BigInt& order_ceiling);

    const BigInt& order() const { return order_; }
    std::size_t depth() const { return levels_.size(); }
    bool contains(const Mat4& g) const;
    Mat4 sample(SplitMix64& rng) const;
    u32 modulus() const { return n_; }

    // Sims completeness self-check: every Schreier generator at every level
    // sifts to the identity through the rest of the chain
    bool verify() const;
    std::vector<std::size_t> orbit_sizes() const;

private:
    struct Level {
        Vec4 base;
        std::vector<u32> orbit;                   // encoded points in scan order
        std::unordered_map<u32, u32> position;    // encoded point -> orbit index
        std::vector<Mat4> rep;                    // rep[k] * base = orbit[k]
        std::vector<Mat4> rep_inv;
        std::vector<Mat4> gens;                   // cumulative strong generators
        std::vector<Mat4> gen_invs;
        std::size_t scan_points = 0;              // orbit scan rectangle
        std::size_t scan_gens = 0;
        std::size_t points_done = 0;              // Schreier pairs processed up to
        std::size_t gens_done = 0;                //   points_done x gens_done
    };

    void insert(Mat4 g, std::size_t level);
    void drain();
    void extend_orbit(std::size_t li);
    void emit_schreier(std::size_t li);
    void check_ceiling(std::size_t li) const;
    void recompute_order();

    u32 n_ = 1;
    BigInt order_ = 1;
    BigInt ceiling_;
    std::vector<Level> levels_;
    std::deque<std::pair<Mat4, std::size_t>> pending_;
};

// |Sp(4,Z/nZ)| = n^10 prod_{p|n} (1-p^-2)(1-p^-4)
BigInt sp4_order(u32 n);

// transvections generating the full group (order checked against the closed
// formula in the tests)
std::vector<Mat4> sp4_generators(u32 n);

struct Subgroup {
    u32 level = 1;
    std::vector<Mat4> generators;

    Subgroup() = default;
    Subgroup(u32 n, std::vector<Mat4> gens);

    static Subgroup full_group(u32 n);
    static Subgroup center(u32 n);  // {1, -1}

    static BigInt default_ceiling() { return BigInt(1) << 80; }

    // builds the chain on first use; call once before concurrent reads
    const StabilizerChain& chain(const BigInt& ceiling = default_ceiling()) const;

    BigInt order() const { return chain().order(); }
    bool contains(const Mat4& g) const { return chain().contains(g); }
    bool contains_pm(const Mat4& g) const { return contains(g) || contains(-g); }
    bool has_minus_one() const { return contains(-Mat4::identity(level)); }
    Subgroup with_center_adjoined() const;

private:
    mutable std::shared_ptr<const StabilizerChain> chain_;
};

// closure: same subgroup with the chain built (per-module operation surface)
Subgroup closure(const Subgroup& h, const BigInt& ceiling = Subgroup::default_ceiling());

// |G : H|, verifying H <= G first
BigInt subgroup_index(const Subgroup& g, const Subgroup& h);

// full element list by breadth-first closure; throws CeilingExceededError if
// more than `cap` elements appear
std::vector<Mat4> enumerate_elements(const Subgroup& h, std::size_t cap);

// exact hash-set membership for small groups, chain membership otherwise
class MembershipOracle {
public:
    MembershipOracle(const Subgroup& h, std::size_t enumeration_cap = 2'000'000);
    bool contains(const Mat4& g) const;
    const Subgroup& subgroup() const { return h_; }

private:
    const Subgroup& h_;
    std::unordered_set<Mat4::Key, Mat4KeyHash> elems_;
    bool enumerated_ = false;
};

}  // namespace siegel
