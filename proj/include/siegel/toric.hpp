#pragma once

#include <array>
#include <vector>

#include "siegel/common.hpp"
#include "siegel/modlinalg.hpp"

namespace siegel {

using Weight = std::array<u32, 3>;

// An abelian diagonal action on affine 3-space: the subgroup of (Z/nZ)^3
// generated by the weight vectors, acting by coordinatewise roots of unity.
// delta is (1/n) times the smallest total degree of a nonzero invariant
// monomial; it controls the multiplicity of the quotient singularity.
class ToricSingularity {
public:
    static constexpr u32 kMaxToricModulus = 4096;

    ToricSingularity(u32 modulus, std::vector<Weight> weights);

    u32 modulus() const { return n_; }
    const std::vector<Weight>& generators() const { return gens_; }  // canonical (Howell) form
    BigInt group_order() const;
    u32 group_exponent() const;
    std::string key() const;  // canonical subgroup key

    bool is_invariant(u64 l1, u64 l2, u64 l3) const;

    // (1/n) min_{l != 0} (l1 + l2 + l3) over invariant monomials
    Rational delta() const;
    // n^3 delta / |H1|
    Rational mult_upper_bound() const;
    // normalized lattice volume of the staircase complement divided by |H1|;
    // the exact multiplicity of the quotient singularity at the origin
    BigInt mult_exact() const;

    // exponent triples of invariant monomials with total degree <= cap
    std::vector<std::array<u32, 3>> semigroup_points(u32 degree_cap) const;
    // irreducible semigroup elements (not sums of two nonzero members) up to the cap
    std::vector<std::array<u32, 3>> semigroup_generators(u32 degree_cap) const;

private:
    u32 n_;
    std::vector<Weight> gens_;
};

// delta for the cyclic K_{uvw} census case: alpha*u + beta*v + gamma*w = 0 mod p^s
Rational delta_uvw(u32 u, u32 v, u32 w, u32 p, u32 s);

struct CensusResult {
    u64 count;          // homogeneous triples (u:v:w) with delta >= epsilon
    Rational bound;     // 2^2 eps^-8 [4 eps^-5]_p
    bool satisfied;
};
CensusResult census(u32 p, u32 s, const Rational& epsilon, unsigned threads = 1);

// ---- solvable chains and the k constant ----

using Perm = std::vector<u32>;

struct PermGroup {
    u32 degree = 0;
    std::vector<Perm> generators;
    std::vector<Perm> elements() const;  // full enumeration (small groups)
};

// H0 subset H1 subset ... subset Ht given by cumulative generator lists;
// chain[0] may be empty (the trivial group)
struct SolvableChain {
    u32 degree = 0;
    std::vector<std::vector<Perm>> levels;
};

// verifies normality and abelian quotients, returns k = prod of the quotient
// exponents; throws std::domain_error when a quotient is not abelian
u64 k_constant(const SolvableChain& chain, std::vector<u64>* exponents_out = nullptr);

// regular permutation representation of the (abelian) toric group as a
// one-step chain {e} subset H1
SolvableChain solvable_chain_of_toric(const ToricSingularity& h1, std::size_t order_cap = 4096);

// checks, degree by degree up to `degree_cap`, that every invariant monomial
// of total degree >= k*l + N factors into at least l invariant monomials of
// positive degree
bool verify_klem(const ToricSingularity& h1, u32 k, u32 l, u32 N, u32 degree_cap);

}  // namespace siegel
