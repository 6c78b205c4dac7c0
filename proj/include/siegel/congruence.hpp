#pragma once

#include "siegel/subgroup.hpp"

namespace siegel {

// Finite-quotient machinery for composite levels: the Chinese-remainder
// splitting of level groups, p-projections of subgroups, and the kernel-layer
// generation check behind the big-prime reduction.

struct LevelSplit {
    u32 n;            // n = n1 * n2, coprime
    u32 n1, n2;
};

LevelSplit level_split(u32 n, u32 p);  // n1 = p-part, n2 = coprime part; throws if p does not divide n

// componentwise reduction and CRT recombination
Mat4 reduce_level(const Mat4& g, u32 m);
std::pair<Mat4, Mat4> crt_split(const Mat4& g, const LevelSplit& split);
Mat4 crt_combine_elements(const Mat4& g1, const Mat4& g2, const LevelSplit& split);

// image of H at the p-power component level
Subgroup p_projection(const Subgroup& h, u32 p);

// the kernel layer of level p^i over p^(i-1) as a 10-dimensional space over
// F_p: elements 1 + p^(i-1) X with X in the linearized symplectic algebra
struct KernelLayer {
    u32 p;
    u32 i;
    // basis of the algebra {X : X^t J + J X = 0} over F_p (dimension 10)
    std::vector<Mat4> basis;   // entries mod p
};
KernelLayer kernel_layer(u32 p, u32 i);

// coordinates of X (entries mod p) in the layer basis; throws if X is not in
// the algebra
std::array<u32, 10> layer_coordinates(const KernelLayer& layer, const Mat4& x_mod_p);

struct KernelGenerationResult {
    bool generated;      // conjugates of h^(p^(i-1)) span the full layer
    u32 rank;            // rank reached (10 when generated)
    u64 conjugators_used;
};

// spans conjugates of the element 1 + p^(i-1) E13 over seeded uniform
// conjugators until full rank; exhaustive mode walks the breadth-first
// closure of the level-p group instead
KernelGenerationResult verify_kernel_generation(u32 p, u32 i, u64 seed = 1,
                                                u64 sample_cap = 512, bool exhaustive = false);

}  // namespace siegel
