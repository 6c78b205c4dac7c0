#pragma once

#include <array>
#include <optional>

#include "siegel/cyclotomic.hpp"

namespace siegel {

// The singular quartic (sum x_i^2)^2 = 4 sum x_i^4 in the hyperplane
// sum x_i = 0 of P^4, with the symmetric group permuting coordinates: the
// level-2 quotient model.  All arithmetic is exact in a cyclotomic field.

using Perm6 = std::array<int, 6>;  // position i receives coordinate perm[i]

struct QuarticPoint {
    std::array<Cyclo, 6> x;
    QuarticPoint(std::array<Cyclo, 6> coords);  // validates: not all zero, sum = 0
    const std::shared_ptr<const CycloField>& field() const { return x[0].field(); }
};

QuarticPoint permute(const Perm6& s, const QuarticPoint& p);

bool on_quartic(const QuarticPoint& p);

// one of the fifteen double lines x_i = x_j, x_k = x_l, x_m = x_n
bool in_singular_locus(const QuarticPoint& p);
// the gradient of the quartic is proportional to the hyperplane normal
bool is_smooth_point(const QuarticPoint& p);

struct StabilizerElement {
    Perm6 sigma;
    Cyclo lambda;  // sigma(x) = lambda x exactly
};

// all of the 720 permutations fixing [x], with proportionality factors
std::vector<StabilizerElement> stabilizer(const QuarticPoint& p);

// determinant of the induced action on the 3-dimensional tangent space of the
// quartic at a smooth point
Cyclo tangent_action_determinant(const QuarticPoint& p, const StabilizerElement& s);

// matrix of lambda^-1 sigma on {u : sum u = 0, grad Q(p) . u = 0} (contains
// the Euler direction with eigenvalue 1); basis and matrix returned for
// eigenvalue analysis
struct TangentAction {
    std::vector<std::array<Cyclo, 6>> basis;   // of the 4-dimensional space
    std::vector<std::vector<Cyclo>> matrix;
};
TangentAction tangent_action(const QuarticPoint& p, const StabilizerElement& s);

// Reid-Tai: for a cyclic action with weights a_j mod r, every nontrivial
// power has age sum_j (m a_j mod r)/r >= 1
bool reid_tai(const std::vector<u32>& weights, u32 r);
std::vector<Rational> reid_tai_ages(const std::vector<u32>& weights, u32 r);

// ---- fixed-locus case analysis ----

enum class FixedLocusOutcome {
    NoFixedPoints,    // the eigenspace is zero
    NotOnQuartic,     // an isolated candidate point misses the quartic
    SingularLocus,    // fixed points land in the singular double lines
    InEDivisorImage,  // fixed points satisfy a vanishing of x_a+x_b+x_c type
    DivisorXiEqXj,    // fixed locus inside the divisor x_i = x_j
    ThetaOrbit,       // the isolated quintic points
};
const char* outcome_name(FixedLocusOutcome o);

struct CaseBranch {
    std::string lambda;        // "1", "-1", "zeta3", "zeta5^k"
    FixedLocusOutcome outcome;
    std::string detail;        // verified witness or identity, printable
};

struct CaseReport {
    std::string sigma_type;
    std::vector<CaseBranch> branches;
};

// sigma_type is one of "(1,2)", "(1,2)(3,4)", "(1,2)(3,4)(5,6)", "(1,2,3)",
// "(1,2,3)(4,5,6)", "(1,2,3,4,5)"; every branch claim is verified exactly
CaseReport classify_permutation_fixed_locus(const std::string& sigma_type);

// ---- the order-16 stabilizer at the (i,i) point ----

struct StabIIReport {
    bool relations_hold;   // alpha beta = beta alpha, alpha^2 = beta^2,
                           // phi alpha = beta phi, phi^2 = alpha^4 = beta^4 = 1
                           // (all modulo ±1)
    bool non_abelian;      // phi alpha != alpha phi
    u64 group_order_mod_pm;
};
StabIIReport stab_ii_relations();

// ---- involutions of the level-2 group over the integers ----

using ZVec4 = std::array<BigInt, 4>;
using ZMat4 = std::array<BigInt, 16>;  // row major

ZMat4 zmat_identity();
ZMat4 zmat_mul(const ZMat4& a, const ZMat4& b);
ZMat4 zmat_neg(const ZMat4& a);
ZMat4 zmat_symplectic_inverse(const ZMat4& m);
bool zmat_is_symplectic(const ZMat4& m);
BigInt zskew(const ZVec4& u, const ZVec4& v);
ZMat4 z_transvection(const ZVec4& v, const BigInt& alpha);

struct InvolutionNormalForm {
    std::array<ZVec4, 4> e;  // M e_i = (-1)^(i+1) e_i, <e1,e3> = <e2,e4> = 1
    ZMat4 conjugator;        // S with S^-1 M S = diag(1,-1,1,-1)
};

// normal form of a nonidentity involution in the level-2 congruence group;
// the degenerate gcd case (all three Bezout inputs zero, M != ±diag) is
// reported as a domain error
InvolutionNormalForm involution_normal_form(const ZMat4& m);

}  // namespace siegel
