#pragma once

#include <string>
#include <vector>
#include <optional>

#include "siegel/core.hpp"

namespace siegel {

// Row-span canonicalization and small solves over Z/nZ.  Spans here are
// submodules of (Z/nZ)^w given by generating rows; the Howell normal form is
// the canonical generating set, unique per span, so structural equality of
// spans is equality of Howell matrices.

using Row = std::vector<u32>;

// Howell normal form of the span of `rows` (width w, modulus n).
std::vector<Row> howell(std::vector<Row> rows, u32 n, std::size_t width);

// serialized Howell matrix; usable as a hash key for the span
std::string span_key(const std::vector<Row>& rows, u32 n, std::size_t width);

bool span_contains(const std::vector<Row>& howell_rows, Row v, u32 n);

// all elements of the span of two 4-vectors, in increasing encode() order
std::vector<Vec4> span_elements(const Vec4& u1, const Vec4& u2);

// span of {u1,u2} is free of rank 2, i.e. isomorphic to (Z/nZ)^2
bool is_free_pair(const Vec4& u1, const Vec4& u2);

// coefficients (a,b) with a*u1 + b*u2 = w, for (u1,u2) a free basis of their
// span; throws std::domain_error if w is not in the span
std::pair<u32, u32> solve_pair_coeffs(const Vec4& u1, const Vec4& u2, const Vec4& w);

// lexicographically smallest basis of a free rank-2 span: w1 = lex-least
// primitive element, w2 = lex-least element completing it to a basis
std::pair<Vec4, Vec4> lex_min_basis(const Vec4& u1, const Vec4& u2);

// a symplectic matrix whose first two columns are exactly (va, vb);
// requires <va,vb> = 0, both primitive, pair free
Mat4 symplectic_completion(const Vec4& va, const Vec4& vb);

// basis of the orthogonal complement of span{w1,w2} when <w1,w2> is a unit
std::pair<Vec4, Vec4> orthogonal_complement(const Vec4& w1, const Vec4& w2);

}  // namespace siegel
