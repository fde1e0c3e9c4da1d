#pragma once

#include <utility>
#include <vector>

#include "opencore/finite_set.hpp"
#include "opencore/order_cell.hpp"
#include "opencore/rational.hpp"

namespace opencore::coding {

// Bit positions accepted by index_of_set before it refuses (deep rationals
// would need indices of astronomically many bits).
inline constexpr unsigned long kDefaultIndexBitLimit = 1ul << 20;

// i-th element of the Calkin–Wilf enumeration of the positive rationals
// (q0 = 1, q_{i+1} = 1/(2⌊q_i⌋ − q_i + 1)); computed along the tree path.
Rational enum_positive_rational(const mpz_class& i);

// Position of q in the enumeration; exact inverse of enum_positive_rational.
mpz_class index_of_rational(const Rational& q);

// F_n = { q_i : bit i of n is set }.
FiniteSetQ set_of_index(const mpz_class& n);

// Inverse of set_of_index. Throws std::domain_error when an element's
// enumeration index exceeds the bit limit.
mpz_class index_of_set(const FiniteSetQ& f, unsigned long bit_limit = kDefaultIndexBitLimit);

// The coding map: x < 0 maps to F_{v2(den x)}. Throws std::domain_error on
// x >= 0.
FiniteSetQ rho(const Rational& x);

// A(x, y): x < 0 < y and y ∈ rho(x).
bool eval_A(const Rational& x, const Rational& y);

// rho(x) for x < 0, empty otherwise. Always finite.
FiniteSetQ fiber(const Rational& x);

// rho(x) = rho(y); both arguments must be negative.
bool same_fiber(const Rational& x, const Rational& y);

// Deterministic x in (a, b) with v2(den x) = n exactly, hence rho(x) = F_n.
// Uses denominators 2^n 3^m with the smallest m such that the window spans
// more than 7 lattice steps, then the least admissible numerator (odd when
// n >= 1, never divisible by 3). Requires a < b <= 0.
Rational find_code_in_interval(unsigned long n, const Rational& a, const Rational& b);

// x with |fiber(x)| = N + 1: x = -1 / 2^(2^(N+1) - 1).
Rational unbounded_fiber_witness(unsigned n);

// A point of box ∩ cell (negative orthant) whose coordinates realize the
// prescribed fibers. The box is one open interval (lo, hi) per cell variable
// with hi <= 0. Throws std::invalid_argument when the labels are incompatible
// with the cell's equalities or the box misses the cell.
std::vector<Rational> realize_labels(const OrderCell& cell,
                                     const std::vector<std::pair<Rational, Rational>>& box,
                                     const std::vector<FiniteSetQ>& labels);

}  // namespace opencore::coding
