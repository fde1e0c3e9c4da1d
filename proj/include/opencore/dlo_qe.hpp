#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opencore/formula.hpp"
#include "opencore/order_cell.hpp"

namespace opencore {

/// Finite union of points and open intervals with endpoints in ℚ ∪ {±∞},
/// kept sorted, disjoint, and merge-normalized.
class IntervalUnion {
 public:
  struct Part {
    bool is_point;
    Rational point;                       // when is_point
    std::optional<Rational> lo, hi;       // open interval; nullopt = ∓∞
  };

  static Part point_part(Rational p) { return {true, std::move(p), {}, {}}; }
  static Part interval_part(std::optional<Rational> lo, std::optional<Rational> hi) {
    return {false, Rational(0), std::move(lo), std::move(hi)};
  }

  IntervalUnion() = default;
  // Sorts, drops empty intervals, merges overlaps and interval-point-interval
  // bridges into normal form.
  static IntervalUnion normalized(std::vector<Part> parts);

  const std::vector<Part>& parts() const { return parts_; }
  bool is_empty() const { return parts_.empty(); }
  bool contains(const Rational& x) const;
  std::string str() const;
  bool operator==(const IntervalUnion& o) const;

 private:
  std::vector<Part> parts_;
};

// Quantifier elimination over dense linear orders without endpoints.
// Accepts <, =, boolean connectives, (possibly sign-guarded) quantifiers,
// variables, rational literals. Throws SortError on any other atom.
FormulaRef eliminate_quantifiers(const FormulaRef& f);

// Bottom-up boolean/order simplification: constant folding, flattening,
// duplicate removal, contradiction detection inside conjunctions.
FormulaRef simplify_order(const FormulaRef& f);

// Semantic truth over (ℚ,<): quantifiers are decided by trying one
// representative per order cell of the active anchors (the assigned values
// and the literals in scope). Atoms beyond the order fragment raise SortError.
bool evaluate_order(const FormulaRef& f, const std::map<std::string, Rational>& env);

// Cells over the parameters on which the quantifier-free formula holds,
// restricted to the ambient open interval (lo, hi).
std::vector<OrderCell> decompose_to_cells(const FormulaRef& f, const std::vector<std::string>& vars,
                                          std::vector<Rational> params,
                                          const std::optional<Rational>& lo = std::nullopt,
                                          const std::optional<Rational>& hi = std::nullopt);

// Eliminates quantifiers, decomposes over the formula's own literals, and
// renders the solution set of a unary formula. Throws std::invalid_argument
// when the formula has more than one free variable.
IntervalUnion describe_unary(const FormulaRef& f);

}  // namespace opencore
