#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "opencore/rational.hpp"

namespace opencore {

/// Finite set of positive rationals, kept strictly increasing.
class FiniteSetQ {
 public:
  FiniteSetQ() = default;
  FiniteSetQ(std::initializer_list<Rational> xs);
  // Sorts and deduplicates; throws std::invalid_argument on a nonpositive element.
  explicit FiniteSetQ(std::vector<Rational> xs);

  static FiniteSetQ empty() { return {}; }

  bool contains(const Rational& x) const;
  void insert(const Rational& x);

  size_t size() const { return elems_.size(); }
  bool is_empty() const { return elems_.empty(); }
  const std::vector<Rational>& elements() const { return elems_; }
  const Rational& min() const { return elems_.front(); }
  const Rational& max() const { return elems_.back(); }

  bool operator==(const FiniteSetQ& o) const { return elems_ == o.elems_; }
  bool operator!=(const FiniteSetQ& o) const { return !(*this == o); }
  bool operator<(const FiniteSetQ& o) const;  // lexicographic, for ordered containers

  std::string str() const;  // "{}", "{1/2, 1, 2}"

 private:
  std::vector<Rational> elems_;
};

FiniteSetQ set_union(const FiniteSetQ& a, const FiniteSetQ& b);
FiniteSetQ set_intersection(const FiniteSetQ& a, const FiniteSetQ& b);
// Singleton of the extremum; the empty set maps to itself.
FiniteSetQ set_min(const FiniteSetQ& a);
FiniteSetQ set_max(const FiniteSetQ& a);
// Elements of a whose successor within a lies in b; max(a) has no successor.
FiniteSetQ s_preimage(const FiniteSetQ& a, const FiniteSetQ& b);

std::ostream& operator<<(std::ostream& os, const FiniteSetQ& s);

}  // namespace opencore
