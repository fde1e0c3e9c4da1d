#include "opencore/finite_set.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace opencore {

FiniteSetQ::FiniteSetQ(std::initializer_list<Rational> xs) : FiniteSetQ(std::vector<Rational>(xs)) {}

FiniteSetQ::FiniteSetQ(std::vector<Rational> xs) : elems_(std::move(xs)) {
  for (const auto& x : elems_)
    if (!x.is_positive()) throw std::invalid_argument("FiniteSetQ: element must be positive, got " + x.str());
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool FiniteSetQ::contains(const Rational& x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

void FiniteSetQ::insert(const Rational& x) {
  if (!x.is_positive()) throw std::invalid_argument("FiniteSetQ: element must be positive, got " + x.str());
  auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
  if (it == elems_.end() || *it != x) elems_.insert(it, x);
}

bool FiniteSetQ::operator<(const FiniteSetQ& o) const {
  return std::lexicographical_compare(elems_.begin(), elems_.end(), o.elems_.begin(), o.elems_.end());
}

std::string FiniteSetQ::str() const {
  std::string out = "{";
  for (size_t i = 0; i < elems_.size(); ++i) {
    if (i) out += ", ";
    out += elems_[i].str();
  }
  return out + "}";
}

FiniteSetQ set_union(const FiniteSetQ& a, const FiniteSetQ& b) {
  std::vector<Rational> out;
  std::set_union(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                 std::back_inserter(out));
  return FiniteSetQ(std::move(out));
}

FiniteSetQ set_intersection(const FiniteSetQ& a, const FiniteSetQ& b) {
  std::vector<Rational> out;
  std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(),
                        b.elements().end(), std::back_inserter(out));
  return FiniteSetQ(std::move(out));
}

FiniteSetQ set_min(const FiniteSetQ& a) {
  if (a.is_empty()) return a;
  return FiniteSetQ{a.min()};
}

FiniteSetQ set_max(const FiniteSetQ& a) {
  if (a.is_empty()) return a;
  return FiniteSetQ{a.max()};
}

FiniteSetQ s_preimage(const FiniteSetQ& a, const FiniteSetQ& b) {
  std::vector<Rational> out;
  const auto& xs = a.elements();
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (b.contains(xs[i + 1])) out.push_back(xs[i]);
  return FiniteSetQ(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const FiniteSetQ& s) { return os << s.str(); }

}  // namespace opencore
