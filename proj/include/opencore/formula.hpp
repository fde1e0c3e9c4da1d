#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "opencore/finite_set.hpp"
#include "opencore/rational.hpp"

namespace opencore {

enum class Sort { Element, Set };

enum class TermKind { ElemVar, ElemLit, SetVar, SetLit };

/// A term of the shared two-sorted language: element variables and rational
/// literals on the element side, set variables and finite-set literals on the
/// set side.
class Term {
 public:
  static Term elem_var(std::string name);
  static Term elem_lit(Rational value);
  static Term set_var(std::string name);
  static Term set_lit(FiniteSetQ value);

  TermKind kind() const { return kind_; }
  Sort sort() const { return kind_ == TermKind::ElemVar || kind_ == TermKind::ElemLit ? Sort::Element : Sort::Set; }
  bool is_var() const { return kind_ == TermKind::ElemVar || kind_ == TermKind::SetVar; }
  bool is_lit() const { return !is_var(); }

  const std::string& name() const { return name_; }
  const Rational& value() const { return value_; }
  const FiniteSetQ& set_value() const { return set_value_; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

  std::string str() const;

 private:
  TermKind kind_ = TermKind::ElemVar;
  std::string name_;
  Rational value_;
  FiniteSetQ set_value_;
};

enum class FormulaKind {
  True,
  False,
  Less,      // elem < elem
  Equal,     // elem = elem
  RelA,      // A(elem, elem)
  In,        // elem ∈ set
  SetEqual,  // set = set
  Not,
  And,
  Or,
  Implies,
  Exists,     // element quantifier, optional sign guard
  Forall,     // element quantifier, optional sign guard
  ExistsSet,  // finite-set quantifier
  ForallSet,
};

enum class SignGuard { None, Negative, Positive };

class Formula;
using FormulaRef = std::shared_ptr<const Formula>;

/// Immutable formula node. Shared subtrees are fine; rewrites build new nodes.
class Formula {
 public:
  static FormulaRef truth();
  static FormulaRef falsity();
  static FormulaRef boolean(bool b) { return b ? truth() : falsity(); }
  static FormulaRef less(Term a, Term b);
  static FormulaRef equal(Term a, Term b);
  static FormulaRef rel_a(Term a, Term b);
  static FormulaRef membership(Term e, Term s);
  static FormulaRef set_equal(Term a, Term b);
  static FormulaRef negation(FormulaRef f);
  // conjunction/disjunction fold constants and flatten nested nodes of the
  // same kind; empty input yields the unit.
  static FormulaRef conjunction(std::vector<FormulaRef> fs);
  static FormulaRef disjunction(std::vector<FormulaRef> fs);
  static FormulaRef implication(FormulaRef a, FormulaRef b);
  static FormulaRef exists(std::string var, SignGuard g, FormulaRef body);
  static FormulaRef forall(std::string var, SignGuard g, FormulaRef body);
  static FormulaRef exists_set(std::string var, FormulaRef body);
  static FormulaRef forall_set(std::string var, FormulaRef body);
  // Raw node without folding (used by the parser so round trips are exact).
  static FormulaRef raw(FormulaKind k, std::vector<FormulaRef> children, std::vector<Term> terms,
                        std::string var, SignGuard g);

  FormulaKind kind() const { return kind_; }
  bool is_atom() const {
    return kind_ <= FormulaKind::SetEqual;
  }
  bool is_quantifier() const { return kind_ >= FormulaKind::Exists; }

  const std::vector<FormulaRef>& children() const { return children_; }
  const FormulaRef& child(size_t i) const { return children_[i]; }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& lhs() const { return terms_[0]; }
  const Term& rhs() const { return terms_[1]; }
  const std::string& var() const { return var_; }
  SignGuard guard() const { return guard_; }
  Sort bound_sort() const {
    return kind_ == FormulaKind::ExistsSet || kind_ == FormulaKind::ForallSet ? Sort::Set : Sort::Element;
  }

 private:
  FormulaKind kind_;
  std::vector<FormulaRef> children_;
  std::vector<Term> terms_;
  std::string var_;
  SignGuard guard_ = SignGuard::None;
};

struct SortedVar {
  std::string name;
  Sort sort;
  bool operator<(const SortedVar& o) const {
    return name != o.name ? name < o.name : sort < o.sort;
  }
  bool operator==(const SortedVar& o) const { return name == o.name && sort == o.sort; }
};

enum class Language { OrderA, Wmso };

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses the prefix grammar, sort-checks for the requested language, and
// renames shadowed binders so no root-to-leaf path binds a name twice.
FormulaRef parse_formula(std::string_view text, Language lang);

// Canonical text; parse_formula(print_formula(f)) reproduces f node for node.
std::string print_formula(const FormulaRef& f);

// Simultaneous capture-avoiding substitution. Throws SortError on a
// sort-incompatible binding.
FormulaRef substitute(const FormulaRef& f, const std::map<std::string, Term>& bindings);

std::set<SortedVar> free_variables(const FormulaRef& f);

bool structurally_equal(const FormulaRef& a, const FormulaRef& b);

// Language/sort validation on an already-built AST.
void check_language(const FormulaRef& f, Language lang);

// All rational literals occurring in element positions (not inside set literals).
std::vector<Rational> element_literals(const FormulaRef& f);
// All set literals occurring anywhere.
std::vector<FiniteSetQ> set_literals(const FormulaRef& f);
bool contains_kind(const FormulaRef& f, FormulaKind k);

// A name based on `base` not present in `used`; primes are appended.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);
// Every variable name mentioned anywhere (free or bound).
std::set<std::string> all_names(const FormulaRef& f);

}  // namespace opencore
