#include "opencore/dlo_qe.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace opencore {

namespace {

constexpr size_t kDnfLimit = 1u << 18;

bool is_order_literal(const FormulaRef& f) {
  return f->kind() == FormulaKind::Less || f->kind() == FormulaKind::Equal;
}

bool atom_mentions(const FormulaRef& f, const std::string& var) {
  for (const auto& t : f->terms())
    if (t.is_var() && t.name() == var) return true;
  return false;
}

// Negation normal form. Negated order atoms expand by trichotomy, so every
// order literal downstream is positive; other atoms keep an explicit Not.
FormulaRef nnf(const FormulaRef& f, bool positive) {
  switch (f->kind()) {
    case FormulaKind::True:
      return Formula::boolean(positive);
    case FormulaKind::False:
      return Formula::boolean(!positive);
    case FormulaKind::Less:
      if (positive) return f;
      return Formula::disjunction(
          {Formula::less(f->rhs(), f->lhs()), Formula::equal(f->lhs(), f->rhs())});
    case FormulaKind::Equal:
      if (positive) return f;
      return Formula::disjunction(
          {Formula::less(f->lhs(), f->rhs()), Formula::less(f->rhs(), f->lhs())});
    case FormulaKind::RelA:
    case FormulaKind::In:
    case FormulaKind::SetEqual:
      return positive ? f : Formula::negation(f);
    case FormulaKind::Not:
      return nnf(f->child(0), !positive);
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<FormulaRef> cs;
      cs.reserve(f->children().size());
      for (const auto& c : f->children()) cs.push_back(nnf(c, positive));
      bool conj = (f->kind() == FormulaKind::And) == positive;
      return conj ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    case FormulaKind::Implies:
      if (positive)
        return Formula::disjunction({nnf(f->child(0), false), nnf(f->child(1), true)});
      return Formula::conjunction({nnf(f->child(0), true), nnf(f->child(1), false)});
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool ex = (f->kind() == FormulaKind::Exists) == positive;
      FormulaRef body = nnf(f->child(0), positive);
      return ex ? Formula::exists(f->var(), f->guard(), std::move(body))
                : Formula::forall(f->var(), f->guard(), std::move(body));
    }
    case FormulaKind::ExistsSet:
    case FormulaKind::ForallSet: {
      bool ex = (f->kind() == FormulaKind::ExistsSet) == positive;
      FormulaRef body = nnf(f->child(0), positive);
      return ex ? Formula::exists_set(f->var(), std::move(body))
                : Formula::forall_set(f->var(), std::move(body));
    }
  }
  return f;
}

using Conjunct = std::vector<FormulaRef>;

void dnf_rec(const FormulaRef& f, std::vector<Conjunct>& out) {
  switch (f->kind()) {
    case FormulaKind::True:
      out.push_back({});
      return;
    case FormulaKind::False:
      return;
    case FormulaKind::Or:
      for (const auto& c : f->children()) dnf_rec(c, out);
      return;
    case FormulaKind::And: {
      std::vector<Conjunct> acc{{}};
      for (const auto& c : f->children()) {
        std::vector<Conjunct> piece;
        dnf_rec(c, piece);
        std::vector<Conjunct> next;
        next.reserve(acc.size() * piece.size());
        for (const auto& a : acc)
          for (const auto& p : piece) {
            Conjunct merged = a;
            merged.insert(merged.end(), p.begin(), p.end());
            next.push_back(std::move(merged));
          }
        acc = std::move(next);
        if (acc.size() > kDnfLimit) throw std::runtime_error("quantifier elimination: DNF blowup");
      }
      for (auto& a : acc) out.push_back(std::move(a));
      if (out.size() > kDnfLimit) throw std::runtime_error("quantifier elimination: DNF blowup");
      return;
    }
    default:
      out.push_back({f});
      return;
  }
}

Term subst_var(const Term& t, const std::string& var, const Term& repl) {
  if (t.is_var() && t.name() == var) return repl;
  return t;
}

// ∃var over a conjunction of positive order literals plus literals that do
// not mention var. Standard dense-order elimination: equalities substitute,
// otherwise each lower bound must sit below each upper bound; density and
// unboundedness absorb everything else.
std::optional<Conjunct> eliminate_from_conjunct(const Conjunct& con, const std::string& var) {
  Conjunct keep;
  std::vector<FormulaRef> var_lits;
  for (const auto& lit : con) {
    if (is_order_literal(lit) && atom_mentions(lit, var)) {
      var_lits.push_back(lit);
    } else {
      if (atom_mentions(lit, var))
        throw SortError("quantified variable '" + var + "' occurs in non-order atom " +
                        print_formula(lit->kind() == FormulaKind::Not ? lit->child(0) : lit));
      keep.push_back(lit);
    }
  }
  // trivial literals
  std::vector<FormulaRef> work;
  for (const auto& lit : var_lits) {
    bool lv = lit->lhs().is_var() && lit->lhs().name() == var;
    bool rv = lit->rhs().is_var() && lit->rhs().name() == var;
    if (lv && rv) {
      if (lit->kind() == FormulaKind::Less) return std::nullopt;  // v < v
      continue;                                                   // v = v
    }
    work.push_back(lit);
  }
  // substitution by an equality witness
  for (const auto& lit : work) {
    if (lit->kind() != FormulaKind::Equal) continue;
    bool lv = lit->lhs().is_var() && lit->lhs().name() == var;
    Term witness = lv ? lit->rhs() : lit->lhs();
    for (const auto& other : work) {
      if (other == lit) continue;
      Term a = subst_var(other->lhs(), var, witness);
      Term b = subst_var(other->rhs(), var, witness);
      keep.push_back(Formula::raw(other->kind(), {}, {std::move(a), std::move(b)}, {}, SignGuard::None));
    }
    return keep;
  }
  std::vector<Term> lows, highs;
  for (const auto& lit : work) {
    if (lit->lhs().is_var() && lit->lhs().name() == var)
      highs.push_back(lit->rhs());
    else
      lows.push_back(lit->lhs());
  }
  for (const auto& l : lows)
    for (const auto& h : highs) keep.push_back(Formula::less(l, h));
  return keep;
}

FormulaRef guard_atom(const std::string& var, SignGuard g) {
  Term v = Term::elem_var(var), zero = Term::elem_lit(Rational(0));
  return g == SignGuard::Negative ? Formula::less(v, zero) : Formula::less(zero, v);
}

FormulaRef exists_elim(const std::string& var, const FormulaRef& qf) {
  std::vector<Conjunct> dnf;
  dnf_rec(nnf(qf, true), dnf);
  std::vector<FormulaRef> out;
  for (const auto& con : dnf) {
    auto reduced = eliminate_from_conjunct(con, var);
    if (!reduced) continue;
    out.push_back(Formula::conjunction(std::move(*reduced)));
  }
  return simplify_order(Formula::disjunction(std::move(out)));
}

FormulaRef elim_rec(const FormulaRef& f) {
  switch (f->kind()) {
    case FormulaKind::RelA:
      throw SortError("A-atom is outside the pure order fragment");
    case FormulaKind::ExistsSet:
    case FormulaKind::ForallSet:
      throw SortError("set quantifier is outside the pure order fragment");
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      FormulaRef body = elim_rec(f->child(0));
      if (f->kind() == FormulaKind::Exists) {
        if (f->guard() != SignGuard::None)
          body = Formula::conjunction({guard_atom(f->var(), f->guard()), std::move(body)});
        return exists_elim(f->var(), body);
      }
      if (f->guard() != SignGuard::None)
        body = Formula::implication(guard_atom(f->var(), f->guard()), std::move(body));
      return simplify_order(Formula::negation(exists_elim(f->var(), Formula::negation(body))));
    }
    default: {
      if (f->is_atom()) return f;
      std::vector<FormulaRef> cs;
      cs.reserve(f->children().size());
      for (const auto& c : f->children()) cs.push_back(elim_rec(c));
      switch (f->kind()) {
        case FormulaKind::Not:
          return Formula::negation(cs[0]);
        case FormulaKind::And:
          return Formula::conjunction(std::move(cs));
        case FormulaKind::Or:
          return Formula::disjunction(std::move(cs));
        case FormulaKind::Implies:
          return Formula::implication(cs[0], cs[1]);
        default:
          return f;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Simplification

std::string term_key(const Term& t) { return t.is_var() ? "v:" + t.name() : "l:" + t.value().str(); }

struct UnionFind {
  std::map<std::string, std::string> parent;
  const std::string& find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return parent.find(x)->second;
    }
    if (it->second == x) return it->second;
    std::string root = find(it->second);
    parent[x] = root;
    return parent.find(x)->second;
  }
  void merge(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
};

// false iff the conjunction of the given order literals is unsatisfiable over
// a dense order: equalities collapse classes, then the strict graph (plus the
// known order of distinct literals) must be acyclic.
bool conjunction_consistent(const std::vector<FormulaRef>& atoms) {
  UnionFind uf;
  std::vector<std::pair<Term, Term>> stricts;
  std::vector<Rational> lits;
  auto note_terms = [&](const FormulaRef& a) {
    for (const auto& t : a->terms()) {
      uf.find(term_key(t));
      if (t.kind() == TermKind::ElemLit) lits.push_back(t.value());
    }
  };
  for (const auto& a : atoms) {
    if (!is_order_literal(a)) continue;
    note_terms(a);
    if (a->kind() == FormulaKind::Equal)
      uf.merge(term_key(a->lhs()), term_key(a->rhs()));
    else
      stricts.emplace_back(a->lhs(), a->rhs());
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    stricts.emplace_back(Term::elem_lit(lits[i]), Term::elem_lit(lits[i + 1]));
  // distinct literals merged into one class -> inconsistent
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    for (size_t j = i + 1; j < lits.size(); ++j)
      if (uf.find(term_key(Term::elem_lit(lits[i]))) == uf.find(term_key(Term::elem_lit(lits[j]))))
        return false;
  std::map<std::string, std::vector<std::string>> graph;
  for (auto& [a, b] : stricts) {
    std::string ra = uf.find(term_key(a)), rb = uf.find(term_key(b));
    if (ra == rb) return false;
    graph[ra].push_back(rb);
  }
  // cycle detection
  std::map<std::string, int> state;
  std::function<bool(const std::string&)> dfs = [&](const std::string& n) -> bool {
    int& s = state[n];
    if (s == 1) return false;
    if (s == 2) return true;
    s = 1;
    for (const auto& m : graph[n])
      if (!dfs(m)) return false;
    s = 2;
    return true;
  };
  for (const auto& [n, _] : graph)
    if (!dfs(n)) return false;
  return true;
}

FormulaRef fold_atom(const FormulaRef& f) {
  const Term &a = f->lhs(), &b = f->rhs();
  if (f->kind() == FormulaKind::Less) {
    if (a == b) return Formula::falsity();
    if (a.is_lit() && b.is_lit()) return Formula::boolean(a.value() < b.value());
  } else if (f->kind() == FormulaKind::Equal) {
    if (a == b) return Formula::truth();
    if (a.is_lit() && b.is_lit()) return Formula::boolean(a.value() == b.value());
  } else if (f->kind() == FormulaKind::SetEqual) {
    if (a == b) return Formula::truth();
    if (a.is_lit() && b.is_lit()) return Formula::boolean(a.set_value() == b.set_value());
  }
  return f;
}

std::vector<FormulaRef> dedupe(std::vector<FormulaRef> fs) {
  std::vector<FormulaRef> out;
  for (auto& f : fs) {
    bool seen = false;
    for (const auto& g : out)
      if (structurally_equal(f, g)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(std::move(f));
  }
  return out;
}

bool has_complement(const std::vector<FormulaRef>& fs) {
  for (const auto& f : fs) {
    if (f->kind() != FormulaKind::Not) continue;
    for (const auto& g : fs)
      if (structurally_equal(f->child(0), g)) return true;
  }
  return false;
}

}  // namespace

FormulaRef simplify_order(const FormulaRef& f) {
  switch (f->kind()) {
    case FormulaKind::Less:
    case FormulaKind::Equal:
    case FormulaKind::SetEqual:
      return fold_atom(f);
    case FormulaKind::Not:
      return Formula::negation(simplify_order(f->child(0)));
    case FormulaKind::And: {
      std::vector<FormulaRef> cs;
      for (const auto& c : f->children()) cs.push_back(simplify_order(c));
      FormulaRef flat = Formula::conjunction(std::move(cs));
      if (flat->kind() != FormulaKind::And) return flat;
      auto kids = dedupe(flat->children());
      if (has_complement(kids) || !conjunction_consistent(kids)) return Formula::falsity();
      return Formula::conjunction(std::move(kids));
    }
    case FormulaKind::Or: {
      std::vector<FormulaRef> cs;
      for (const auto& c : f->children()) cs.push_back(simplify_order(c));
      FormulaRef flat = Formula::disjunction(std::move(cs));
      if (flat->kind() != FormulaKind::Or) return flat;
      auto kids = dedupe(flat->children());
      if (has_complement(kids)) return Formula::truth();
      return Formula::disjunction(std::move(kids));
    }
    case FormulaKind::Implies:
      return Formula::implication(simplify_order(f->child(0)), simplify_order(f->child(1)));
    case FormulaKind::Exists:
      return Formula::exists(f->var(), f->guard(), simplify_order(f->child(0)));
    case FormulaKind::Forall:
      return Formula::forall(f->var(), f->guard(), simplify_order(f->child(0)));
    case FormulaKind::ExistsSet:
      return Formula::exists_set(f->var(), simplify_order(f->child(0)));
    case FormulaKind::ForallSet:
      return Formula::forall_set(f->var(), simplify_order(f->child(0)));
    default:
      return f;
  }
}

FormulaRef eliminate_quantifiers(const FormulaRef& f) { return simplify_order(elim_rec(f)); }

// ---------------------------------------------------------------------------
// Semantic evaluation over (ℚ, <)

namespace {

Rational eval_term(const Term& t, const std::map<std::string, Rational>& env) {
  if (t.kind() == TermKind::ElemLit) return t.value();
  if (t.kind() == TermKind::ElemVar) {
    auto it = env.find(t.name());
    if (it == env.end()) throw std::invalid_argument("evaluate_order: unassigned variable " + t.name());
    return it->second;
  }
  throw SortError("evaluate_order: set-sorted term " + t.str());
}

std::vector<Rational> quantifier_candidates(const FormulaRef& body, const std::string& var,
                                            SignGuard g, const std::map<std::string, Rational>& env) {
  std::vector<Rational> anchors;
  for (const auto& v : free_variables(body)) {
    if (v.name == var || v.sort != Sort::Element) continue;
    auto it = env.find(v.name);
    if (it != env.end()) anchors.push_back(it->second);
  }
  for (const auto& r : element_literals(body)) anchors.push_back(r);
  if (g != SignGuard::None) anchors.push_back(Rational(0));
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  std::vector<Rational> cands;
  if (anchors.empty()) {
    cands.push_back(Rational(0));
  } else {
    cands.push_back(anchors.front() - Rational(1));
    for (size_t i = 0; i < anchors.size(); ++i) {
      cands.push_back(anchors[i]);
      if (i + 1 < anchors.size()) cands.push_back(Rational::midpoint(anchors[i], anchors[i + 1]));
    }
    cands.push_back(anchors.back() + Rational(1));
  }
  if (g == SignGuard::Negative) {
    std::vector<Rational> filtered;
    for (auto& c : cands)
      if (c.is_negative()) filtered.push_back(c);
    return filtered;
  }
  if (g == SignGuard::Positive) {
    std::vector<Rational> filtered;
    for (auto& c : cands)
      if (c.is_positive()) filtered.push_back(c);
    return filtered;
  }
  return cands;
}

}  // namespace

bool evaluate_order(const FormulaRef& f, const std::map<std::string, Rational>& env) {
  switch (f->kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Less:
      return eval_term(f->lhs(), env) < eval_term(f->rhs(), env);
    case FormulaKind::Equal:
      return eval_term(f->lhs(), env) == eval_term(f->rhs(), env);
    case FormulaKind::Not:
      return !evaluate_order(f->child(0), env);
    case FormulaKind::And:
      for (const auto& c : f->children())
        if (!evaluate_order(c, env)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& c : f->children())
        if (evaluate_order(c, env)) return true;
      return false;
    case FormulaKind::Implies:
      return !evaluate_order(f->child(0), env) || evaluate_order(f->child(1), env);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool ex = f->kind() == FormulaKind::Exists;
      auto cands = quantifier_candidates(f->child(0), f->var(), f->guard(), env);
      std::map<std::string, Rational> env2 = env;
      for (const auto& c : cands) {
        env2.insert_or_assign(f->var(), c);
        bool v = evaluate_order(f->child(0), env2);
        if (ex && v) return true;
        if (!ex && !v) return false;
      }
      return !ex;
    }
    default:
      throw SortError("evaluate_order: atom outside the order fragment: " + print_formula(f));
  }
}

// ---------------------------------------------------------------------------
// Cell decomposition and unary descriptions

std::vector<OrderCell> decompose_to_cells(const FormulaRef& f, const std::vector<std::string>& vars,
                                          std::vector<Rational> params,
                                          const std::optional<Rational>& lo,
                                          const std::optional<Rational>& hi) {
  std::vector<OrderCell> out;
  for (auto& cell : enumerate_cells(vars, std::move(params))) {
    auto rep = cell.representative(lo, hi);
    if (!rep) continue;  // cell has no points in the ambient interval
    std::map<std::string, Rational> env;
    for (size_t i = 0; i < vars.size(); ++i) env.emplace(vars[i], (*rep)[i]);
    if (evaluate_order(f, env)) out.push_back(std::move(cell));
  }
  return out;
}

IntervalUnion describe_unary(const FormulaRef& f) {
  auto fv = free_variables(f);
  if (fv.size() > 1) throw std::invalid_argument("describe_unary: formula must have one free variable");
  std::string var = fv.empty() ? std::string("x") : fv.begin()->name;
  FormulaRef qf = eliminate_quantifiers(f);
  std::vector<Rational> params = element_literals(qf);
  std::vector<IntervalUnion::Part> parts;
  for (const auto& cell : decompose_to_cells(qf, {var}, params)) {
    size_t b = cell.block_of(0);
    const auto& blocks = cell.blocks();
    if (blocks[b].param) {
      parts.push_back(IntervalUnion::point_part(*blocks[b].param));
    } else {
      std::optional<Rational> lo, hi;
      if (b > 0) lo = *blocks[b - 1].param;
      if (b + 1 < blocks.size()) hi = *blocks[b + 1].param;
      parts.push_back(IntervalUnion::interval_part(std::move(lo), std::move(hi)));
    }
  }
  return IntervalUnion::normalized(std::move(parts));
}

// ---------------------------------------------------------------------------
// IntervalUnion

namespace {

// ordering key for part lower ends: -inf < (value, point) < (value, open-start)
struct LowerKey {
  bool neg_inf;
  Rational value;
  int tie;  // 0 = point, 1 = interval start
  bool operator<(const LowerKey& o) const {
    if (neg_inf != o.neg_inf) return neg_inf;
    if (neg_inf) return false;
    if (value != o.value) return value < o.value;
    return tie < o.tie;
  }
};

LowerKey lower_key(const IntervalUnion::Part& p) {
  if (p.is_point) return {false, p.point, 0};
  if (!p.lo) return {true, Rational(0), 1};
  return {false, *p.lo, 1};
}

bool interval_contains(const IntervalUnion::Part& iv, const Rational& x) {
  if (iv.lo && !(*iv.lo < x)) return false;
  if (iv.hi && !(x < *iv.hi)) return false;
  return true;
}

// hi comparison where nullopt = +inf
bool hi_less(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

}  // namespace

IntervalUnion IntervalUnion::normalized(std::vector<Part> parts) {
  // drop empty intervals
  std::vector<Part> in;
  for (auto& p : parts) {
    if (!p.is_point && p.lo && p.hi && !(*p.lo < *p.hi)) continue;
    in.push_back(std::move(p));
  }
  std::sort(in.begin(), in.end(),
            [](const Part& a, const Part& b) { return lower_key(a) < lower_key(b); });
  // merge overlapping intervals, drop covered/duplicate points
  std::vector<Part> merged;
  for (auto& p : in) {
    if (!merged.empty()) {
      Part& last = merged.back();
      if (!last.is_point && !p.is_point) {
        bool overlap = !p.lo || (last.hi && *p.lo < *last.hi) || !last.hi;
        if (overlap) {
          if (hi_less(last.hi, p.hi)) last.hi = p.hi;
          continue;
        }
      }
      if (!last.is_point && p.is_point && interval_contains(last, p.point)) continue;
      if (last.is_point && p.is_point && last.point == p.point) continue;
    }
    merged.push_back(std::move(p));
  }
  // bridge interval-point-interval at shared endpoints
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 2 < merged.size(); ++i) {
      Part &a = merged[i], &b = merged[i + 1], &c = merged[i + 2];
      if (!a.is_point && b.is_point && !c.is_point && a.hi && *a.hi == b.point && c.lo &&
          *c.lo == b.point) {
        a.hi = c.hi;
        merged.erase(merged.begin() + i + 1, merged.begin() + i + 3);
        changed = true;
        break;
      }
    }
  }
  IntervalUnion u;
  u.parts_ = std::move(merged);
  return u;
}

bool IntervalUnion::contains(const Rational& x) const {
  for (const auto& p : parts_) {
    if (p.is_point) {
      if (p.point == x) return true;
    } else if (interval_contains(p, x)) {
      return true;
    }
  }
  return false;
}

std::string IntervalUnion::str() const {
  if (parts_.empty()) return "empty";
  std::string out;
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += " u ";
    const Part& p = parts_[i];
    if (p.is_point) {
      out += "{" + p.point.str() + "}";
    } else {
      out += "(" + (p.lo ? p.lo->str() : "-inf") + ", " + (p.hi ? p.hi->str() : "+inf") + ")";
    }
  }
  return out;
}

bool IntervalUnion::operator==(const IntervalUnion& o) const {
  if (parts_.size() != o.parts_.size()) return false;
  for (size_t i = 0; i < parts_.size(); ++i) {
    const Part &a = parts_[i], &b = o.parts_[i];
    if (a.is_point != b.is_point) return false;
    if (a.is_point) {
      if (a.point != b.point) return false;
    } else {
      if (a.lo.has_value() != b.lo.has_value() || a.hi.has_value() != b.hi.has_value()) return false;
      if (a.lo && *a.lo != *b.lo) return false;
      if (a.hi && *a.hi != *b.hi) return false;
    }
  }
  return true;
}

}  // namespace opencore
