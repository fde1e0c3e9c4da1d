#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opencore/formula.hpp"

using namespace opencore;

TEST_CASE("parsing the order language") {
  auto f = parse_formula("(exists t (and (< t 0) (A t y)))", Language::OrderA);
  CHECK(f->kind() == FormulaKind::Exists);
  CHECK(f->var() == "t");
  CHECK(print_formula(f) == "(exists t (and (< t 0) (A t y)))");
  auto fv = free_variables(f);
  CHECK(fv.size() == 1);
  CHECK(fv.begin()->name == "y");
}

TEST_CASE("parsing the weak monadic language") {
  auto f = parse_formula("(in y (set 1/2 3))", Language::Wmso);
  CHECK(f->kind() == FormulaKind::In);
  CHECK(f->lhs().sort() == Sort::Element);
  CHECK(f->rhs().kind() == TermKind::SetLit);
  CHECK(f->rhs().set_value() == FiniteSetQ{Rational::make(1, 2), Rational(3)});

  CHECK_THROWS_AS(parse_formula("(in (set 1) y)", Language::Wmso), SortError);
  CHECK_THROWS_AS(parse_formula("(A x y)", Language::Wmso), SortError);
  CHECK_THROWS_AS(parse_formula("(in x S)", Language::OrderA), SortError);
}

TEST_CASE("set variables are inferred from context") {
  auto f = parse_formula("(forall-set S (imp (in y S) (in y S)))", Language::Wmso);
  CHECK(print_formula(f) == "(forall-set S (imp (in y S) (in y S)))");
  auto g = parse_formula("(and (in y T) (= T (set 1)))", Language::Wmso);
  CHECK(g->child(1)->kind() == FormulaKind::SetEqual);
  auto h = parse_formula("(exists-set F1 (exists-set F2 (= F1 F2)))", Language::Wmso);
  CHECK(h->child(0)->child(0)->kind() == FormulaKind::SetEqual);
}

TEST_CASE("sort errors name the offending atom") {
  try {
    parse_formula("(and (in y S) (< S 1))", Language::Wmso);
    FAIL("expected SortError");
  } catch (const SortError& e) {
    CHECK(std::string(e.what()).find("S") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_formula("(and (< x y) (< x", Language::OrderA);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position > 0);
  }
  CHECK_THROWS_AS(parse_formula("(frob x y)", Language::OrderA), ParseError);
  CHECK_THROWS_AS(parse_formula("", Language::OrderA), ParseError);
}

TEST_CASE("printing is canonical") {
  CHECK(print_formula(Formula::less(Term::elem_var("x"), Term::elem_var("y"))) == "(< x y)");
  CHECK(print_formula(Formula::negation(Formula::equal(Term::elem_var("x"), Term::elem_lit(Rational(0))))) ==
        "(not (= x 0))");
}

TEST_CASE("shadowed binders are renamed at parse time") {
  auto f = parse_formula("(exists t (and (< t x) (exists t (< t x))))", Language::OrderA);
  CHECK(print_formula(f) == "(exists t (and (< t x) (exists t' (< t' x))))");
}

TEST_CASE("substitution examples") {
  auto f = parse_formula("(< t x)", Language::OrderA);
  auto g = substitute(f, {{"t", Term::elem_var("x_j")}});
  CHECK(print_formula(g) == "(< x_j x)");

  auto a = parse_formula("(A t y)", Language::OrderA);
  auto b = substitute(a, {{"t", Term::elem_lit(Rational::make(-1, 2))}});
  CHECK(print_formula(b) == "(A -1/2 y)");

  auto q = parse_formula("(exists t (< t x))", Language::OrderA);
  auto r = substitute(q, {{"x", Term::elem_var("t")}});
  CHECK(print_formula(r) == "(exists t' (< t' t))");

  CHECK_THROWS_AS(substitute(parse_formula("(in y S)", Language::Wmso),
                             {{"S", Term::elem_var("z")}}),
                  SortError);
}

TEST_CASE("free variables examples") {
  auto f = parse_formula("(exists t (and (< t x) (A t y)))", Language::OrderA);
  auto fv = free_variables(f);
  CHECK(fv == std::set<SortedVar>{{"x", Sort::Element}, {"y", Sort::Element}});
  CHECK(free_variables(parse_formula("(< x 0)", Language::OrderA)) ==
        std::set<SortedVar>{{"x", Sort::Element}});
  CHECK(free_variables(parse_formula("(forall-set S (in y S))", Language::Wmso)) ==
        std::set<SortedVar>{{"y", Sort::Element}});
}

// ---------------------------------------------------------------------------
// Random round-trip property

namespace {

struct Gen {
  std::mt19937_64 rng;
  std::vector<std::pair<std::string, Sort>> scope;
  bool wmso;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Rational lit() {
    long n = pick(20) + 1;
    long d = pick(20) + 1;
    return wmso ? Rational::make(n, d) : Rational::make(n - 10, d);
  }

  Term elem_term() {
    std::vector<std::string> evars;
    for (auto& [n, s] : scope)
      if (s == Sort::Element) evars.push_back(n);
    if (!evars.empty() && pick(2) == 0) return Term::elem_var(evars[pick((int)evars.size())]);
    return Term::elem_lit(lit());
  }

  Term set_term() {
    std::vector<std::string> svars;
    for (auto& [n, s] : scope)
      if (s == Sort::Set) svars.push_back(n);
    if (!svars.empty() && pick(2) == 0) return Term::set_var(svars[pick((int)svars.size())]);
    std::vector<Rational> es;
    for (int i = 0, k = pick(3); i < k; ++i) es.push_back(Rational::make(pick(9) + 1, pick(9) + 1));
    return Term::set_lit(FiniteSetQ(std::move(es)));
  }

  FormulaRef atom() {
    if (wmso) {
      switch (pick(4)) {
        case 0:
          return Formula::membership(elem_term(), set_term());
        case 1: {
          // keep one operand a literal so sorts re-infer on reparse
          return Formula::set_equal(set_term(), Term::set_lit(FiniteSetQ{Rational(1)}));
        }
        case 2:
          return Formula::less(elem_term(), elem_term());
        default:
          return Formula::equal(elem_term(), elem_term());
      }
    }
    switch (pick(3)) {
      case 0:
        return Formula::rel_a(elem_term(), elem_term());
      case 1:
        return Formula::less(elem_term(), elem_term());
      default:
        return Formula::equal(elem_term(), elem_term());
    }
  }

  FormulaRef formula(int depth) {
    if (depth == 0) return atom();
    switch (pick(6)) {
      case 0:
        return atom();
      case 1:
        return Formula::raw(FormulaKind::Not, {formula(depth - 1)}, {}, {}, SignGuard::None);
      case 2: {
        std::vector<FormulaRef> cs;
        for (int i = 0, k = pick(2) + 1; i <= k; ++i) cs.push_back(formula(depth - 1));
        return Formula::raw(pick(2) ? FormulaKind::And : FormulaKind::Or, std::move(cs), {}, {},
                            SignGuard::None);
      }
      case 3:
        return Formula::raw(FormulaKind::Implies, {formula(depth - 1), formula(depth - 1)}, {}, {},
                            SignGuard::None);
      case 4: {
        std::string v = "v" + std::to_string(scope.size());
        scope.emplace_back(v, Sort::Element);
        auto body = formula(depth - 1);
        scope.pop_back();
        SignGuard g = wmso ? SignGuard::None
                           : std::array{SignGuard::None, SignGuard::Negative, SignGuard::Positive}[pick(3)];
        return Formula::raw(pick(2) ? FormulaKind::Exists : FormulaKind::Forall, {std::move(body)}, {}, v,
                            g);
      }
      default: {
        if (!wmso) return atom();
        std::string v = "W" + std::to_string(scope.size());
        scope.emplace_back(v, Sort::Set);
        auto body = formula(depth - 1);
        scope.pop_back();
        return Formula::raw(pick(2) ? FormulaKind::ExistsSet : FormulaKind::ForallSet, {std::move(body)},
                            {}, v, SignGuard::None);
      }
    }
  }
};

}  // namespace

TEST_CASE("parse/print round trip on random well-sorted trees") {
  for (int lang = 0; lang < 2; ++lang) {
    Gen g{std::mt19937_64(42 + lang), {}, lang == 1};
    for (int i = 0; i < 5000; ++i) {
      auto f = g.formula(1 + (i % 6));
      std::string s = print_formula(f);
      auto f2 = parse_formula(s, lang ? Language::Wmso : Language::OrderA);
      CHECK(structurally_equal(f, f2));
      if (!structurally_equal(f, f2)) {
        CAPTURE(s);
        break;
      }
    }
  }
}

TEST_CASE("substitute commutes with free_variables") {
  Gen g{std::mt19937_64(99), {}, false};
  for (int i = 0; i < 2000; ++i) {
    auto f = g.formula(1 + (i % 5));
    auto fv = free_variables(f);
    if (fv.empty()) continue;
    std::string victim = fv.begin()->name;
    std::map<std::string, Term> sub{{victim, Term::elem_var("fresh_w")}};
    auto f2 = substitute(f, sub);
    auto fv2 = free_variables(f2);
    std::set<SortedVar> expected;
    for (auto& v : fv)
      if (v.name != victim) expected.insert(v);
    expected.insert({"fresh_w", Sort::Element});
    CHECK(fv2 == expected);
  }
}
