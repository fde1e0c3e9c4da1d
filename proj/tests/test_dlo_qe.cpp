#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opencore/dlo_qe.hpp"
#include "oracles.hpp"

using namespace opencore;

namespace {

FormulaRef po(const std::string& s) { return parse_formula(s, Language::OrderA); }

// semantic equivalence of two order formulas: agreement at one representative
// per cell of the combined free variables and parameters
bool order_equivalent(const FormulaRef& a, const FormulaRef& b) {
  std::set<SortedVar> fv = free_variables(a);
  for (const auto& v : free_variables(b)) fv.insert(v);
  std::vector<std::string> vars;
  for (const auto& v : fv) vars.push_back(v.name);
  std::vector<Rational> params = element_literals(a);
  for (const auto& p : element_literals(b)) params.push_back(p);
  for (const auto& cell : enumerate_cells(vars, params)) {
    auto rep = cell.representative(std::nullopt, std::nullopt);
    REQUIRE(rep.has_value());
    std::map<std::string, Rational> env;
    for (size_t i = 0; i < vars.size(); ++i) env.emplace(vars[i], (*rep)[i]);
    if (evaluate_order(a, env) != evaluate_order(b, env)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cell enumeration counts") {
  CHECK(enumerate_cells({"x"}, {Rational(-2)}).size() == 3);
  CHECK(enumerate_cells({"x1", "x2"}, {}).size() == 3);
  CHECK(enumerate_cells({"x1", "x2"}, {Rational(-2)}).size() == 13);
  CHECK(enumerate_cells({"x1", "x2"}, {Rational(-2), Rational(-1)}).size() ==
        oracles::count_weak_orders_brute_force(2, 2));
  CHECK(enumerate_cells({"x1", "x2", "x3"}, {Rational(1)}).size() ==
        oracles::count_weak_orders_brute_force(3, 1));
  // the 13 matches the independent brute-force enumeration of weak orders
  CHECK(oracles::count_weak_orders_brute_force(2, 1) == 13);
}

TEST_CASE("duplicate parameters are deduplicated") {
  CHECK(enumerate_cells({"x"}, {Rational(-2), Rational(-2)}).size() == 3);
}

TEST_CASE("cell_of_point examples") {
  auto c1 = cell_of_point({"x1", "x2"}, {Rational(-2), Rational(-1)}, {});
  CHECK(c1.relation(0, 1) == Order::Less);
  auto c2 = cell_of_point({"x1", "x2"}, {Rational(-1), Rational(-1)}, {});
  CHECK(c2.relation(0, 1) == Order::Equal);
  auto c3 = cell_of_point({"x1", "x2"}, {Rational(-3), Rational(-1)}, {Rational(-2)});
  CHECK(c3.relation_to_param(0, Rational(-2)) == Order::Less);
  CHECK(c3.relation_to_param(1, Rational(-2)) == Order::Greater);
  CHECK(c3.str() == "x1 < -2 < x2");
}

TEST_CASE("partition property: exactly one cell contains each point") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long> num(-12, 12);
  std::uniform_int_distribution<long> den(1, 6);
  std::uniform_int_distribution<int> rd(1, 3), cd(0, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    int r = rd(rng);
    std::vector<std::string> vars;
    for (int i = 0; i < r; ++i) vars.push_back("x" + std::to_string(i + 1));
    std::vector<Rational> params;
    for (int i = 0, k = cd(rng); i < k; ++i) params.push_back(Rational::make(num(rng), den(rng)));
    std::vector<Rational> point;
    for (int i = 0; i < r; ++i) point.push_back(Rational::make(num(rng), den(rng)));
    int hits = 0;
    for (const auto& cell : enumerate_cells(vars, params))
      if (cell.contains(point)) ++hits;
    CHECK(hits == 1);
    CHECK(cell_of_point(vars, point, params).contains(point));
  }
}

TEST_CASE("representatives land inside their cell") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<long> num(-12, 12);
  std::uniform_int_distribution<long> den(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> params;
    for (int i = 0; i < 2; ++i) params.push_back(Rational::make(num(rng), den(rng)));
    for (const auto& cell : enumerate_cells({"x1", "x2"}, params)) {
      auto rep = cell.representative(std::nullopt, std::nullopt);
      REQUIRE(rep.has_value());
      CHECK(cell.contains(*rep));
    }
  }
}

TEST_CASE("representatives respect ambient bounds") {
  // cell -2 < x < 3 clipped to (-inf, 0) still gets a representative
  for (const auto& cell : enumerate_cells({"x"}, {Rational(-2), Rational(3)})) {
    auto rep = cell.representative(std::nullopt, Rational(0));
    if (!rep) continue;
    CHECK((*rep)[0] < Rational(0));
    CHECK(cell.contains(*rep));
  }
  // the cell x = 3 must report emptiness under that ambient
  auto pinned = cell_of_point({"x"}, {Rational(3)}, {Rational(-2), Rational(3)});
  CHECK(!pinned.representative(std::nullopt, Rational(0)).has_value());
}

TEST_CASE("quantifier elimination examples") {
  CHECK(print_formula(eliminate_quantifiers(po("(exists z (and (< x z) (< z y)))"))) == "(< x y)");
  CHECK(print_formula(eliminate_quantifiers(po("(exists z (< z x))"))) == "true");
  auto f = eliminate_quantifiers(po("(forall z (imp (< x z) (< y z)))"));
  CHECK(order_equivalent(f, po("(or (< y x) (= y x))")));
  CHECK(!contains_kind(f, FormulaKind::Exists));
  CHECK(!contains_kind(f, FormulaKind::Forall));
}

TEST_CASE("quantifier elimination with guards and parameters") {
  CHECK(print_formula(eliminate_quantifiers(po("(exists-neg t (< t x))"))) == "true");
  // ∃t<0 (x<t): needs x below some negative, i.e. x < 0
  auto f = eliminate_quantifiers(po("(exists-neg t (< x t))"));
  CHECK(order_equivalent(f, po("(< x 0)")));
  auto g = eliminate_quantifiers(po("(exists z (and (< -1 z) (< z x) (not (= z 0))))"));
  CHECK(order_equivalent(g, po("(< -1 x)")));
}

TEST_CASE("non-order atoms are rejected") {
  CHECK_THROWS_AS(eliminate_quantifiers(po("(A x y)")), SortError);
  CHECK_THROWS_AS(eliminate_quantifiers(parse_formula("(exists z (in z S))", Language::Wmso)),
                  SortError);
}

namespace {

struct QeGen {
  std::mt19937_64 rng;
  std::vector<std::string> scope;
  int quantifiers_left;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term term() {
    static const long params[] = {-2, -1, 0, 1};
    if (!scope.empty() && pick(10) < 7) return Term::elem_var(scope[pick((int)scope.size())]);
    return Term::elem_lit(Rational(params[pick(4)]));
  }

  FormulaRef atom() { return pick(2) ? Formula::less(term(), term()) : Formula::equal(term(), term()); }

  FormulaRef gen(int depth) {
    if (depth == 0) return atom();
    switch (pick(6)) {
      case 0:
        return atom();
      case 1:
        return Formula::negation(gen(depth - 1));
      case 2:
        return Formula::conjunction({gen(depth - 1), gen(depth - 1)});
      case 3:
        return Formula::disjunction({gen(depth - 1), gen(depth - 1)});
      case 4:
        return Formula::implication(gen(depth - 1), gen(depth - 1));
      default: {
        if (quantifiers_left == 0) return atom();
        --quantifiers_left;
        std::string v = "q" + std::to_string(scope.size());
        scope.push_back(v);
        auto body = gen(depth - 1);
        scope.pop_back();
        SignGuard g = std::array{SignGuard::None, SignGuard::Negative, SignGuard::Positive}[pick(3)];
        auto out = pick(2) ? Formula::exists(v, g, body) : Formula::forall(v, g, body);
        return out;
      }
    }
  }
};

}  // namespace

TEST_CASE("QE agrees with the cell-sampling evaluator on a random corpus") {
  std::mt19937_64 seed_rng(31);
  int checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    QeGen g{std::mt19937_64(seed_rng()), {}, 2};
    int nvars = 1 + g.pick(3);
    for (int i = 0; i < nvars; ++i) g.scope.push_back("x" + std::to_string(i + 1));
    auto f = g.gen(3);
    auto qf = eliminate_quantifiers(f);
    CHECK(!contains_kind(qf, FormulaKind::Exists));
    CHECK(!contains_kind(qf, FormulaKind::Forall));
    // agreement on every cell representative of free vars + all parameters
    std::set<SortedVar> fv = free_variables(f);
    std::vector<std::string> vars;
    for (const auto& v : fv) vars.push_back(v.name);
    std::vector<Rational> params = element_literals(f);
    for (const auto& p : element_literals(qf)) params.push_back(p);
    for (const auto& cell : enumerate_cells(vars, params)) {
      auto rep = cell.representative(std::nullopt, std::nullopt);
      REQUIRE(rep.has_value());
      std::map<std::string, Rational> env;
      for (size_t i = 0; i < vars.size(); ++i) env.emplace(vars[i], (*rep)[i]);
      bool lhs = evaluate_order(qf, env);
      bool rhs = evaluate_order(f, env);
      if (lhs != rhs) {
        CAPTURE(print_formula(f));
        CAPTURE(print_formula(qf));
        CAPTURE(cell.str());
      }
      REQUIRE(lhs == rhs);
      ++checked;
    }
  }
  CHECK(checked > 600);
}

TEST_CASE("decompose_to_cells") {
  auto cells = decompose_to_cells(po("(or (< x1 x2) (= x1 x2))"), {"x1", "x2"}, {});
  CHECK(cells.size() == 2);
  auto all3 = decompose_to_cells(po("(= x x)"), {"x"}, {Rational(-2)});
  CHECK(all3.size() == 3);
  auto one = decompose_to_cells(po("(and (not (= x -2)) (< x -2))"), {"x"}, {Rational(-2)});
  CHECK(one.size() == 1);
  CHECK(one[0].str() == "x < -2");
}

TEST_CASE("describe_unary examples") {
  auto u = describe_unary(po("(or (< x 3) (= x 5))"));
  CHECK(u.str() == "(-inf, 3) u {5}");
  CHECK(describe_unary(po("(= x x)")).str() == "(-inf, +inf)");
  CHECK(describe_unary(po("(exists z (and (< x z) (< z x)))")).is_empty());
  CHECK_THROWS_AS(describe_unary(po("(< x y)")), std::invalid_argument);
}

TEST_CASE("describe_unary merging") {
  // (x<0 ∨ x=0 ∨ 0<x<1) = (-inf, 1)
  auto u = describe_unary(po("(or (< x 0) (= x 0) (and (< 0 x) (< x 1)))"));
  CHECK(u.str() == "(-inf, 1)");
  // punctured line keeps the gap
  auto v = describe_unary(po("(not (= x 0))"));
  CHECK(v.str() == "(-inf, 0) u (0, +inf)");
}

TEST_CASE("describe_unary agrees with direct evaluation at samples") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> num(-40, 40);
  std::uniform_int_distribution<long> den(1, 12);
  const char* formulas[] = {
      "(or (< x 3) (= x 5))",
      "(and (< -2 x) (< x 7))",
      "(exists z (and (< x z) (< z 2)))",
      "(forall z (imp (< 1 z) (< x z)))",
      "(or (= x -1/2) (and (< 0 x) (not (= x 2))))",
  };
  for (const char* s : formulas) {
    auto f = po(s);
    auto u = describe_unary(f);
    for (const auto& p : u.parts()) {
      // parts sorted and pairwise disjoint: spot check by containment count
      (void)p;
    }
    for (int i = 0; i < 1000; ++i) {
      Rational x = Rational::make(num(rng), den(rng));
      CHECK(u.contains(x) == evaluate_order(f, {{"x", x}}));
    }
  }
}

TEST_CASE("interval union normalization") {
  using IU = IntervalUnion;
  auto u = IU::normalized({IU::interval_part(Rational(0), Rational(1)),
                           IU::point_part(Rational(1)),
                           IU::interval_part(Rational(1), Rational(2))});
  CHECK(u.str() == "(0, 2)");
  auto v = IU::normalized({IU::interval_part(Rational(0), Rational(2)),
                           IU::interval_part(Rational(1), Rational(3))});
  CHECK(v.str() == "(0, 3)");
  auto w = IU::normalized({IU::point_part(Rational(1)), IU::interval_part(Rational(0), Rational(2))});
  CHECK(w.str() == "(0, 2)");
  auto z = IU::normalized({IU::interval_part(std::nullopt, Rational(0)),
                           IU::interval_part(Rational(0), std::nullopt)});
  CHECK(z.str() == "(-inf, 0) u (0, +inf)");
}
