#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opencore/formula.hpp"
#include "opencore/rational.hpp"

namespace opencore {

/// One block of a complete order cell: a set of variables (indices into the
/// cell's variable list) sharing a value, possibly pinned to a parameter.
/// Parameter-only blocks (empty vars) keep parameters at their true position.
struct CellBlock {
  std::vector<size_t> vars;
  std::optional<Rational> param;
};

enum class Order { Less, Equal, Greater };

/// A complete order cell: a chain of blocks in strictly increasing order that
/// decides every order relation among the variables and the parameters.
class OrderCell {
 public:
  OrderCell(std::vector<std::string> variables, std::vector<Rational> parameters,
            std::vector<CellBlock> blocks);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Rational>& parameters() const { return parameters_; }
  const std::vector<CellBlock>& blocks() const { return blocks_; }

  size_t block_of(size_t var) const { return var_block_.at(var); }
  Order relation(size_t i, size_t j) const;
  Order relation_to_param(size_t i, const Rational& c) const;
  // The parameter the variable is pinned to, if its block carries one.
  std::optional<Rational> pinned_param(size_t var) const;

  bool contains(const std::vector<Rational>& point) const;

  // Quantifier-free conjunction equivalent to the cell (chain form).
  FormulaRef to_formula() const;

  // Deterministic point inside the cell, restricted to the open ambient
  // interval (lo, hi); disengaged endpoints mean unbounded. Parameter blocks
  // take the parameter; runs of free blocks are spaced evenly between their
  // anchors, and step by one past the extremes. Returns nullopt when the
  // cell has no points inside the ambient interval.
  std::optional<std::vector<Rational>> representative(const std::optional<Rational>& lo,
                                                      const std::optional<Rational>& hi) const;

  // Cell over the remaining variables after deleting one variable. Its block
  // survives (other members or a parameter) or disappears if it was alone.
  OrderCell without_variable(size_t var) const;

  std::string str() const;
  bool operator==(const OrderCell& o) const;

 private:
  std::vector<std::string> variables_;
  std::vector<Rational> parameters_;  // sorted, distinct
  std::vector<CellBlock> blocks_;
  std::vector<size_t> var_block_;
};

// All complete order cells over C in the given variables. Parameters are
// deduplicated and sorted first.
std::vector<OrderCell> enumerate_cells(const std::vector<std::string>& vars,
                                       std::vector<Rational> params);

// The unique cell over C containing the point.
OrderCell cell_of_point(const std::vector<std::string>& vars, const std::vector<Rational>& point,
                        std::vector<Rational> params);

}  // namespace opencore
