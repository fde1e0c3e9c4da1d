#include "opencore/order_cell.hpp"

#include <algorithm>
#include <stdexcept>

namespace opencore {

namespace {

std::vector<Rational> normalize_params(std::vector<Rational> params) {
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  return params;
}

}  // namespace

OrderCell::OrderCell(std::vector<std::string> variables, std::vector<Rational> parameters,
                     std::vector<CellBlock> blocks)
    : variables_(std::move(variables)),
      parameters_(std::move(parameters)),
      blocks_(std::move(blocks)),
      var_block_(variables_.size(), SIZE_MAX) {
  for (size_t b = 0; b < blocks_.size(); ++b) {
    std::sort(blocks_[b].vars.begin(), blocks_[b].vars.end());
    for (size_t v : blocks_[b].vars) {
      if (v >= variables_.size() || var_block_[v] != SIZE_MAX)
        throw std::invalid_argument("OrderCell: bad block structure");
      var_block_[v] = b;
    }
  }
  for (size_t v = 0; v < variables_.size(); ++v)
    if (var_block_[v] == SIZE_MAX) throw std::invalid_argument("OrderCell: uncovered variable");
  std::vector<Rational> seen;
  for (const auto& b : blocks_) {
    if (b.vars.empty() && !b.param) throw std::invalid_argument("OrderCell: empty block");
    if (b.param) seen.push_back(*b.param);
  }
  if (seen != parameters_) throw std::invalid_argument("OrderCell: parameters missing or out of order");
}

Order OrderCell::relation(size_t i, size_t j) const {
  size_t bi = block_of(i), bj = block_of(j);
  return bi == bj ? Order::Equal : (bi < bj ? Order::Less : Order::Greater);
}

Order OrderCell::relation_to_param(size_t i, const Rational& c) const {
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].param && *blocks_[b].param == c) {
      size_t bi = block_of(i);
      return bi == b ? Order::Equal : (bi < b ? Order::Less : Order::Greater);
    }
  }
  throw std::invalid_argument("OrderCell: unknown parameter " + c.str());
}

std::optional<Rational> OrderCell::pinned_param(size_t var) const {
  return blocks_[block_of(var)].param;
}

bool OrderCell::contains(const std::vector<Rational>& point) const {
  if (point.size() != variables_.size()) throw std::invalid_argument("OrderCell: arity mismatch");
  std::optional<Rational> prev;
  for (const auto& b : blocks_) {
    std::optional<Rational> value = b.param;
    for (size_t v : b.vars) {
      if (value && point[v] != *value) return false;
      value = point[v];
    }
    if (prev && !(*prev < *value)) return false;
    prev = value;
  }
  return true;
}

FormulaRef OrderCell::to_formula() const {
  auto anchor_term = [&](const CellBlock& b) {
    if (!b.vars.empty()) return Term::elem_var(variables_[b.vars.front()]);
    return Term::elem_lit(*b.param);
  };
  std::vector<FormulaRef> conj;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const CellBlock& b = blocks_[i];
    // within-block equalities, anchored at the parameter when present
    if (b.param) {
      for (size_t v : b.vars)
        conj.push_back(Formula::equal(Term::elem_var(variables_[v]), Term::elem_lit(*b.param)));
    } else {
      for (size_t k = 1; k < b.vars.size(); ++k)
        conj.push_back(Formula::equal(Term::elem_var(variables_[b.vars[0]]),
                                      Term::elem_var(variables_[b.vars[k]])));
    }
    if (i + 1 < blocks_.size())
      conj.push_back(Formula::less(anchor_term(b), anchor_term(blocks_[i + 1])));
  }
  return Formula::conjunction(std::move(conj));
}

std::optional<std::vector<Rational>> OrderCell::representative(
    const std::optional<Rational>& lo, const std::optional<Rational>& hi) const {
  std::vector<std::optional<Rational>> vals(blocks_.size());
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (!blocks_[b].param) continue;
    if (!blocks_[b].vars.empty()) {
      // pinned variables must themselves lie in the ambient interval
      if ((lo && !(*lo < *blocks_[b].param)) || (hi && !(*blocks_[b].param < *hi)))
        return std::nullopt;
    }
    vals[b] = *blocks_[b].param;
  }

  size_t i = 0;
  while (i < blocks_.size()) {
    if (vals[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < blocks_.size() && !vals[j]) ++j;
    // free run [i, j) between anchors, clamped to the ambient interval
    std::optional<Rational> left = i > 0 ? vals[i - 1] : std::nullopt;
    std::optional<Rational> right = j < blocks_.size() ? vals[j] : std::nullopt;
    if (lo && (!left || *left < *lo)) left = *lo;
    if (hi && (!right || *hi < *right)) right = *hi;
    if (left && right && !(*left < *right)) return std::nullopt;
    long k = static_cast<long>(j - i);
    for (long t = 0; t < k; ++t) {
      if (left && right) {
        vals[i + t] = *left + (*right - *left) * Rational::make(t + 1, k + 1);
      } else if (!left && right) {
        vals[i + t] = *right - Rational(k - t);
      } else if (left && !right) {
        vals[i + t] = *left + Rational(t + 1);
      } else {
        vals[i + t] = Rational(t);
      }
    }
    i = j;
  }
  std::vector<Rational> out(variables_.size(), Rational(0));
  for (size_t b = 0; b < blocks_.size(); ++b)
    for (size_t v : blocks_[b].vars) out[v] = *vals[b];
  return out;
}

OrderCell OrderCell::without_variable(size_t var) const {
  std::vector<std::string> vars2;
  std::vector<size_t> remap(variables_.size(), SIZE_MAX);
  for (size_t v = 0; v < variables_.size(); ++v) {
    if (v == var) continue;
    remap[v] = vars2.size();
    vars2.push_back(variables_[v]);
  }
  std::vector<CellBlock> blocks2;
  for (const auto& b : blocks_) {
    CellBlock nb;
    nb.param = b.param;
    for (size_t v : b.vars)
      if (v != var) nb.vars.push_back(remap[v]);
    if (!nb.vars.empty() || nb.param) blocks2.push_back(std::move(nb));
  }
  return OrderCell(std::move(vars2), parameters_, std::move(blocks2));
}

std::string OrderCell::str() const {
  std::string out;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (b) out += " < ";
    bool first = true;
    for (size_t v : blocks_[b].vars) {
      if (!first) out += "=";
      out += variables_[v];
      first = false;
    }
    if (blocks_[b].param) {
      if (!first) out += "=";
      out += blocks_[b].param->str();
    }
  }
  return out;
}

bool OrderCell::operator==(const OrderCell& o) const {
  if (variables_ != o.variables_ || parameters_ != o.parameters_) return false;
  if (blocks_.size() != o.blocks_.size()) return false;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].vars != o.blocks_[b].vars) return false;
    if (blocks_[b].param.has_value() != o.blocks_[b].param.has_value()) return false;
    if (blocks_[b].param && *blocks_[b].param != *o.blocks_[b].param) return false;
  }
  return true;
}

std::vector<OrderCell> enumerate_cells(const std::vector<std::string>& vars,
                                       std::vector<Rational> params) {
  params = normalize_params(std::move(params));
  std::vector<std::vector<CellBlock>> chains;
  {
    std::vector<CellBlock> base;
    for (const auto& p : params) base.push_back({{}, p});
    chains.push_back(std::move(base));
  }
  for (size_t v = 0; v < vars.size(); ++v) {
    std::vector<std::vector<CellBlock>> next;
    for (const auto& chain : chains) {
      for (size_t b = 0; b < chain.size(); ++b) {
        auto joined = chain;
        joined[b].vars.push_back(v);
        next.push_back(std::move(joined));
      }
      for (size_t gap = 0; gap <= chain.size(); ++gap) {
        auto inserted = chain;
        inserted.insert(inserted.begin() + gap, CellBlock{{v}, std::nullopt});
        next.push_back(std::move(inserted));
      }
    }
    chains = std::move(next);
  }
  std::vector<OrderCell> out;
  out.reserve(chains.size());
  for (auto& c : chains) out.emplace_back(vars, params, std::move(c));
  return out;
}

OrderCell cell_of_point(const std::vector<std::string>& vars, const std::vector<Rational>& point,
                        std::vector<Rational> params) {
  if (vars.size() != point.size()) throw std::invalid_argument("cell_of_point: arity mismatch");
  params = normalize_params(std::move(params));
  std::vector<Rational> values = point;
  for (const auto& p : params) values.push_back(p);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<CellBlock> blocks;
  for (const auto& val : values) {
    CellBlock b;
    for (size_t v = 0; v < point.size(); ++v)
      if (point[v] == val) b.vars.push_back(v);
    for (const auto& p : params)
      if (p == val) b.param = p;
    blocks.push_back(std::move(b));
  }
  return OrderCell(vars, std::move(params), std::move(blocks));
}

}  // namespace opencore
