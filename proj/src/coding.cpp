#include "opencore/coding.hpp"

#include <algorithm>
#include <stdexcept>

namespace opencore::coding {

namespace {

constexpr unsigned long kMaxCodeExponent = 1ul << 20;

}  // namespace

Rational enum_positive_rational(const mpz_class& i) {
  if (i < 0) throw std::invalid_argument("enum_positive_rational: negative index");
  // path from the root: peel child steps off the index (children of node k
  // are 2k+1 and 2k+2), then replay them from 1/1
  std::vector<bool> right_steps;
  mpz_class k = i;
  while (k > 0) {
    bool right = mpz_even_p(k.get_mpz_t());  // 2k+2 is even, 2k+1 is odd
    right_steps.push_back(right);
    k = (k - 1) / 2;
  }
  mpz_class a = 1, b = 1;
  for (auto it = right_steps.rbegin(); it != right_steps.rend(); ++it) {
    if (*it)
      a += b;  // right child: (a+b)/b
    else
      b += a;  // left child: a/(a+b)
  }
  return Rational::make(a, b);
}

mpz_class index_of_rational(const Rational& q) {
  if (!q.is_positive()) throw std::invalid_argument("index_of_rational: argument must be positive");
  mpz_class a = q.numerator();
  mpz_class b = q.denominator();
  // runs of right/left steps down to the root, i.e. the continued fraction
  struct Run {
    bool right;
    mpz_class count;
  };
  std::vector<Run> runs;
  while (!(a == 1 && b == 1)) {
    if (a > b) {
      // k right-steps: a -> a - k b, keep a - k b >= 1
      mpz_class k = (a - 1) / b;
      runs.push_back({true, k});
      a -= k * b;
    } else {
      // left child was a/(a+b), so the upward step is b -> b - a
      mpz_class k = (b - 1) / a;
      runs.push_back({false, k});
      b -= k * a;
    }
  }
  // replay from the root: right k times maps i to 2^k (i+2) - 2,
  // left k times maps i to 2^k (i+1) - 1
  mpz_class idx = 0;
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    if (it->count < 0 || !it->count.fits_ulong_p())
      throw std::domain_error("index_of_rational: continued fraction too deep");
    unsigned long k = it->count.get_ui();
    mpz_class shifted;
    if (it->right) {
      mpz_mul_2exp(shifted.get_mpz_t(), mpz_class(idx + 2).get_mpz_t(), k);
      idx = shifted - 2;
    } else {
      mpz_mul_2exp(shifted.get_mpz_t(), mpz_class(idx + 1).get_mpz_t(), k);
      idx = shifted - 1;
    }
  }
  return idx;
}

FiniteSetQ set_of_index(const mpz_class& n) {
  if (n < 0) throw std::invalid_argument("set_of_index: negative index");
  std::vector<Rational> elems;
  unsigned long bit = mpz_scan1(n.get_mpz_t(), 0);
  while (bit != ULONG_MAX && bit != mpz_scan1(mpz_class(0).get_mpz_t(), 0)) {
    elems.push_back(enum_positive_rational(bit));
    if (bit + 1 == 0) break;
    unsigned long next = mpz_scan1(n.get_mpz_t(), bit + 1);
    if (next == bit || next == ULONG_MAX) break;
    bit = next;
  }
  return FiniteSetQ(std::move(elems));
}

mpz_class index_of_set(const FiniteSetQ& f, unsigned long bit_limit) {
  mpz_class n = 0;
  for (const auto& q : f.elements()) {
    mpz_class i = index_of_rational(q);
    if (i > static_cast<unsigned long>(bit_limit))
      throw std::domain_error("index_of_set: element " + q.str() +
                              " has enumeration index beyond the configured limit");
    mpz_setbit(n.get_mpz_t(), i.get_ui());
  }
  return n;
}

FiniteSetQ rho(const Rational& x) {
  if (!x.is_negative()) throw std::domain_error("rho is only defined on negative rationals");
  return set_of_index(v2_denominator(x));
}

bool eval_A(const Rational& x, const Rational& y) {
  if (!x.is_negative() || !y.is_positive()) return false;
  return rho(x).contains(y);
}

FiniteSetQ fiber(const Rational& x) {
  if (!x.is_negative()) return FiniteSetQ();
  return rho(x);
}

bool same_fiber(const Rational& x, const Rational& y) {
  if (!x.is_negative() || !y.is_negative())
    throw std::domain_error("same_fiber: both arguments must be negative");
  return v2_denominator(x) == v2_denominator(y);
}

Rational find_code_in_interval(unsigned long n, const Rational& a, const Rational& b) {
  if (!(a < b) || b > Rational(0))
    throw std::invalid_argument("find_code_in_interval: need a < b with (a,b) inside the negatives");
  if (n > kMaxCodeExponent) throw std::domain_error("find_code_in_interval: exponent too large");
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, n);
  // smallest m with 7 / (2^n 3^m) < b - a
  Rational width = b - a;
  Rational scaled = width * Rational::make(den, mpz_class(1));
  while (!(Rational(7) < scaled)) {
    scaled = scaled * Rational(3);
    den *= 3;
  }
  // least admissible numerator p with -p/den in (a, b):  -b*den < p < -a*den
  Rational lower = (-b) * Rational::make(den, mpz_class(1));
  Rational upper = (-a) * Rational::make(den, mpz_class(1));
  mpz_class p = lower.floor() + 1;
  for (;; ++p) {
    if (!(Rational::make(p, mpz_class(1)) < upper))
      throw std::logic_error("find_code_in_interval: no admissible numerator (window too small)");
    if (n >= 1 && mpz_even_p(p.get_mpz_t())) continue;
    if (mpz_divisible_ui_p(p.get_mpz_t(), 3)) continue;
    break;
  }
  Rational x = Rational::make(-p, den);
  if (v2_denominator(x) != n) throw std::logic_error("find_code_in_interval: lost the 2-adic value");
  return x;
}

Rational unbounded_fiber_witness(unsigned n) {
  mpz_class exp = (mpz_class(1) << (n + 1)) - 1;
  return Rational::neg_inv_pow2(exp);
}

std::vector<Rational> realize_labels(const OrderCell& cell,
                                     const std::vector<std::pair<Rational, Rational>>& box,
                                     const std::vector<FiniteSetQ>& labels) {
  size_t r = cell.variables().size();
  if (box.size() != r || labels.size() != r)
    throw std::invalid_argument("realize_labels: arity mismatch");
  for (const auto& [lo, hi] : box)
    if (!(lo < hi) || hi > Rational(0))
      throw std::invalid_argument("realize_labels: box intervals must be open subsets of the negatives");

  const auto& blocks = cell.blocks();
  // compatibility with the cell's equalities
  for (const auto& blk : blocks) {
    if (blk.vars.empty()) continue;
    const FiniteSetQ& want = labels[blk.vars.front()];
    for (size_t v : blk.vars)
      if (!(labels[v] == want))
        throw std::invalid_argument("realize_labels: equal variables carry different labels");
    if (blk.param && !(rho(*blk.param) == want))
      throw std::invalid_argument("realize_labels: label of a pinned variable must be rho of the parameter");
  }

  // per-block box bounds
  std::vector<std::optional<Rational>> raw_lo(blocks.size()), raw_hi(blocks.size());
  for (size_t b = 0; b < blocks.size(); ++b) {
    for (size_t v : blocks[b].vars) {
      if (!raw_lo[b] || *raw_lo[b] < box[v].first) raw_lo[b] = box[v].first;
      if (!raw_hi[b] || box[v].second < *raw_hi[b]) raw_hi[b] = box[v].second;
    }
  }
  // backward caps so early choices always leave room for later blocks
  std::vector<std::optional<Rational>> cap(blocks.size());
  std::optional<Rational> next_cap = Rational(0);  // everything stays negative
  for (size_t b = blocks.size(); b-- > 0;) {
    if (blocks[b].param) {
      cap[b] = *blocks[b].param;
      next_cap = *blocks[b].param;
      continue;
    }
    cap[b] = next_cap;
    if (raw_hi[b] && (!cap[b] || *raw_hi[b] < *cap[b])) cap[b] = raw_hi[b];
    next_cap = cap[b];
  }
  // forward pass: place each block
  std::vector<Rational> out(r, Rational(0));
  std::optional<Rational> prev;
  for (size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    if (blk.param) {
      if (!blk.vars.empty()) {
        const Rational& val = *blk.param;
        if ((raw_lo[b] && !(*raw_lo[b] < val)) || (raw_hi[b] && !(val < *raw_hi[b])))
          throw std::invalid_argument("realize_labels: box does not meet the cell");
        if (prev && !(*prev < val)) throw std::invalid_argument("realize_labels: box does not meet the cell");
        for (size_t v : blk.vars) out[v] = val;
      }
      prev = *blk.param;
      continue;
    }
    std::optional<Rational> lo = raw_lo[b];
    if (prev && (!lo || *lo < *prev)) lo = prev;
    Rational hi = *cap[b];
    if (!lo) lo = hi - Rational(1);
    if (!(*lo < hi)) throw std::invalid_argument("realize_labels: box does not meet the cell");
    mpz_class idx = index_of_set(labels[blk.vars.front()]);
    if (!idx.fits_ulong_p()) throw std::domain_error("realize_labels: label index too large");
    Rational val = find_code_in_interval(idx.get_ui(), *lo, hi);
    for (size_t v : blk.vars) out[v] = val;
    prev = val;
  }
  return out;
}

}  // namespace opencore::coding
