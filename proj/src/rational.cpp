#include "opencore/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace opencore {

namespace {

// Hard ceiling on bits we are willing to materialize when aligning or
// printing denominators. Everything desk-scale stays far below it.
constexpr unsigned long kMaxMaterializeBits = 1ul << 26;

// Denominators print as plain integers up to this many bits of 2-power;
// beyond it the "p/2^k" form is used.
constexpr unsigned long kPlainPrintExp = 4096;

unsigned long to_ulong_checked(const mpz_class& z, const char* what) {
  if (z < 0 || !z.fits_ulong_p()) throw std::overflow_error(std::string(what) + ": exponent too large");
  return z.get_ui();
}

}  // namespace

Rational Rational::from_parts(mpz_class num, mpz_class den_odd, mpz_class den_exp2) {
  if (sgn(num) == 0) return Rational(0, 1, 0);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den_odd.get_mpz_t());
  if (g != 1) {
    num /= g;
    den_odd /= g;
  }
  if (den_exp2 > 0 && mpz_even_p(num.get_mpz_t())) {
    unsigned long tz = mpz_scan1(num.get_mpz_t(), 0);
    mpz_class shift = den_exp2 <= tz ? den_exp2 : mpz_class(tz);
    unsigned long s = to_ulong_checked(shift, "normalize");
    mpz_tdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), s);
    den_exp2 -= s;
  }
  return Rational(std::move(num), std::move(den_odd), std::move(den_exp2));
}

Rational Rational::make(const mpz_class& num, const mpz_class& den) {
  if (sgn(den) == 0) throw std::invalid_argument("rational: zero denominator");
  mpz_class n = num, d = den;
  if (sgn(d) < 0) {
    n = -n;
    d = -d;
  }
  if (sgn(n) == 0) return Rational();
  unsigned long e = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), e);
  return from_parts(std::move(n), std::move(d), mpz_class(e));
}

Rational Rational::make(long num, long den) { return make(mpz_class(num), mpz_class(den)); }

Rational Rational::neg_inv_pow2(const mpz_class& exp) {
  if (exp < 0) throw std::invalid_argument("neg_inv_pow2: negative exponent");
  return Rational(mpz_class(-1), mpz_class(1), exp);
}

mpz_class Rational::denominator() const {
  if (den_exp2_ > kMaxMaterializeBits)
    throw std::overflow_error("rational: denominator too large to materialize");
  mpz_class d;
  mpz_mul_2exp(d.get_mpz_t(), den_odd_.get_mpz_t(), to_ulong_checked(den_exp2_, "denominator"));
  return d;
}

int Rational::compare(const Rational& a, const Rational& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  // |a| ? |b|  <=>  |na|*ob*2^eb ? |nb|*oa*2^ea.
  mpz_class left = ::abs(a.num_) * b.den_odd_;
  mpz_class right = ::abs(b.num_) * a.den_odd_;
  // Compare left*2^eb vs right*2^ea via bit lengths first so that huge
  // exponent gaps never materialize.
  mpz_class bits_left = mpz_class(mpz_sizeinbase(left.get_mpz_t(), 2)) + b.den_exp2_;
  mpz_class bits_right = mpz_class(mpz_sizeinbase(right.get_mpz_t(), 2)) + a.den_exp2_;
  int mag;
  if (bits_left != bits_right) {
    mag = bits_left < bits_right ? -1 : 1;
  } else {
    // Equal bit lengths: the exponent gap is bounded by the materialized
    // operand's width, so an exact shifted comparison is affordable.
    if (a.den_exp2_ >= b.den_exp2_) {
      unsigned long d = to_ulong_checked(a.den_exp2_ - b.den_exp2_, "compare");
      mpz_class r2;
      mpz_mul_2exp(r2.get_mpz_t(), right.get_mpz_t(), d);
      mag = cmp(left, r2);
    } else {
      unsigned long d = to_ulong_checked(b.den_exp2_ - a.den_exp2_, "compare");
      mpz_class l2;
      mpz_mul_2exp(l2.get_mpz_t(), left.get_mpz_t(), d);
      mag = cmp(l2, right);
    }
    mag = mag < 0 ? -1 : (mag > 0 ? 1 : 0);
  }
  return sa > 0 ? mag : -mag;
}

Rational Rational::operator-() const { return Rational(-num_, den_odd_, den_exp2_); }

Rational Rational::operator+(const Rational& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), den_odd_.get_mpz_t(), o.den_odd_.get_mpz_t());
  mpz_class oa = den_odd_ / g, ob = o.den_odd_ / g;
  const mpz_class& emax = den_exp2_ >= o.den_exp2_ ? den_exp2_ : o.den_exp2_;
  mpz_class da = emax - den_exp2_, db = emax - o.den_exp2_;
  if (da > kMaxMaterializeBits || db > kMaxMaterializeBits)
    throw std::overflow_error("rational: addition exponent gap too large");
  mpz_class ta, tb;
  mpz_mul_2exp(ta.get_mpz_t(), mpz_class(num_ * ob).get_mpz_t(), to_ulong_checked(da, "add"));
  mpz_mul_2exp(tb.get_mpz_t(), mpz_class(o.num_ * oa).get_mpz_t(), to_ulong_checked(db, "add"));
  return from_parts(ta + tb, den_odd_ * ob, emax);
}

Rational Rational::operator*(const Rational& o) const {
  if (is_zero() || o.is_zero()) return Rational();
  return from_parts(num_ * o.num_, den_odd_ * o.den_odd_, den_exp2_ + o.den_exp2_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::domain_error("rational: division by zero");
  if (is_zero()) return Rational();
  // inverse of o materializes its denominator into a numerator
  mpz_class inv_num = o.denominator();
  if (sgn(o.num_) < 0) inv_num = -inv_num;
  Rational inv = make(inv_num, ::abs(o.num_));
  return *this * inv;
}

Rational Rational::midpoint(const Rational& a, const Rational& b) {
  Rational s = a + b;
  if (s.is_zero()) return Rational();
  if (mpz_even_p(s.num_.get_mpz_t())) return from_parts(s.num_ / 2, s.den_odd_, s.den_exp2_);
  return Rational(s.num_, s.den_odd_, s.den_exp2_ + 1);
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), num_.get_mpz_t(), denominator().get_mpz_t());
  return q;
}

std::string Rational::str() const {
  if (is_integer()) return num_.get_str();
  if (den_exp2_ <= kPlainPrintExp) return num_.get_str() + "/" + denominator().get_str();
  std::string s = num_.get_str() + "/2^" + den_exp2_.get_str();
  if (den_odd_ != 1) s += "*" + den_odd_.get_str();  // never produced by the toolkit itself
  return s;
}

Rational Rational::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("rational: malformed literal '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  size_t slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);  // mpz_set_str rejects '+'
    if (s.empty()) throw bad();
    size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) throw bad();
    for (size_t k = i; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') throw bad();
    return mpz_class(std::string(s), 10);
  };
  if (slash == std::string_view::npos) {
    Rational r;
    r.num_ = parse_int(text);
    return r;
  }
  mpz_class num = parse_int(text.substr(0, slash));
  std::string_view den = text.substr(slash + 1);
  if (den.rfind("2^", 0) == 0) {
    mpz_class e = parse_int(den.substr(2));
    if (e < 0) throw bad();
    return from_parts(std::move(num), mpz_class(1), std::move(e));
  }
  return make(num, parse_int(den));
}

Rational between(const Rational& a, const Rational& b) {
  if (!(a < b)) throw std::invalid_argument("between: requires a < b");
  return Rational::midpoint(a, b);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace opencore
