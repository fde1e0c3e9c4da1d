#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace opencore {

/// Exact rational in lowest terms. The denominator is kept factored as
/// odd_part * 2^exp2 so that 2-adic valuations stay cheap even when the
/// power of two is astronomically large (the witness family needs
/// exponents near 2^65, whose binary expansion could never be stored).
/// Invariants: odd_part > 0 and odd; gcd(num, odd_part) = 1; if exp2 > 0
/// then num is odd; zero is 0 / (1 * 2^0).
class Rational {
 public:
  Rational() : num_(0), den_odd_(1), den_exp2_(0) {}
  Rational(long n) : num_(n), den_odd_(1), den_exp2_(0) {}

  // Throws std::invalid_argument when den == 0.
  static Rational make(const mpz_class& num, const mpz_class& den);
  static Rational make(long num, long den);

  // -1 / 2^exp, exp >= 0. Exact for any exponent size.
  static Rational neg_inv_pow2(const mpz_class& exp);

  // Accepts "p", "p/q", and the large-denominator form "p/2^k".
  // Throws std::invalid_argument on malformed input.
  static Rational parse(std::string_view text);

  int sign() const { return sgn(num_); }
  bool is_zero() const { return sign() == 0; }
  bool is_negative() const { return sign() < 0; }
  bool is_positive() const { return sign() > 0; }
  bool is_integer() const { return den_odd_ == 1 && den_exp2_ == 0; }

  const mpz_class& numerator() const { return num_; }
  const mpz_class& denominator_odd_part() const { return den_odd_; }
  // Exponent of 2 in the denominator.
  const mpz_class& denominator_pow2() const { return den_exp2_; }
  // Materializes odd_part * 2^exp2; throws std::overflow_error when the
  // result would exceed the materialization guard.
  mpz_class denominator() const;

  // Trichotomous cross-multiplication order; exact at any magnitude.
  static int compare(const Rational& a, const Rational& b);

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_odd_ == o.den_odd_ && den_exp2_ == o.den_exp2_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return compare(*this, o) < 0; }
  bool operator<=(const Rational& o) const { return compare(*this, o) <= 0; }
  bool operator>(const Rational& o) const { return compare(*this, o) > 0; }
  bool operator>=(const Rational& o) const { return compare(*this, o) >= 0; }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const;
  // Throws std::domain_error when o is zero.
  Rational operator/(const Rational& o) const;
  Rational abs() const { return is_negative() ? -*this : *this; }

  // (*this + o) / 2 without precondition.
  static Rational midpoint(const Rational& a, const Rational& b);

  mpz_class floor() const;

  std::string str() const;

 private:
  Rational(mpz_class num, mpz_class den_odd, mpz_class den_exp2)
      : num_(std::move(num)), den_odd_(std::move(den_odd)), den_exp2_(std::move(den_exp2)) {}

  static Rational from_parts(mpz_class num, mpz_class den_odd, mpz_class den_exp2);

  mpz_class num_;
  mpz_class den_odd_;
  mpz_class den_exp2_;
};

// Strictly between a and b; throws std::invalid_argument unless a < b.
Rational between(const Rational& a, const Rational& b);

// Exponent of 2 in the denominator of x (x in lowest terms by construction).
inline const mpz_class& v2_denominator(const Rational& x) { return x.denominator_pow2(); }

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace opencore
