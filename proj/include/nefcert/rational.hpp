#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <compare>
#include <iosfwd>
#include <string>

namespace nefcert {

// Arbitrary-precision rational with value semantics.
//
// Thin wrapper over GMP's mpq_class that (a) always holds a canonical
// value (coprime numerator/denominator, denominator > 0), (b) renders
// and parses the textual form "a/b" (or "a" when the denominator is 1),
// and (c) eagerly evaluates arithmetic so gmpxx expression templates
// never leak into generic (Eigen) code.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  Rational(long n, long d);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  // Parses "a/b" or "a" with optional sign; rejects zero denominators
  // and any trailing garbage.
  static Rational parse(const std::string& text);

  // base^exp as an exact rational (exp >= 0).
  static Rational pow_int(long base, unsigned long exp);

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  bool is_zero() const { return mpq_sgn(v_.get_mpq_t()) == 0; }
  int sign() const { return mpq_sgn(v_.get_mpq_t()); }

  // "a/b", or "a" when the denominator is 1.
  std::string str() const;

  const mpq_class& value() const { return v_; }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

}  // namespace nefcert

namespace Eigen {

template <>
struct NumTraits<nefcert::Rational> : GenericNumTraits<nefcert::Rational> {
  typedef nefcert::Rational Real;
  typedef nefcert::Rational NonInteger;
  typedef nefcert::Rational Nested;
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};

}  // namespace Eigen
