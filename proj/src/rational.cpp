#include "nefcert/rational.hpp"

#include <cctype>
#include <ostream>

#include "nefcert/errors.hpp"

namespace nefcert {

Rational::Rational(long n, long d) : v_(n, d) {
  if (d == 0) throw domain_error("rational with zero denominator");
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(const std::string& text) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  const std::string body = text.substr(begin, end - begin);
  if (body.empty()) throw input_error("empty rational literal");

  auto digits_with_sign = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };

  const std::size_t slash = body.find('/');
  std::string num = body, den = "1";
  if (slash != std::string::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!digits_with_sign(num) || !digits_with_sign(den))
    throw input_error("malformed rational literal '" + body + "'");

  // mpz_class rejects an explicit leading '+'.
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  const mpz_class numerator(num);
  const mpz_class denominator(den);
  mpq_class v(numerator, denominator);
  if (v.get_den() == 0) throw input_error("rational literal with zero denominator '" + body + "'");
  v.canonicalize();
  return Rational(v);
}

Rational Rational::pow_int(long base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), mpz_class(base).get_mpz_t(), exp);
  return Rational(mpq_class(r));
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

}  // namespace nefcert
