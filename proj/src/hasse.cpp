#include "nefcert/hasse.hpp"

#include <sstream>

#include "nefcert/errors.hpp"

namespace nefcert {

namespace {

int cycle_order_or_throw(const ShimuraDatum& datum, int b) {
  const int n = static_cast<int>(datum.signature_one_cycle(b).size());
  if (n == 0)
    throw domain_error("block '" + datum.block(b).name + "' has no signature-1 slot");
  return n;
}

}  // namespace

RationalMatrix hasse_matrix(const ShimuraDatum& datum, int b) {
  const int n = cycle_order_or_throw(datum, b);
  RationalMatrix h = RationalMatrix::Constant(n, n, Rational(0));
  for (int i = 0; i < n; ++i) {
    const Rational power = Rational::pow_int(datum.p(), datum.n_gap_at(b, i + 1));
    h(i, i) += Rational(-1);
    h((i + 1) % n, i) += power;  // += so the N = 1 case merges to p^n - 1
  }
  return h;
}

RationalMatrix hasse_inverse_closed_form(const ShimuraDatum& datum, int b) {
  const int n = cycle_order_or_throw(datum, b);
  std::vector<unsigned long> gap(static_cast<std::size_t>(n));
  unsigned long total = 0;
  for (int i = 0; i < n; ++i) {
    gap[static_cast<std::size_t>(i)] = datum.n_gap_at(b, i + 1);
    total += gap[static_cast<std::size_t>(i)];
  }
  const Rational big = Rational::pow_int(datum.p(), total);       // P = p^{sum of gaps}
  const Rational prefactor = big / (big - Rational(1));
  RationalMatrix inv(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      unsigned long e = 0;
      const int terms = (j - i) % n >= 0 ? (j - i) % n : (j - i) % n + n;
      const int count = (i == j) ? n : terms;  // full cycle on the diagonal
      for (int k = 0; k < count; ++k) e += gap[static_cast<std::size_t>((i + k) % n)];
      inv(i, j) = prefactor / Rational::pow_int(datum.p(), e);
    }
  }
  return inv;
}

RationalVector lambda_coefficients(const ShimuraDatum& datum, int b, const RationalVector& t) {
  const int n = cycle_order_or_throw(datum, b);
  if (t.size() != n)
    throw domain_error("weight vector length does not match the signature-1 cycle");
  return hasse_inverse_closed_form(datum, b) * t;
}

bool is_identity(const RationalMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != Rational(i == j ? 1 : 0)) return false;
  return true;
}

std::string format_matrix(const RationalMatrix& m) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace nefcert
