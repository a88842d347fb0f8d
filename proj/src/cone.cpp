#include "nefcert/cone.hpp"

#include <sstream>

#include "nefcert/errors.hpp"

namespace nefcert {

void validate_weights(const ShimuraDatum& datum, const WeightTuple& t) {
  std::size_t expected = 0;
  for (int b = 0; b < datum.block_count(); ++b) {
    for (const EmbeddingId& tau : datum.signature_one_cycle(b)) {
      ++expected;
      if (!t.count(tau))
        throw input_error("missing weight for " + format_embedding(datum, tau));
    }
  }
  if (t.size() != expected) {
    for (const auto& [tau, w] : t) {
      (void)w;
      if (!datum.contains(tau) || datum.signature(tau) != 1)
        throw input_error("weight on a slot that is not signature 1");
    }
  }
}

RationalVector block_weight_vector(const ShimuraDatum& datum, int b, const WeightTuple& t) {
  validate_weights(datum, t);
  const auto& cycle = datum.signature_one_cycle(b);
  RationalVector v(static_cast<Eigen::Index>(cycle.size()));
  for (std::size_t i = 0; i < cycle.size(); ++i) v(static_cast<Eigen::Index>(i)) = t.at(cycle[i]);
  return v;
}

PicardClass omega_class(std::shared_ptr<const ShimuraDatum> datum, const WeightTuple& t) {
  PicardClass out(std::move(datum));
  validate_weights(out.datum(), t);
  for (const auto& [tau, w] : t) out.add_term(tau, w);
  return out;
}

PicardClass omega_class_block(std::shared_ptr<const ShimuraDatum> datum, const WeightTuple& t,
                              int b) {
  PicardClass out(std::move(datum));
  validate_weights(out.datum(), t);
  for (const EmbeddingId& tau : out.datum().signature_one_cycle(b)) out.add_term(tau, t.at(tau));
  return out;
}

std::vector<ConeConstraint> ConeReport::violations() const {
  std::vector<ConeConstraint> v;
  for (const auto& c : constraints)
    if (!c.ok) v.push_back(c);
  return v;
}

namespace {

ConeReport cone_check(const ShimuraDatum& datum, const WeightTuple& t, bool strict) {
  validate_weights(datum, t);
  ConeReport report;
  report.ok = true;
  for (int b = 0; b < datum.block_count(); ++b) {
    for (const EmbeddingId& tau : datum.signature_one_cycle(b)) {
      ConeConstraint c;
      c.tau = tau;
      c.successor = datum.cycle_successor(tau);
      c.gap = datum.n_gap(tau);
      c.lhs = Rational::pow_int(datum.p(), c.gap) * t.at(tau);
      c.rhs = t.at(c.successor);
      c.ok = strict ? (c.lhs > c.rhs) : (c.lhs >= c.rhs);
      report.ok = report.ok && c.ok;
      report.constraints.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace

std::string format_constraint(const ShimuraDatum& datum, const ConeConstraint& c, bool strict) {
  std::ostringstream os;
  os << "p^" << c.gap << "*t[" << format_embedding(datum, c.tau) << "] "
     << (strict ? ">" : ">=") << " t[" << format_embedding(datum, c.successor) << "]: " << c.lhs
     << (strict ? " > " : " >= ") << c.rhs << " " << (c.ok ? "ok" : "VIOLATED");
  return os.str();
}

ConeReport ample_check(const ShimuraDatum& datum, const WeightTuple& t) {
  return cone_check(datum, t, true);
}

ConeReport nef_check(const ShimuraDatum& datum, const WeightTuple& t) {
  return cone_check(datum, t, false);
}

Rational epsilon_max(const ShimuraDatum& datum, const WeightTuple& t, bool relax_precondition) {
  const ConeReport ample = ample_check(datum, t);
  if (!ample.ok && !relax_precondition) {
    std::string msg = "epsilon_max needs an ample tuple; violated:";
    for (const auto& c : ample.violations()) msg += "\n  " + format_constraint(datum, c, true);
    throw domain_error(msg);
  }
  if (ample.constraints.empty()) throw domain_error("epsilon_max needs a signature-1 slot");
  bool first = true;
  Rational best(0);
  for (const auto& c : ample.constraints) {
    // p^n (t - 2e) >= t_succ - 2e  <=>  e <= (p^n t - t_succ) / (2 (p^n - 1))
    const Rational margin = c.lhs - c.rhs;
    const Rational denom = (Rational::pow_int(datum.p(), c.gap) - Rational(1)) * Rational(2);
    const Rational bound = margin / denom;
    if (first || bound < best) best = bound;
    first = false;
  }
  return best;
}

HodgeSplit hodge_split(const ShimuraDatum& datum, const WeightTuple& t) {
  const Rational eps = epsilon_max(datum, t) / Rational(2);
  HodgeSplit split;
  split.epsilon = eps;
  split.t_prime = t;
  for (auto& [tau, w] : split.t_prime) {
    (void)tau;
    w -= Rational(2) * eps;
  }
  return split;
}

}  // namespace nefcert
