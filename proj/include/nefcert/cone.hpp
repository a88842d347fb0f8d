#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nefcert/datum.hpp"
#include "nefcert/picard.hpp"
#include "nefcert/rational.hpp"

namespace nefcert {

// Total weight assignment on the signature-1 slots of a datum.
using WeightTuple = std::map<EmbeddingId, Rational>;

// Throws input_error unless the keys of t are exactly the signature-1
// slots of the datum.
void validate_weights(const ShimuraDatum& datum, const WeightTuple& t);

// Weight vector of block b along its signature-1 cycle.
RationalVector block_weight_vector(const ShimuraDatum& datum, int b, const WeightTuple& t);

// sum_tau t_tau [omega_tau]; with a block filter, only that block's slots.
PicardClass omega_class(std::shared_ptr<const ShimuraDatum> datum, const WeightTuple& t);
PicardClass omega_class_block(std::shared_ptr<const ShimuraDatum> datum, const WeightTuple& t,
                              int b);

// One cone inequality p^{n_tau} t_tau (>|>=) t_{sigma^{-n_tau} tau}.
struct ConeConstraint {
  EmbeddingId tau;
  EmbeddingId successor;
  unsigned long gap = 1;
  Rational lhs;  // p^{n_tau} * t_tau
  Rational rhs;  // t at the successor
  bool ok = false;
};

struct ConeReport {
  bool ok = false;
  std::vector<ConeConstraint> constraints;  // every constraint, cycle order per block

  std::vector<ConeConstraint> violations() const;
};

// "p^n*t[p1.2] > t[p1.5]: 8 > 1"-style line for one constraint.
std::string format_constraint(const ShimuraDatum& datum, const ConeConstraint& c, bool strict);

// Ampleness: every inequality strict.  Nefness: non-strict.
ConeReport ample_check(const ShimuraDatum& datum, const WeightTuple& t);
ConeReport nef_check(const ShimuraDatum& datum, const WeightTuple& t);

// Largest epsilon with t - 2*epsilon still nef:
//   min over tau of (p^{n_tau} t_tau - t_succ) / (2 (p^{n_tau} - 1)).
// Requires t ample unless relax_precondition (boundary probing) is set.
Rational epsilon_max(const ShimuraDatum& datum, const WeightTuple& t,
                     bool relax_precondition = false);

// Splits an ample t as epsilon * det(omega) + [omega^{t'}] with
// epsilon = epsilon_max / 2 and t' = t - 2*epsilon still ample.
struct HodgeSplit {
  Rational epsilon;
  WeightTuple t_prime;
};

HodgeSplit hodge_split(const ShimuraDatum& datum, const WeightTuple& t);

}  // namespace nefcert
