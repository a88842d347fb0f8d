#pragma once

#include <map>
#include <memory>
#include <set>

#include "nefcert/datum.hpp"
#include "nefcert/rational.hpp"

namespace nefcert {

// Element of the rational Picard group spanned by the Hodge line classes
// [omega_tau], tau of signature 1: a finitely supported map tau -> Q.
// Zero coefficients are pruned, so support() is exact.
class PicardClass {
 public:
  explicit PicardClass(std::shared_ptr<const ShimuraDatum> datum);

  const ShimuraDatum& datum() const { return *datum_; }
  const std::shared_ptr<const ShimuraDatum>& datum_ptr() const { return datum_; }

  const Rational& coefficient(const EmbeddingId& tau) const;
  const std::map<EmbeddingId, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds c * [omega_tau]; tau must have signature 1.
  void add_term(const EmbeddingId& tau, const Rational& c);

  friend bool operator==(const PicardClass& a, const PicardClass& b);
  friend bool operator!=(const PicardClass& a, const PicardClass& b) { return !(a == b); }

 private:
  std::shared_ptr<const ShimuraDatum> datum_;
  std::map<EmbeddingId, Rational> terms_;
};

// Oriented rewriting system attached to a stratum subset T: for every
// tau in T the vanishing of its partial Hasse invariant enforces
//   [omega_tau] -> -p^{n_tau} [omega_{sigma^{-n_tau} tau}]
// on the stratum.  Eliminated generators are exactly the members of T,
// so the induced normal form is unique regardless of rewrite order.
class RelationSet {
 public:
  struct Relation {
    EmbeddingId target;  // sigma^{-n_tau} tau
    Rational power;      // p^{n_tau}
  };

  RelationSet(std::shared_ptr<const ShimuraDatum> datum, std::set<EmbeddingId> stratum);

  const ShimuraDatum& datum() const { return *datum_; }
  const std::set<EmbeddingId>& stratum() const { return stratum_; }
  const std::map<EmbeddingId, Relation>& relations() const { return relations_; }

  // True when the stratum covers every signature-1 slot of block b; the
  // cyclic substitution then kills all of that block's generators.
  bool covers_block(int b) const;

 private:
  std::shared_ptr<const ShimuraDatum> datum_;
  std::set<EmbeddingId> stratum_;
  std::map<EmbeddingId, Relation> relations_;
  std::set<int> full_blocks_;
};

PicardClass add(const PicardClass& a, const PicardClass& b);
PicardClass scale(const Rational& c, const PicardClass& a);

// Class of the partial Hasse invariant h_tau:
//   p^{n_tau} [omega_{sigma^{-n_tau} tau}] - [omega_tau].
// When the two slots coincide (single signature-1 slot in the block)
// the coefficients merge to (p^{n_tau} - 1) [omega_tau].
PicardClass hasse_class(std::shared_ptr<const ShimuraDatum> datum, const EmbeddingId& tau);

// Hodge determinant class: coefficient 2 on every signature-1 slot.
PicardClass det_omega_class(std::shared_ptr<const ShimuraDatum> datum);

// Normal form of cls in the quotient ring of the stratum cut out by
// rels: substitutes along the rewriting until no generator of the
// stratum remains in the support; generators of fully covered blocks
// are sent to zero outright.
PicardClass restrict(const PicardClass& cls, const RelationSet& rels);

}  // namespace nefcert
