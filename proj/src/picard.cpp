#include "nefcert/picard.hpp"

#include <utility>

#include "nefcert/errors.hpp"

namespace nefcert {

namespace {

void require_same_datum(const PicardClass& a, const PicardClass& b) {
  if (a.datum_ptr() != b.datum_ptr() && a.datum() != b.datum())
    throw input_error("datum mismatch between Picard classes");
}

void require_datum(const ShimuraDatum& d, const ShimuraDatum& e, const char* what) {
  if (d != e) throw input_error(std::string("datum mismatch in ") + what);
}

}  // namespace

PicardClass::PicardClass(std::shared_ptr<const ShimuraDatum> datum) : datum_(std::move(datum)) {
  if (!datum_) throw input_error("Picard class without datum");
}

const Rational& PicardClass::coefficient(const EmbeddingId& tau) const {
  static const Rational zero(0);
  const auto it = terms_.find(tau);
  return it == terms_.end() ? zero : it->second;
}

void PicardClass::add_term(const EmbeddingId& tau, const Rational& c) {
  if (datum_->signature(tau) != 1)
    throw domain_error("Picard generator " + format_embedding(*datum_, tau) +
                       " is not signature 1");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(tau, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool operator==(const PicardClass& a, const PicardClass& b) {
  require_same_datum(a, b);
  return a.terms_ == b.terms_;
}

RelationSet::RelationSet(std::shared_ptr<const ShimuraDatum> datum, std::set<EmbeddingId> stratum)
    : datum_(std::move(datum)), stratum_(std::move(stratum)) {
  if (!datum_) throw input_error("relation set without datum");
  for (const EmbeddingId& tau : stratum_) {
    if (datum_->signature(tau) != 1)
      throw domain_error("stratum member " + format_embedding(*datum_, tau) +
                         " is not signature 1");
    relations_.emplace(tau, Relation{datum_->cycle_successor(tau),
                                     Rational::pow_int(datum_->p(), datum_->n_gap(tau))});
  }
  for (int b = 0; b < datum_->block_count(); ++b) {
    const auto& cycle = datum_->signature_one_cycle(b);
    if (cycle.empty()) continue;
    bool full = true;
    for (const EmbeddingId& tau : cycle)
      if (!stratum_.count(tau)) { full = false; break; }
    if (full) full_blocks_.insert(b);
  }
}

bool RelationSet::covers_block(int b) const { return full_blocks_.count(b) != 0; }

PicardClass add(const PicardClass& a, const PicardClass& b) {
  require_same_datum(a, b);
  PicardClass out = a;
  for (const auto& [tau, c] : b.terms()) out.add_term(tau, c);
  return out;
}

PicardClass scale(const Rational& c, const PicardClass& a) {
  PicardClass out(a.datum_ptr());
  if (c.is_zero()) return out;
  for (const auto& [tau, coeff] : a.terms()) out.add_term(tau, c * coeff);
  return out;
}

PicardClass hasse_class(std::shared_ptr<const ShimuraDatum> datum, const EmbeddingId& tau) {
  PicardClass out(datum);
  const ShimuraDatum& d = *out.datum_ptr();
  if (d.signature(tau) != 1)
    throw domain_error("no partial Hasse invariant at " + format_embedding(d, tau));
  out.add_term(d.cycle_successor(tau), Rational::pow_int(d.p(), d.n_gap(tau)));
  out.add_term(tau, Rational(-1));
  return out;
}

PicardClass det_omega_class(std::shared_ptr<const ShimuraDatum> datum) {
  PicardClass out(datum);
  const ShimuraDatum& d = *out.datum_ptr();
  for (int b = 0; b < d.block_count(); ++b)
    for (const EmbeddingId& tau : d.signature_one_cycle(b)) out.add_term(tau, Rational(2));
  return out;
}

PicardClass restrict(const PicardClass& cls, const RelationSet& rels) {
  require_datum(cls.datum(), rels.datum(), "restrict");
  PicardClass out(cls.datum_ptr());
  for (const auto& [tau0, c0] : cls.terms()) {
    if (rels.covers_block(tau0.block)) continue;  // cyclic substitution kills the block
    EmbeddingId tau = tau0;
    Rational c = c0;
    // Follow the rewriting until the generator escapes the stratum.  The
    // chain terminates because the stratum is a proper subset of this
    // block's signature-1 cycle.
    for (auto it = rels.relations().find(tau); it != rels.relations().end();
         it = rels.relations().find(tau)) {
      c *= -it->second.power;
      tau = it->second.target;
    }
    out.add_term(tau, c);
  }
  return out;
}

}  // namespace nefcert
