#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "nefcert/errors.hpp"
#include "nefcert/picard.hpp"

using namespace nefcert;

namespace {

// Independent normal-form computation: apply single rewriting steps in
// random order.  Terminates whenever the stratum misses at least one
// signature-1 slot of every block it meets.
PicardClass slow_restrict(const PicardClass& cls, const RelationSet& rels,
                          std::mt19937_64& rng) {
  PicardClass current = cls;
  for (;;) {
    std::vector<EmbeddingId> rewritable;
    for (const auto& [tau, c] : current.terms())
      if (rels.relations().count(tau)) rewritable.push_back(tau);
    if (rewritable.empty()) return current;
    std::uniform_int_distribution<std::size_t> pick(0, rewritable.size() - 1);
    const EmbeddingId tau = rewritable[pick(rng)];
    const Rational c = current.coefficient(tau);
    const RelationSet::Relation& rel = rels.relations().at(tau);
    PicardClass next(current.datum_ptr());
    for (const auto& [other, coeff] : current.terms())
      if (other != tau) next.add_term(other, coeff);
    next.add_term(rel.target, -rel.power * c);
    current = next;
  }
}

PicardClass random_class(std::mt19937_64& rng, const std::shared_ptr<const ShimuraDatum>& d) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  PicardClass out(d);
  for (int b = 0; b < d->block_count(); ++b)
    for (const EmbeddingId& tau : d->signature_one_cycle(b))
      out.add_term(tau, Rational(num(rng), den(rng)));
  return out;
}

}  // namespace

TEST_CASE("class arithmetic prunes zeros and validates generators") {
  const auto d = fixtures::example_33();
  PicardClass cls(d);
  CHECK(cls.is_zero());
  cls.add_term({0, 1}, Rational(3));
  cls.add_term({0, 1}, Rational(-3));
  CHECK(cls.is_zero());
  cls.add_term({0, 2}, Rational(1, 2));
  CHECK(cls.coefficient({0, 2}) == Rational(1, 2));
  CHECK(cls.coefficient({0, 5}) == Rational(0));
  CHECK_THROWS_AS(cls.add_term({0, 3}, Rational(1)), domain_error);  // signature 0
  CHECK_THROWS_AS(cls.add_term({0, 6}, Rational(1)), domain_error);  // signature 2

  const PicardClass doubled = add(cls, cls);
  CHECK(doubled.coefficient({0, 2}) == Rational(1));
  const PicardClass zero = scale(Rational(0), doubled);
  CHECK(zero.is_zero());
  CHECK(scale(Rational(-2), cls).coefficient({0, 2}) == Rational(-1));
}

TEST_CASE("equality requires matching datum") {
  const auto d1 = fixtures::all_one_block(2, 2);
  const auto d2 = fixtures::all_one_block(2, 2);  // distinct object, equal value
  const auto d3 = fixtures::all_one_block(3, 2);
  PicardClass a(d1), b(d2), c(d3);
  a.add_term({0, 1}, Rational(1));
  b.add_term({0, 1}, Rational(1));
  c.add_term({0, 1}, Rational(1));
  CHECK(a == b);
  CHECK_THROWS_AS(static_cast<void>(a == c), input_error);
}

TEST_CASE("hasse_class of the f=12 example") {
  const auto d = fixtures::example_33();
  const PicardClass h = hasse_class(d, {0, 2});
  CHECK(h.terms().size() == 2);
  CHECK(h.coefficient({0, 5}) == Rational(8));   // p^{n_2} = 2^3
  CHECK(h.coefficient({0, 2}) == Rational(-1));
  const PicardClass h10 = hasse_class(d, {0, 10});
  CHECK(h10.coefficient({0, 11}) == Rational(2));  // gap 1
  CHECK(h10.coefficient({0, 10}) == Rational(-1));
  CHECK_THROWS_AS(hasse_class(d, {0, 3}), domain_error);
}

TEST_CASE("hasse_class merges when the cycle has a single slot") {
  const auto d = std::make_shared<ShimuraDatum>(2, std::vector<PrimeBlock>{{"a", 3}},
                                                std::vector<std::vector<int>>{{1, 0, 0}});
  const PicardClass h = hasse_class(d, {0, 1});
  CHECK(h.terms().size() == 1);
  CHECK(h.coefficient({0, 1}) == Rational(7));  // 2^3 - 1
}

TEST_CASE("det_omega_class weights every signature-1 slot by 2") {
  const auto d = fixtures::example_33();
  const PicardClass det = det_omega_class(d);
  CHECK(det.terms().size() == 6);
  for (const EmbeddingId& tau : d->signature_one_cycle(0))
    CHECK(det.coefficient(tau) == Rational(2));
}

TEST_CASE("restrict rewrites along one relation") {
  const auto d = fixtures::all_one_block(2, 2);
  const RelationSet rels(d, {{0, 1}});
  PicardClass cls(d);
  cls.add_term({0, 1}, Rational(4));
  cls.add_term({0, 2}, Rational(3));
  const PicardClass reduced = restrict(cls, rels);
  CHECK(reduced.terms().size() == 1);
  CHECK(reduced.coefficient({0, 2}) == Rational(-5));  // 3 - 2*4
}

TEST_CASE("restrict kills fully covered blocks") {
  const auto d = fixtures::example_33();
  std::set<EmbeddingId> full(d->signature_one_cycle(0).begin(),
                             d->signature_one_cycle(0).end());
  const RelationSet rels(d, full);
  CHECK(rels.covers_block(0));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(restrict(random_class(rng, d), rels).is_zero());
}

TEST_CASE("restrict is idempotent, linear, and order-independent") {
  std::mt19937_64 rng(20240818);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = fixtures::random_block(rng, fixtures::random_prime(rng), 2 + (trial % 6), 3);
    // proper subset: leave at least one slot out
    const auto& cycle = d->signature_one_cycle(0);
    std::set<EmbeddingId> t;
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
      if (coin(rng)) t.insert(cycle[i]);
    if (t.empty()) t.insert(cycle[0]);
    const RelationSet rels(d, t);

    const PicardClass x = random_class(rng, d);
    const PicardClass y = random_class(rng, d);
    const PicardClass rx = restrict(x, rels);

    CHECK(restrict(rx, rels) == rx);
    const Rational a(3, 2), b(-5, 3);
    CHECK(restrict(add(scale(a, x), scale(b, y)), rels) ==
          add(scale(a, rx), scale(b, restrict(y, rels))));
    CHECK(slow_restrict(x, rels, rng) == rx);
    // the normal form has no support on the stratum
    for (const EmbeddingId& tau : t) CHECK(rx.coefficient(tau) == Rational(0));
  }
}

TEST_CASE("restricting a Hasse class by its own label doubles the successor") {
  // h_tau = p^n [omega_succ] - [omega_tau] and the relation sends
  // [omega_tau] to -p^n [omega_succ], so the normal form is
  // 2 p^n [omega_succ] (the fiber-degree class, nonzero for N >= 2).
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = fixtures::random_block(rng, fixtures::random_prime(rng), 2 + (trial % 5), 4);
    const auto& cycle = d->signature_one_cycle(0);
    std::uniform_int_distribution<std::size_t> pick(0, cycle.size() - 1);
    const EmbeddingId tau = cycle[pick(rng)];
    const RelationSet rels(d, {tau});
    const EmbeddingId succ = rels.relations().at(tau).target;
    PicardClass expected(d);
    expected.add_term(succ, Rational(2) * Rational::pow_int(d->p(), d->n_gap(tau)));
    CHECK(restrict(hasse_class(d, tau), rels) == expected);
  }
}

TEST_CASE("relation set records powers and targets") {
  const auto d = fixtures::example_33();
  const RelationSet rels(d, {{0, 2}, {0, 7}, {0, 10}});
  CHECK(rels.relations().size() == 3);
  CHECK(rels.relations().at({0, 2}).target == EmbeddingId{0, 5});
  CHECK(rels.relations().at({0, 2}).power == Rational(8));
  CHECK(rels.relations().at({0, 7}).target == EmbeddingId{0, 10});
  CHECK(rels.relations().at({0, 7}).power == Rational(8));
  CHECK(rels.relations().at({0, 10}).target == EmbeddingId{0, 11});
  CHECK(rels.relations().at({0, 10}).power == Rational(2));
  CHECK_FALSE(rels.covers_block(0));
  CHECK_THROWS_AS(RelationSet(d, {{0, 3}}), domain_error);
}
