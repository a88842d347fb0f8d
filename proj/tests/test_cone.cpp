#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "nefcert/cone.hpp"
#include "nefcert/errors.hpp"
#include "nefcert/hasse.hpp"

using namespace nefcert;

TEST_CASE("weight validation") {
  const auto d = fixtures::all_one_block(2, 2);
  WeightTuple t{{{0, 1}, Rational(1)}};
  CHECK_THROWS_WITH_AS(validate_weights(*d, t), "missing weight for p1.2", input_error);

  const auto e = fixtures::example_33();
  WeightTuple w = fixtures::integer_weights(e, {1, 1, 1, 1, 1, 1});
  CHECK_NOTHROW(validate_weights(*e, w));
  w[EmbeddingId{0, 3}] = Rational(1);  // slot 3 has signature 0
  CHECK_THROWS_WITH_AS(validate_weights(*e, w), "weight on a slot that is not signature 1",
                       input_error);
}

TEST_CASE("block weight vector follows the cycle") {
  const auto d = fixtures::example_33();
  const WeightTuple t = fixtures::integer_weights(d, {4, 5, 6, 7, 8, 9});
  const RationalVector v = block_weight_vector(*d, 0, t);
  REQUIRE(v.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(v(i) == Rational(4 + i));

  const PicardClass cls = omega_class(d, t);
  CHECK(cls.coefficient(EmbeddingId{0, 5}) == Rational(6));
  CHECK(cls.coefficient(EmbeddingId{0, 11}) == Rational(9));
}

TEST_CASE("ample and nef checks on hand examples") {
  const auto hilb = fixtures::all_one_block(2, 2);

  SUBCASE("strictly interior tuple") {
    const WeightTuple t = fixtures::integer_weights(hilb, {1, 1});
    CHECK(ample_check(*hilb, t).ok);
    CHECK(nef_check(*hilb, t).ok);
  }

  SUBCASE("violating tuple") {
    const WeightTuple t = fixtures::integer_weights(hilb, {1, 3});
    const ConeReport r = ample_check(*hilb, t);
    CHECK_FALSE(r.ok);
    const std::vector<ConeConstraint> bad = r.violations();
    REQUIRE(bad.size() == 1);
    const ConeConstraint& c = bad[0];
    CHECK(c.tau == EmbeddingId{0, 1});
    CHECK(c.lhs == Rational(2));
    CHECK(c.rhs == Rational(3));
    CHECK(format_constraint(*hilb, c, true) == "p^1*t[p1.1] > t[p1.2]: 2 > 3 VIOLATED");
    CHECK_FALSE(nef_check(*hilb, t).ok);
  }

  SUBCASE("boundary tuple is nef but not ample") {
    const WeightTuple t = fixtures::integer_weights(hilb, {1, 2});
    const ConeReport nef = nef_check(*hilb, t);
    CHECK(nef.ok);
    CHECK(nef.violations().empty());
    REQUIRE(nef.constraints.size() == 2);
    // The tight wall renders as a satisfied non-strict inequality.
    CHECK(format_constraint(*hilb, nef.constraints[0], false) ==
          "p^1*t[p1.1] >= t[p1.2]: 2 >= 2 ok");

    const ConeReport amp = ample_check(*hilb, t);
    CHECK_FALSE(amp.ok);
    const std::vector<ConeConstraint> bad = amp.violations();
    REQUIRE(bad.size() == 1);
    CHECK(format_constraint(*hilb, bad[0], true) == "p^1*t[p1.1] > t[p1.2]: 2 > 2 VIOLATED");
  }

  SUBCASE("f=12 example with unit weights") {
    const auto e = fixtures::example_33();
    const WeightTuple t = fixtures::integer_weights(e, {1, 1, 1, 1, 1, 1});
    const ConeReport r = ample_check(*e, t);
    CHECK(r.ok);
    REQUIRE(r.constraints.size() == 6);
    CHECK(r.constraints[1].tau == EmbeddingId{0, 2});
    CHECK(r.constraints[1].lhs == Rational(8));  // gap 3
    CHECK(r.constraints[1].rhs == Rational(1));
  }
}

TEST_CASE("epsilon_max hand values") {
  const auto hilb = fixtures::all_one_block(2, 2);
  CHECK(epsilon_max(*hilb, fixtures::integer_weights(hilb, {1, 1})) == Rational(1, 2));
  // t=(4,3): slot-1 slack (2*4-3)/2 = 5/2, slot-2 slack (2*3-4)/2 = 1; the min wins.
  CHECK(epsilon_max(*hilb, fixtures::integer_weights(hilb, {4, 3})) == Rational(1));

  // Not ample: refuse unless relaxed; the boundary value is 0.
  const WeightTuple boundary = fixtures::integer_weights(hilb, {1, 2});
  CHECK_THROWS_AS(epsilon_max(*hilb, boundary), domain_error);
  CHECK(epsilon_max(*hilb, boundary, true) == Rational(0));

  // Single-slot block: constraint p^f t >= t gives bound t/2.
  const auto single = std::make_shared<ShimuraDatum>(3, std::vector<PrimeBlock>{{"q", 2}},
                                                     std::vector<std::vector<int>>{{1, 0}});
  WeightTuple ts{{{0, 1}, Rational(7)}};
  CHECK(epsilon_max(*single, ts) == Rational(7, 2));
}

TEST_CASE("hodge_split peels off half the slack") {
  const auto hilb = fixtures::all_one_block(2, 2);
  const WeightTuple t = fixtures::integer_weights(hilb, {4, 3});
  const HodgeSplit split = hodge_split(*hilb, t);
  CHECK(split.epsilon == Rational(1, 2));
  CHECK(split.t_prime.at(EmbeddingId{0, 1}) == Rational(3));
  CHECK(split.t_prime.at(EmbeddingId{0, 2}) == Rational(2));
  CHECK(ample_check(*hilb, split.t_prime).ok);

  // Reconstruction: t = t' + 2 epsilon on every slot.
  for (const auto& [tau, w] : t)
    CHECK(w == split.t_prime.at(tau) + Rational(2) * split.epsilon);
}

TEST_CASE("randomized cone properties") {
  std::mt19937_64 rng(20240821);
  for (int trial = 0; trial < 120; ++trial) {
    const auto d = fixtures::random_block(rng, fixtures::random_prime(rng), 1 + (trial % 6), 4);
    const WeightTuple t = fixtures::random_nef_tuple(rng, d);
    REQUIRE(nef_check(*d, t).ok);

    // Nef weights are non-negative and transport to non-negative lambda.
    for (const auto& [tau, w] : t) {
      (void)tau;
      CHECK(w >= Rational(0));
    }
    const RationalVector lambda = lambda_coefficients(*d, 0, block_weight_vector(*d, 0, t));
    for (Eigen::Index i = 0; i < lambda.size(); ++i) CHECK(lambda(i) >= Rational(0));

    // Ample tuples admit a positive epsilon and an ample Hodge split.
    const WeightTuple a = fixtures::random_ample_tuple(rng, d);
    REQUIRE(ample_check(*d, a).ok);
    CHECK(epsilon_max(*d, a) > Rational(0));
    const HodgeSplit split = hodge_split(*d, a);
    CHECK(ample_check(*d, split.t_prime).ok);
  }
}
