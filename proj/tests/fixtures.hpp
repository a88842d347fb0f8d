#pragma once

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nefcert/cone.hpp"
#include "nefcert/datum.hpp"
#include "nefcert/rational.hpp"
#include "nefcert/strata.hpp"

namespace fixtures {

using namespace nefcert;

// f = 12 datum of the worked example: signature-1 slots {1,2,5,7,10,11},
// signature-0 slots {3,4,9,12}, signature-2 slots {6,8}.
inline std::shared_ptr<const ShimuraDatum> example_33() {
  return std::make_shared<ShimuraDatum>(
      2, std::vector<PrimeBlock>{{"p", 12}},
      std::vector<std::vector<int>>{{1, 1, 0, 0, 1, 2, 1, 2, 0, 1, 1, 0}});
}

inline std::shared_ptr<const ShimuraDatum> all_one_block(long p, int f,
                                                         const std::string& name = "p1") {
  return std::make_shared<ShimuraDatum>(p, std::vector<PrimeBlock>{{name, f}},
                                        std::vector<std::vector<int>>{std::vector<int>(
                                            static_cast<std::size_t>(f), 1)});
}

// Weights listed along the signature-1 slots in (block, slot) order.
inline WeightTuple weights_of(const ShimuraDatum& d, const std::vector<Rational>& values) {
  WeightTuple t;
  std::size_t i = 0;
  for (int b = 0; b < d.block_count(); ++b)
    for (const EmbeddingId& tau : d.signature_one_cycle(b)) t.emplace(tau, values.at(i++));
  return t;
}

inline WeightTuple integer_weights(const ShimuraDatum& d, const std::vector<long>& values) {
  std::vector<Rational> r;
  for (long v : values) r.emplace_back(v);
  return weights_of(d, r);
}

// Single block with N signature-1 slots, random gaps in [1, max_gap],
// random rotation, and random 0/2 signatures on the gap slots.
inline std::shared_ptr<const ShimuraDatum> random_block(std::mt19937_64& rng, long p, int n,
                                                        int max_gap,
                                                        const std::string& name = "p1") {
  std::uniform_int_distribution<int> gap_dist(1, max_gap);
  std::vector<int> gaps;
  int f = 0;
  for (int i = 0; i < n; ++i) {
    gaps.push_back(gap_dist(rng));
    f += gaps.back();
  }
  std::uniform_int_distribution<int> offset_dist(0, f - 1);
  const int offset = offset_dist(rng);
  std::vector<int> signature(static_cast<std::size_t>(f));
  std::uniform_int_distribution<int> zero_two(0, 1);
  for (int& s : signature) s = zero_two(rng) * 2;
  int slot = offset;
  for (int i = 0; i < n; ++i) {
    signature[static_cast<std::size_t>(slot)] = 1;
    slot = (slot + gaps[static_cast<std::size_t>(i)]) % f;
  }
  return std::make_shared<ShimuraDatum>(p, std::vector<PrimeBlock>{{name, f}},
                                        std::vector<std::vector<int>>{std::move(signature)});
}

inline long random_prime(std::mt19937_64& rng) {
  static const long primes[] = {2, 3, 5};
  std::uniform_int_distribution<int> dist(0, 2);
  return primes[dist(rng)];
}

// Rejection sampling of integer tuples in [-10, 10]^N until the cone
// predicate holds.
inline WeightTuple random_cone_tuple(std::mt19937_64& rng, const ShimuraDatum& d, bool strict) {
  std::uniform_int_distribution<long> dist(-10, 10);
  for (;;) {
    WeightTuple t;
    for (int b = 0; b < d.block_count(); ++b)
      for (const EmbeddingId& tau : d.signature_one_cycle(b)) t.emplace(tau, Rational(dist(rng)));
    const ConeReport report = strict ? ample_check(d, t) : nef_check(d, t);
    if (report.ok) return t;
  }
}

inline WeightTuple random_nef_tuple(std::mt19937_64& rng, const ShimuraDatum& d) {
  return random_cone_tuple(rng, d, false);
}

inline WeightTuple random_ample_tuple(std::mt19937_64& rng, const ShimuraDatum& d) {
  return random_cone_tuple(rng, d, true);
}

// Random nonempty sparse subset of block b's signature-1 cycle.
inline std::set<EmbeddingId> random_sparse_subset(std::mt19937_64& rng, const ShimuraDatum& d,
                                                  int b) {
  const auto& cycle = d.signature_one_cycle(b);
  std::uniform_int_distribution<int> coin(0, 2);
  for (;;) {
    std::set<EmbeddingId> subset;
    for (const EmbeddingId& tau : cycle)
      if (coin(rng) == 0) subset.insert(tau);
    if (!subset.empty() && classify_stratum(d, b, subset) == StratumClass::Sparse) return subset;
  }
}

// shared_ptr conveniences so call sites can pass the datum handle directly.
inline WeightTuple weights_of(const std::shared_ptr<const ShimuraDatum>& d,
                              const std::vector<Rational>& values) {
  return weights_of(*d, values);
}
inline WeightTuple integer_weights(const std::shared_ptr<const ShimuraDatum>& d,
                                   const std::vector<long>& values) {
  return integer_weights(*d, values);
}
inline WeightTuple random_nef_tuple(std::mt19937_64& rng,
                                    const std::shared_ptr<const ShimuraDatum>& d) {
  return random_nef_tuple(rng, *d);
}
inline WeightTuple random_ample_tuple(std::mt19937_64& rng,
                                      const std::shared_ptr<const ShimuraDatum>& d) {
  return random_ample_tuple(rng, *d);
}
inline std::set<EmbeddingId> random_sparse_subset(std::mt19937_64& rng,
                                                  const std::shared_ptr<const ShimuraDatum>& d,
                                                  int b) {
  return random_sparse_subset(rng, *d, b);
}

}  // namespace fixtures
