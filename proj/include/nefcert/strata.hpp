#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nefcert/datum.hpp"
#include "nefcert/picard.hpp"

namespace nefcert {

// Shape of a stratum subset inside one block's signature-1 cycle.
enum class StratumClass { Empty, Full, Adjacent, Sparse };

const char* to_string(StratumClass c);

// Maximal chains of T_b under the successor map tau -> sigma^{-n_tau} tau
// restricted to block b, each listed in successor order and the chains
// ordered by the slot of their head.  T_b must be a proper subset of the
// block's signature-1 cycle (a full cycle has no chain heads).
std::vector<std::vector<EmbeddingId>> cycle_decomposition(const ShimuraDatum& datum, int b,
                                                          const std::set<EmbeddingId>& t_block);

// Pads every odd-length chain with the successor of its last element so
// all chains have even length.  Returns the padded chains and the set of
// appended elements I_T.
std::pair<std::vector<std::vector<EmbeddingId>>, std::set<EmbeddingId>> extend_cycles_to_even(
    const ShimuraDatum& datum, const std::vector<std::vector<EmbeddingId>>& cycles);

// (T', I_T) of the even extension: T' = T union I_T.
std::pair<std::set<EmbeddingId>, std::set<EmbeddingId>> extend_to_even(
    const ShimuraDatum& datum, const std::vector<std::vector<EmbeddingId>>& cycles);

// Delta(T): for every odd position tau_j of each padded chain, the raw
// sigma^{-1} segment {tau_j, sigma^{-1} tau_j, ..., sigma^{-(n_{tau_j}-1)} tau_j}.
std::set<EmbeddingId> delta_set(const ShimuraDatum& datum,
                                const std::vector<std::vector<EmbeddingId>>& padded_cycles);

// Datum induced on the stratum X_T: odd chain positions drop to
// signature 0, even positions rise to signature 2; other slots keep
// their signature.  Requires T to miss at least one signature-1 slot in
// every block it touches.  Also returns the padding set I_T.
std::pair<ShimuraDatum, std::set<EmbeddingId>> induced_datum(const ShimuraDatum& datum,
                                                             const std::set<EmbeddingId>& t);

// Classification of T_b within the cyclic labelling of block b's
// signature-1 slots: Empty, Full (all of them), Adjacent (two chosen
// labels cyclically consecutive), else Sparse.
StratumClass classify_stratum(const ShimuraDatum& datum, int b,
                              const std::set<EmbeddingId>& t_block);

// Rewriting system induced by the vanishing partial Hasse invariants of T.
RelationSet restriction_relations(std::shared_ptr<const ShimuraDatum> datum,
                                  const std::set<EmbeddingId>& t);

// Everything cmd-level consumers need about one stratum.
struct StratumDescriptor {
  std::set<EmbeddingId> stratum;
  std::vector<std::vector<EmbeddingId>> cycles;         // across blocks, block-major
  std::vector<std::vector<EmbeddingId>> padded_cycles;  // even extension of the above
  std::set<EmbeddingId> t_prime;                        // T' = T union I_T
  std::set<EmbeddingId> t_prime_zero;                   // odd positions (signature drops to 0)
  std::set<EmbeddingId> t_prime_two;                    // even positions (signature rises to 2)
  std::set<EmbeddingId> padding;                        // I_T
  std::set<EmbeddingId> delta;                          // Delta(T)
  std::shared_ptr<const ShimuraDatum> induced;
};

StratumDescriptor describe_stratum(const ShimuraDatum& datum, const std::set<EmbeddingId>& t);

// "p1.2,p1.7,p1.10" (members sorted by block, then slot); "-" for the
// empty set.
std::string format_stratum_set(const ShimuraDatum& datum, const std::set<EmbeddingId>& t);

}  // namespace nefcert
