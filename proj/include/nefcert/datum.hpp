#pragma once

#include <compare>
#include <string>
#include <vector>

namespace nefcert {

// One slot of the combinatorial datum: (block index, 1-based slot inside
// the block).  Slots within a block are the embeddings of its unramified
// local field, cyclically permuted by Frobenius.
struct EmbeddingId {
  int block = 0;
  int slot = 1;

  friend auto operator<=>(const EmbeddingId&, const EmbeddingId&) = default;
};

// A prime block: the slots above one prime of the totally real field,
// sitting in a cycle of length f (the inertia degree).
struct PrimeBlock {
  std::string name;
  int f = 1;
};

// Combinatorial Shimura datum mod p: a prime p, a list of blocks, and a
// signature in {0,1,2} for every slot.  Signature 1 marks the slots
// whose Hodge line contributes a partial Hasse invariant.
//
// Immutable after construction; per-block signature-1 cycles and gap
// lengths are precomputed.  The inverse Frobenius shift sends slot j to
// slot j+1 (cyclically), so the signature-1 cycle of a block is simply
// its signature-1 slots in increasing slot order.
class ShimuraDatum {
 public:
  ShimuraDatum(long p, std::vector<PrimeBlock> blocks,
               std::vector<std::vector<int>> signature);

  long p() const { return p_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const PrimeBlock& block(int b) const;
  const std::vector<PrimeBlock>& blocks() const { return blocks_; }

  int signature(const EmbeddingId& tau) const;
  bool contains(const EmbeddingId& tau) const;

  // Signature-1 slots of block b in inverse-Frobenius cyclic order
  // (equivalently: increasing slot order).  Empty if the block has none.
  const std::vector<EmbeddingId>& signature_one_cycle(int b) const;

  // Total number of signature-1 slots across all blocks.
  int signature_one_total() const;

  // 1-based position of tau inside its block's signature-1 cycle.
  int cycle_label(const EmbeddingId& tau) const;

  // Gap n_tau: least n >= 1 with sigma^{-n} tau again of signature 1.
  // The gaps around one block's cycle sum to its inertia degree f.
  unsigned long n_gap(const EmbeddingId& tau) const;
  unsigned long n_gap_at(int b, int label) const;  // label is 1-based

  // Next / previous signature-1 slot around the cycle: sigma^{-n_tau} tau.
  EmbeddingId cycle_successor(const EmbeddingId& tau) const;
  EmbeddingId cycle_predecessor(const EmbeddingId& tau) const;

  // Replaces the signature map wholesale (used to derive induced data).
  ShimuraDatum with_signature(std::vector<std::vector<int>> signature) const;

  friend bool operator==(const ShimuraDatum& a, const ShimuraDatum& b);
  friend bool operator!=(const ShimuraDatum& a, const ShimuraDatum& b) { return !(a == b); }

  const std::vector<std::vector<int>>& signature_table() const { return signature_; }

 private:
  void require_block(int b) const;

  long p_ = 2;
  std::vector<PrimeBlock> blocks_;
  std::vector<std::vector<int>> signature_;       // [block][slot-1] in {0,1,2}
  std::vector<std::vector<EmbeddingId>> cycles_;  // per block, signature-1 slots in cyclic order
  std::vector<std::vector<unsigned long>> gaps_;  // per block, gap after cycle position i
};

// sigma^{-1}: slot j -> j+1 inside its block, wrapping at f.
EmbeddingId sigma_inverse(const ShimuraDatum& datum, const EmbeddingId& tau);

// sigma^{-k} for k >= 0.
EmbeddingId sigma_inverse_pow(const ShimuraDatum& datum, const EmbeddingId& tau, unsigned long k);

// "name.slot" token, e.g. "p1.7".
std::string format_embedding(const ShimuraDatum& datum, const EmbeddingId& tau);

}  // namespace nefcert
