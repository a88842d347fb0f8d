#include "nefcert/datum.hpp"

#include <algorithm>

#include "nefcert/errors.hpp"

namespace nefcert {

namespace {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

ShimuraDatum::ShimuraDatum(long p, std::vector<PrimeBlock> blocks,
                           std::vector<std::vector<int>> signature)
    : p_(p), blocks_(std::move(blocks)), signature_(std::move(signature)) {
  if (!is_prime(p_)) throw input_error("p = " + std::to_string(p_) + " is not prime");
  if (blocks_.empty()) throw input_error("datum needs at least one block");
  if (signature_.size() != blocks_.size())
    throw input_error("signature table does not match block list");

  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const PrimeBlock& blk = blocks_[b];
    if (blk.f < 1) throw input_error("block '" + blk.name + "' has f < 1");
    if (blk.name.empty()) throw input_error("block with empty name");
    if (signature_[b].size() != static_cast<std::size_t>(blk.f))
      throw input_error("block '" + blk.name + "': signature length != f");
    for (int s : signature_[b])
      if (s < 0 || s > 2)
        throw input_error("block '" + blk.name + "': signature values must be 0, 1 or 2");
    for (std::size_t c = 0; c < b; ++c)
      if (blocks_[c].name == blk.name)
        throw input_error("duplicate block name '" + blk.name + "'");
  }

  // Since sigma^{-1} increments the slot, the signature-1 cycle of a
  // block is its signature-1 slots in increasing slot order, and the gap
  // after each one is the slot distance to the next (wrapping at f).
  cycles_.resize(blocks_.size());
  gaps_.resize(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const int f = blocks_[b].f;
    for (int slot = 1; slot <= f; ++slot)
      if (signature_[b][slot - 1] == 1)
        cycles_[b].push_back(EmbeddingId{static_cast<int>(b), slot});
    const std::size_t n = cycles_[b].size();
    gaps_[b].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int here = cycles_[b][i].slot;
      const int next = cycles_[b][(i + 1) % n].slot;
      gaps_[b][i] = static_cast<unsigned long>(i + 1 < n ? next - here : f - here + next);
    }
  }
}

void ShimuraDatum::require_block(int b) const {
  if (b < 0 || b >= block_count())
    throw input_error("block index " + std::to_string(b) + " out of range");
}

const PrimeBlock& ShimuraDatum::block(int b) const {
  require_block(b);
  return blocks_[b];
}

bool ShimuraDatum::contains(const EmbeddingId& tau) const {
  return tau.block >= 0 && tau.block < block_count() && tau.slot >= 1 &&
         tau.slot <= blocks_[tau.block].f;
}

int ShimuraDatum::signature(const EmbeddingId& tau) const {
  if (!contains(tau)) throw input_error("unknown embedding");
  return signature_[tau.block][tau.slot - 1];
}

const std::vector<EmbeddingId>& ShimuraDatum::signature_one_cycle(int b) const {
  require_block(b);
  return cycles_[b];
}

int ShimuraDatum::signature_one_total() const {
  int total = 0;
  for (const auto& c : cycles_) total += static_cast<int>(c.size());
  return total;
}

int ShimuraDatum::cycle_label(const EmbeddingId& tau) const {
  if (signature(tau) != 1)
    throw domain_error("embedding " + format_embedding(*this, tau) + " is not signature 1");
  const auto& cycle = cycles_[tau.block];
  const auto it = std::lower_bound(cycle.begin(), cycle.end(), tau);
  return static_cast<int>(it - cycle.begin()) + 1;
}

unsigned long ShimuraDatum::n_gap(const EmbeddingId& tau) const {
  return gaps_[tau.block][cycle_label(tau) - 1];
}

unsigned long ShimuraDatum::n_gap_at(int b, int label) const {
  require_block(b);
  if (label < 1 || label > static_cast<int>(gaps_[b].size()))
    throw domain_error("cycle label out of range");
  return gaps_[b][label - 1];
}

EmbeddingId ShimuraDatum::cycle_successor(const EmbeddingId& tau) const {
  const auto& cycle = cycles_[tau.block];
  const int label = cycle_label(tau);
  return cycle[static_cast<std::size_t>(label) % cycle.size()];
}

EmbeddingId ShimuraDatum::cycle_predecessor(const EmbeddingId& tau) const {
  const auto& cycle = cycles_[tau.block];
  const int label = cycle_label(tau);
  return cycle[(static_cast<std::size_t>(label) + cycle.size() - 2) % cycle.size()];
}

ShimuraDatum ShimuraDatum::with_signature(std::vector<std::vector<int>> signature) const {
  return ShimuraDatum(p_, blocks_, std::move(signature));
}

bool operator==(const ShimuraDatum& a, const ShimuraDatum& b) {
  if (a.p_ != b.p_ || a.blocks_.size() != b.blocks_.size()) return false;
  for (std::size_t i = 0; i < a.blocks_.size(); ++i)
    if (a.blocks_[i].name != b.blocks_[i].name || a.blocks_[i].f != b.blocks_[i].f) return false;
  return a.signature_ == b.signature_;
}

EmbeddingId sigma_inverse(const ShimuraDatum& datum, const EmbeddingId& tau) {
  if (!datum.contains(tau)) throw input_error("unknown embedding");
  const int f = datum.block(tau.block).f;
  return EmbeddingId{tau.block, tau.slot % f + 1};
}

EmbeddingId sigma_inverse_pow(const ShimuraDatum& datum, const EmbeddingId& tau, unsigned long k) {
  if (!datum.contains(tau)) throw input_error("unknown embedding");
  const int f = datum.block(tau.block).f;
  const long shifted = (static_cast<long>(tau.slot) - 1 + static_cast<long>(k % f)) % f;
  return EmbeddingId{tau.block, static_cast<int>(shifted) + 1};
}

std::string format_embedding(const ShimuraDatum& datum, const EmbeddingId& tau) {
  if (!datum.contains(tau)) throw input_error("unknown embedding");
  return datum.block(tau.block).name + "." + std::to_string(tau.slot);
}

}  // namespace nefcert
