#include "nefcert/strata.hpp"

#include <algorithm>

#include "nefcert/errors.hpp"

namespace nefcert {

namespace {

// Splits T by block and validates every member is signature 1.
std::vector<std::set<EmbeddingId>> split_by_block(const ShimuraDatum& datum,
                                                  const std::set<EmbeddingId>& t) {
  std::vector<std::set<EmbeddingId>> by_block(static_cast<std::size_t>(datum.block_count()));
  for (const EmbeddingId& tau : t) {
    if (datum.signature(tau) != 1)
      throw domain_error("stratum member " + format_embedding(datum, tau) +
                         " is not signature 1");
    by_block[static_cast<std::size_t>(tau.block)].insert(tau);
  }
  return by_block;
}

}  // namespace

const char* to_string(StratumClass c) {
  switch (c) {
    case StratumClass::Empty: return "empty";
    case StratumClass::Full: return "full";
    case StratumClass::Adjacent: return "adjacent";
    case StratumClass::Sparse: return "sparse";
  }
  return "?";
}

std::vector<std::vector<EmbeddingId>> cycle_decomposition(const ShimuraDatum& datum, int b,
                                                          const std::set<EmbeddingId>& t_block) {
  for (const EmbeddingId& tau : t_block) {
    if (tau.block != b) throw domain_error("stratum member outside the requested block");
    if (datum.signature(tau) != 1)
      throw domain_error("stratum member " + format_embedding(datum, tau) +
                         " is not signature 1");
  }
  const auto& cycle = datum.signature_one_cycle(b);
  if (!t_block.empty() && t_block.size() == cycle.size())
    throw stratum_error("block '" + datum.block(b).name +
                        "' is fully covered: no chain decomposition exists");

  std::vector<std::vector<EmbeddingId>> chains;
  for (const EmbeddingId& head : t_block) {  // set order = increasing slot
    if (t_block.count(datum.cycle_predecessor(head))) continue;  // not a chain head
    std::vector<EmbeddingId> chain;
    EmbeddingId tau = head;
    while (t_block.count(tau)) {
      chain.push_back(tau);
      tau = datum.cycle_successor(tau);
    }
    chains.push_back(std::move(chain));
  }
  return chains;  // heads visited in increasing slot order already
}

std::pair<std::vector<std::vector<EmbeddingId>>, std::set<EmbeddingId>> extend_cycles_to_even(
    const ShimuraDatum& datum, const std::vector<std::vector<EmbeddingId>>& cycles) {
  std::set<EmbeddingId> seen;
  for (const auto& chain : cycles)
    for (const EmbeddingId& tau : chain)
      if (!seen.insert(tau).second)
        throw stratum_error("chains overlap at " + format_embedding(datum, tau));

  std::vector<std::vector<EmbeddingId>> padded = cycles;
  std::set<EmbeddingId> appended;
  for (auto& chain : padded) {
    if (chain.empty()) throw stratum_error("empty chain in cycle decomposition");
    if (chain.size() % 2 == 0) continue;
    const EmbeddingId pad = datum.cycle_successor(chain.back());
    if (!seen.insert(pad).second)
      throw stratum_error("even extension collides at " + format_embedding(datum, pad));
    chain.push_back(pad);
    appended.insert(pad);
  }
  return {std::move(padded), std::move(appended)};
}

std::pair<std::set<EmbeddingId>, std::set<EmbeddingId>> extend_to_even(
    const ShimuraDatum& datum, const std::vector<std::vector<EmbeddingId>>& cycles) {
  auto [padded, appended] = extend_cycles_to_even(datum, cycles);
  std::set<EmbeddingId> all;
  for (const auto& chain : padded) all.insert(chain.begin(), chain.end());
  return {std::move(all), std::move(appended)};
}

std::set<EmbeddingId> delta_set(const ShimuraDatum& datum,
                                const std::vector<std::vector<EmbeddingId>>& padded_cycles) {
  std::set<EmbeddingId> delta;
  for (const auto& chain : padded_cycles) {
    if (chain.size() % 2 != 0) throw stratum_error("delta set needs even chains");
    for (std::size_t j = 0; j < chain.size(); j += 2) {  // odd positions, 1-based
      const unsigned long span = datum.n_gap(chain[j]);
      for (unsigned long k = 0; k < span; ++k)
        delta.insert(sigma_inverse_pow(datum, chain[j], k));
    }
  }
  return delta;
}

std::pair<ShimuraDatum, std::set<EmbeddingId>> induced_datum(const ShimuraDatum& datum,
                                                             const std::set<EmbeddingId>& t) {
  const auto by_block = split_by_block(datum, t);
  std::vector<std::vector<int>> signature = datum.signature_table();
  std::set<EmbeddingId> padding;
  for (int b = 0; b < datum.block_count(); ++b) {
    const auto& t_block = by_block[static_cast<std::size_t>(b)];
    if (t_block.empty()) continue;
    if (t_block.size() == datum.signature_one_cycle(b).size())
      throw stratum_error("block '" + datum.block(b).name +
                          "' must keep at least one signature-1 slot");
    const auto chains = cycle_decomposition(datum, b, t_block);
    auto [padded, appended] = extend_cycles_to_even(datum, chains);
    padding.insert(appended.begin(), appended.end());
    for (const auto& chain : padded)
      for (std::size_t j = 0; j < chain.size(); ++j)
        signature[static_cast<std::size_t>(b)][static_cast<std::size_t>(chain[j].slot - 1)] =
            (j % 2 == 0) ? 0 : 2;
  }
  return {datum.with_signature(std::move(signature)), std::move(padding)};
}

StratumClass classify_stratum(const ShimuraDatum& datum, int b,
                              const std::set<EmbeddingId>& t_block) {
  const auto& cycle = datum.signature_one_cycle(b);
  for (const EmbeddingId& tau : t_block) {
    if (tau.block != b) throw domain_error("stratum member outside the requested block");
    if (datum.signature(tau) != 1)
      throw domain_error("stratum member " + format_embedding(datum, tau) +
                         " is not signature 1");
  }
  if (t_block.empty()) return StratumClass::Empty;
  if (t_block.size() == cycle.size()) return StratumClass::Full;
  for (const EmbeddingId& tau : t_block)
    if (t_block.count(datum.cycle_successor(tau))) return StratumClass::Adjacent;
  return StratumClass::Sparse;
}

RelationSet restriction_relations(std::shared_ptr<const ShimuraDatum> datum,
                                  const std::set<EmbeddingId>& t) {
  return RelationSet(std::move(datum), t);
}

StratumDescriptor describe_stratum(const ShimuraDatum& datum, const std::set<EmbeddingId>& t) {
  const auto by_block = split_by_block(datum, t);
  StratumDescriptor out;
  out.stratum = t;
  for (int b = 0; b < datum.block_count(); ++b) {
    const auto& t_block = by_block[static_cast<std::size_t>(b)];
    if (t_block.empty()) continue;
    if (t_block.size() == datum.signature_one_cycle(b).size())
      throw stratum_error("block '" + datum.block(b).name +
                          "' must keep at least one signature-1 slot");
    const auto chains = cycle_decomposition(datum, b, t_block);
    auto [padded, appended] = extend_cycles_to_even(datum, chains);
    for (const auto& chain : padded) {
      for (std::size_t j = 0; j < chain.size(); ++j)
        ((j % 2 == 0) ? out.t_prime_zero : out.t_prime_two).insert(chain[j]);
      out.t_prime.insert(chain.begin(), chain.end());
    }
    const auto delta = delta_set(datum, padded);
    out.delta.insert(delta.begin(), delta.end());
    out.padding.insert(appended.begin(), appended.end());
    out.cycles.insert(out.cycles.end(), chains.begin(), chains.end());
    out.padded_cycles.insert(out.padded_cycles.end(), padded.begin(), padded.end());
  }
  out.induced = std::make_shared<ShimuraDatum>(induced_datum(datum, t).first);
  return out;
}

std::string format_stratum_set(const ShimuraDatum& datum, const std::set<EmbeddingId>& t) {
  if (t.empty()) return "-";
  std::string out;
  for (const EmbeddingId& tau : t) {
    if (!out.empty()) out += ',';
    out += format_embedding(datum, tau);
  }
  return out;
}

}  // namespace nefcert
