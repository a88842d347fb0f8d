#include "nefcert/certify.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "nefcert/errors.hpp"
#include "nefcert/hasse.hpp"
#include "nefcert/strata.hpp"

namespace nefcert {

namespace {

// 0-based positions of the chosen slots inside the block's cycle.
std::vector<int> chosen_positions(const ShimuraDatum& datum, int b,
                                  const std::set<EmbeddingId>& t_block) {
  const auto& cycle = datum.signature_one_cycle(b);
  std::vector<int> positions;
  for (int i = 0; i < static_cast<int>(cycle.size()); ++i)
    if (t_block.count(cycle[static_cast<std::size_t>(i)])) positions.push_back(i);
  return positions;
}

// Margin V at cycle position i: t_i - t_{i+1} / p^{n_i}.
Rational margin_at(const ShimuraDatum& datum, const WeightTuple& t, int b, int pos) {
  const auto& cycle = datum.signature_one_cycle(b);
  const int n = static_cast<int>(cycle.size());
  const EmbeddingId tau = cycle[static_cast<std::size_t>(pos)];
  const EmbeddingId succ = cycle[static_cast<std::size_t>((pos + 1) % n)];
  return t.at(tau) - t.at(succ) / Rational::pow_int(datum.p(), datum.n_gap_at(b, pos + 1));
}

// p-weighted weight of the gap segment ahead of chosen position `cur`,
// i.e. over labels prev+2 .. cur-1 (cyclically):
//   U = sum_m p^{n_m + n_{m+1} + ... + n_{cur-1}} t_m.
Rational segment_weight(const ShimuraDatum& datum, const WeightTuple& t, int b, int prev,
                        int cur) {
  const auto& cycle = datum.signature_one_cycle(b);
  const int n = static_cast<int>(cycle.size());
  const int len = ((cur - prev - 2) % n + n) % n;
  Rational u(0);
  unsigned long exponent = 0;
  for (int s = 0; s < len; ++s) {
    const int m = ((cur - 1 - s) % n + n) % n;
    exponent += datum.n_gap_at(b, m + 1);
    u += Rational::pow_int(datum.p(), exponent) * t.at(cycle[static_cast<std::size_t>(m)]);
  }
  return u;
}

// Class sum_{tau in block b, tau not excluded} t_tau [omega_tau].
PicardClass block_class_without(const std::shared_ptr<const ShimuraDatum>& datum,
                                const WeightTuple& t, int b,
                                const std::set<EmbeddingId>& excluded) {
  PicardClass out(datum);
  for (const EmbeddingId& tau : datum->signature_one_cycle(b))
    if (!excluded.count(tau)) out.add_term(tau, t.at(tau));
  return out;
}

// Child claim of one chosen label: induced datum dropping the pair
// (tau, successor of tau), with the pair's weights removed.
std::pair<std::shared_ptr<const ShimuraDatum>, WeightTuple> sparse_child(
    const std::shared_ptr<const ShimuraDatum>& datum, const WeightTuple& t,
    const EmbeddingId& tau) {
  auto induced = induced_datum(*datum, {tau});
  WeightTuple reduced = t;
  reduced.erase(tau);
  reduced.erase(datum->cycle_successor(tau));
  return {std::make_shared<ShimuraDatum>(std::move(induced.first)), std::move(reduced)};
}

std::string nef_violation_message(const ShimuraDatum& datum, const ConeReport& report,
                                  const char* who) {
  std::string msg = std::string(who) + " needs a nef tuple; violated:";
  for (const auto& c : report.violations()) msg += "\n  " + format_constraint(datum, c, false);
  return msg;
}

}  // namespace

std::pair<std::shared_ptr<const ShimuraDatum>, WeightTuple> adjacent_reduce(
    const std::shared_ptr<const ShimuraDatum>& datum, const WeightTuple& t, int b,
    const std::pair<EmbeddingId, EmbeddingId>& pair) {
  const ShimuraDatum& d = *datum;
  validate_weights(d, t);
  const auto& [first, second] = pair;
  if (first.block != b || second.block != b)
    throw domain_error("adjacent pair must lie in the requested block");
  if (d.signature(first) != 1 || d.signature(second) != 1)
    throw domain_error("adjacent pair must be signature 1");
  if (d.cycle_successor(first) != second)
    throw domain_error("pair is not adjacent in the signature-1 cycle");
  const ConeReport nef = nef_check(d, t);
  if (!nef.ok) throw domain_error(nef_violation_message(d, nef, "adjacent_reduce"));

  const int n = static_cast<int>(d.signature_one_cycle(b).size());
  WeightTuple reduced = t;
  reduced.erase(first);
  reduced.erase(second);
  std::shared_ptr<const ShimuraDatum> child;
  if (n == 2) {
    // The pair is the whole cycle: the block leaves the signature-1
    // locus entirely and contributes no weights downstream.
    auto signature = d.signature_table();
    signature[static_cast<std::size_t>(b)][static_cast<std::size_t>(first.slot - 1)] = 0;
    signature[static_cast<std::size_t>(b)][static_cast<std::size_t>(second.slot - 1)] = 2;
    child = std::make_shared<ShimuraDatum>(d.with_signature(std::move(signature)));
  } else {
    child = std::make_shared<ShimuraDatum>(induced_datum(d, {first, second}).first);
    const EmbeddingId third = d.cycle_successor(second);
    const Rational merged =
        Rational::pow_int(d.p(), d.n_gap(first) + d.n_gap(second)) * t.at(first) -
        Rational::pow_int(d.p(), d.n_gap(second)) * t.at(second) + t.at(third);
    reduced[third] = merged;
  }
  const ConeReport reduced_nef = nef_check(*child, reduced);
  if (!reduced_nef.ok)
    throw domain_error(nef_violation_message(*child, reduced_nef, "internal: reduced tuple"));
  return {std::move(child), std::move(reduced)};
}

std::optional<SparseSolution> sparse_solve(const ShimuraDatum& datum, const WeightTuple& t,
                                           int b, const std::set<EmbeddingId>& t_block) {
  validate_weights(datum, t);
  if (classify_stratum(datum, b, t_block) != StratumClass::Sparse)
    throw domain_error("sparse_solve needs a nonempty sparse chosen set");
  const auto& cycle = datum.signature_one_cycle(b);
  const int n = static_cast<int>(cycle.size());
  const std::vector<int> chosen = chosen_positions(datum, b, t_block);
  const int k = static_cast<int>(chosen.size());

  SparseSolution sol;
  for (int pos : chosen) {
    sol.chosen.push_back(cycle[static_cast<std::size_t>(pos)]);
    const Rational v = margin_at(datum, t, b, pos);
    if (!(v > Rational(0)))
      throw domain_error("sparse_solve needs a strict margin at " +
                         format_embedding(datum, cycle[static_cast<std::size_t>(pos)]) +
                         " (V = " + v.str() + ")");
    sol.V.push_back(v);
  }
  for (int j = 0; j < k; ++j)
    sol.U.push_back(segment_weight(datum, t, b, chosen[static_cast<std::size_t>((j + k - 1) % k)],
                                   chosen[static_cast<std::size_t>(j)]));

  Rational w(0);
  for (int j = 0; j < k; ++j) w += (sol.U[j] + sol.V[j]) / sol.V[j];
  if (w == Rational(1)) return std::nullopt;  // order-2 cycle: no decomposition exists
  sol.S = w / (w - Rational(1));
  for (int j = 0; j < k; ++j)
    sol.A.push_back((sol.U[j] + sol.V[j]) * (sol.S - Rational(1)) / sol.V[j]);

  // B per gap segment: forward substitution of (1 - S) t = H' B, where
  // H' is lower-bidiagonal with -1 diagonal and p^{n_m} subdiagonal.
  for (int j = 0; j < k; ++j) {
    const int prev = chosen[static_cast<std::size_t>((j + k - 1) % k)];
    const int cur = chosen[static_cast<std::size_t>(j)];
    const int len = ((cur - prev - 2) % n + n) % n;
    Rational carry(0);
    for (int s = 0; s < len; ++s) {
      const int m = ((prev + 2 + s) % n + n) % n;
      const Rational value =
          carry + (sol.S - Rational(1)) * t.at(cycle[static_cast<std::size_t>(m)]);
      sol.B.emplace(cycle[static_cast<std::size_t>(m)], value);
      carry = Rational::pow_int(datum.p(), datum.n_gap_at(b, m + 1)) * value;
    }
  }
  return sol;
}

VerifyReport verify_sparse(const std::shared_ptr<const ShimuraDatum>& datum,
                           const WeightTuple& t, int b, const std::set<EmbeddingId>& t_block,
                           const SparseSolution& sol) {
  VerifyReport rep;
  const ShimuraDatum& d = *datum;
  validate_weights(d, t);
  if (classify_stratum(d, b, t_block) != StratumClass::Sparse) {
    rep.fail("chosen set is not sparse");
    return rep;
  }
  const auto& cycle = d.signature_one_cycle(b);
  const std::vector<int> chosen = chosen_positions(d, b, t_block);
  const int k = static_cast<int>(chosen.size());

  std::vector<EmbeddingId> expected_chosen;
  for (int pos : chosen) expected_chosen.push_back(cycle[static_cast<std::size_t>(pos)]);
  if (sol.chosen != expected_chosen) {
    rep.fail("chosen labels do not match the stratum");
    return rep;
  }
  if (static_cast<int>(sol.U.size()) != k || static_cast<int>(sol.V.size()) != k ||
      static_cast<int>(sol.A.size()) != k) {
    rep.fail("solution arrays do not match the number of chosen labels");
    return rep;
  }

  for (int j = 0; j < k; ++j) {
    const Rational v = margin_at(d, t, b, chosen[static_cast<std::size_t>(j)]);
    const Rational u = segment_weight(d, t, b, chosen[static_cast<std::size_t>((j + k - 1) % k)],
                                      chosen[static_cast<std::size_t>(j)]);
    if (sol.V[j] != v) rep.fail("stored V differs from recomputation at index " + std::to_string(j));
    if (sol.U[j] != u) rep.fail("stored U differs from recomputation at index " + std::to_string(j));
    if (!(v > Rational(0))) rep.fail("margin V must be strictly positive at index " + std::to_string(j));
  }

  Rational total(0);
  for (const Rational& a : sol.A) total += a;
  if (sol.S != total) rep.fail("S is not the sum of the A coefficients");
  if (!(sol.S > Rational(1))) rep.fail("S must exceed 1");
  for (int j = 0; j < k; ++j) {
    const Rational uv = sol.U[j] + sol.V[j];
    if (sol.U[j] * sol.A[j] != uv * (Rational(1) + sol.A[j] - sol.S))
      rep.fail("U-identity fails at index " + std::to_string(j));
    if (sol.V[j] * sol.A[j] != uv * (sol.S - Rational(1)))
      rep.fail("V-identity fails at index " + std::to_string(j));
    if (!(sol.A[j] > Rational(0))) rep.fail("A must be strictly positive at index " + std::to_string(j));
    if (Rational(1) + sol.A[j] - sol.S < Rational(0))
      rep.fail("1 + A - S must be nonnegative at index " + std::to_string(j));
  }

  // Expected auxiliary labels: everything outside the chosen pairs.
  std::set<EmbeddingId> auxiliary;
  for (int i = 0; i < static_cast<int>(cycle.size()); ++i) {
    const EmbeddingId tau = cycle[static_cast<std::size_t>(i)];
    const EmbeddingId pred = cycle[(static_cast<std::size_t>(i) + cycle.size() - 1) % cycle.size()];
    if (!t_block.count(tau) && !t_block.count(pred)) auxiliary.insert(tau);
  }
  std::set<EmbeddingId> stored;
  for (const auto& [tau, value] : sol.B) {
    stored.insert(tau);
    if (value < Rational(0)) rep.fail("B must be nonnegative at " + format_embedding(d, tau));
  }
  if (stored != auxiliary) rep.fail("auxiliary Hasse labels do not match the gap segments");
  if (!rep.ok) return rep;

  // Symbolic identity in the stratum quotient:
  //   [omega^t]|_T = sum_j A_j [omega^{s(j)}]|_T + sum_a B_a [h_a]|_T.
  const RelationSet rels(datum, t_block);
  const PicardClass lhs = restrict(block_class_without(datum, t, b, {}), rels);
  PicardClass rhs(datum);
  for (int j = 0; j < k; ++j) {
    const EmbeddingId tau = expected_chosen[static_cast<std::size_t>(j)];
    const PicardClass dropped =
        block_class_without(datum, t, b, {tau, d.cycle_successor(tau)});
    rhs = add(rhs, scale(sol.A[j], restrict(dropped, rels)));
  }
  for (const auto& [tau, value] : sol.B)
    rhs = add(rhs, scale(value, restrict(hasse_class(datum, tau), rels)));
  if (lhs != rhs) rep.fail("quotient identity fails");
  return rep;
}

std::vector<std::set<EmbeddingId>> stratum_subsets(const ShimuraDatum& datum, int b,
                                                   int max_size) {
  const auto& cycle = datum.signature_one_cycle(b);
  const int n = static_cast<int>(cycle.size());
  std::vector<std::set<EmbeddingId>> out;
  for (int size = 1; size <= std::min(max_size, n); ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::set<EmbeddingId> subset;
      for (int i : idx) subset.insert(cycle[static_cast<std::size_t>(i)]);
      out.push_back(std::move(subset));
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int q = pos + 1; q < size; ++q)
        idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
  return out;
}

namespace {

std::string claim_key(const ShimuraDatum& d, const WeightTuple& t) {
  std::string key = "p=" + std::to_string(d.p());
  for (int b = 0; b < d.block_count(); ++b) {
    key += "|" + d.block(b).name + ":" + std::to_string(d.block(b).f) + ":";
    for (int s : d.signature_table()[static_cast<std::size_t>(b)])
      key += static_cast<char>('0' + s);
  }
  key += "|w";
  for (const auto& [tau, w] : t)
    key += ";" + std::to_string(tau.block) + "." + std::to_string(tau.slot) + "=" + w.str();
  return key;
}

std::optional<std::pair<EmbeddingId, EmbeddingId>> lowest_adjacent_pair(
    const ShimuraDatum& datum, int b, const std::set<EmbeddingId>& t_block) {
  const auto& cycle = datum.signature_one_cycle(b);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const EmbeddingId tau = cycle[i];
    const EmbeddingId succ = cycle[(i + 1) % cycle.size()];
    if (t_block.count(tau) && t_block.count(succ)) return std::make_pair(tau, succ);
  }
  return std::nullopt;
}

class CertificateBuilder {
 public:
  explicit CertificateBuilder(BuildOptions options) : options_(options) {}

  CertificatePtr build(const std::shared_ptr<const ShimuraDatum>& datum, const WeightTuple& t) {
    validate_weights(*datum, t);
    const std::string key = claim_key(*datum, t);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;

    const ConeReport nef = nef_check(*datum, t);
    if (!nef.ok) throw domain_error(nef_violation_message(*datum, nef, "build_certificate"));

    auto cert = std::make_shared<Certificate>();
    cert->datum = datum;
    cert->weights = t;
    for (int b = 0; b < datum->block_count(); ++b) {
      const auto& cycle = datum->signature_one_cycle(b);
      const int n = static_cast<int>(cycle.size());
      if (n == 0) continue;
      if (n > options_.max_block_order)
        throw domain_error("block '" + datum->block(b).name + "' has " + std::to_string(n) +
                           " signature-1 slots; certificate cap is " +
                           std::to_string(options_.max_block_order));
      BlockSection section;
      section.block = b;
      section.generic.lambda = lambda_coefficients(*datum, b, block_weight_vector(*datum, b, t));
      for (const auto& subset : stratum_subsets(*datum, b, n))
        section.strata.push_back(stratum_node(datum, t, b, subset));
      cert->sections.push_back(std::move(section));
    }
    CertificatePtr out = cert;
    memo_.emplace(key, out);
    return out;
  }

 private:
  StratumNode stratum_node(const std::shared_ptr<const ShimuraDatum>& datum,
                           const WeightTuple& t, int b, const std::set<EmbeddingId>& subset) {
    const ShimuraDatum& d = *datum;
    switch (classify_stratum(d, b, subset)) {
      case StratumClass::Full:
        return FullVanishingNode{subset};
      case StratumClass::Adjacent: {
        const auto pair = lowest_adjacent_pair(d, b, subset);
        auto reduced = adjacent_reduce(datum, t, b, *pair);
        return AdjacentReductionNode{subset, pair->first, pair->second,
                                     build(reduced.first, reduced.second)};
      }
      case StratumClass::Sparse: {
        // A chosen label exactly on its cone wall reduces the stratum
        // to the single child claim of that label.
        for (const EmbeddingId& tau : subset) {
          if (!margin_at(d, t, b, d.cycle_label(tau) - 1).is_zero()) continue;
          auto child = sparse_child(datum, t, tau);
          return TightReductionNode{subset, tau, build(child.first, child.second)};
        }
        if (auto sol = sparse_solve(d, t, b, subset)) {
          std::vector<CertificatePtr> children;
          for (const EmbeddingId& tau : sol->chosen) {
            auto child = sparse_child(datum, t, tau);
            children.push_back(build(child.first, child.second));
          }
          return SparseDecompositionNode{subset, std::move(*sol), std::move(children)};
        }
        const EmbeddingId tau = *subset.begin();
        const Rational degree =
            Rational::pow_int(d.p(), d.n_gap(tau)) * t.at(tau) - t.at(d.cycle_successor(tau));
        auto child = sparse_child(datum, t, tau);
        return FiberLeafNode{subset, tau, degree, build(child.first, child.second)};
      }
      case StratumClass::Empty:
        break;
    }
    throw domain_error("internal: empty subset in stratum enumeration");
  }

  BuildOptions options_;
  std::map<std::string, CertificatePtr> memo_;
};

std::vector<const Certificate*> reachable_entries(const CertificatePtr& root) {
  std::vector<const Certificate*> order;
  std::set<const Certificate*> seen;
  std::deque<const Certificate*> queue;
  if (root) {
    queue.push_back(root.get());
    seen.insert(root.get());
  }
  while (!queue.empty()) {
    const Certificate* cert = queue.front();
    queue.pop_front();
    order.push_back(cert);
    auto visit = [&](const CertificatePtr& child) {
      if (child && seen.insert(child.get()).second) queue.push_back(child.get());
    };
    for (const auto& section : cert->sections) {
      for (const auto& node : section.strata) {
        if (const auto* adj = std::get_if<AdjacentReductionNode>(&node)) visit(adj->child);
        if (const auto* sparse = std::get_if<SparseDecompositionNode>(&node))
          for (const auto& child : sparse->children) visit(child);
        if (const auto* fiber = std::get_if<FiberLeafNode>(&node)) visit(fiber->child);
        if (const auto* tight = std::get_if<TightReductionNode>(&node)) visit(tight->child);
      }
    }
  }
  return order;
}

// Checks that `child` certifies exactly the claim (datum, weights).
void check_child_claim(VerifyReport& rep, const std::string& where,
                       const Certificate& parent, const CertificatePtr& child,
                       const ShimuraDatum& datum, const WeightTuple& weights) {
  if (!child) {
    rep.fail(where + ": missing child certificate");
    return;
  }
  if (*child->datum != datum) rep.fail(where + ": child datum differs from the reduced claim");
  if (child->weights != weights) rep.fail(where + ": child weights differ from the reduced claim");
  if (child->datum->signature_one_total() >= parent.datum->signature_one_total())
    rep.fail(where + ": child does not shrink the signature-1 locus");
}

void verify_node(VerifyReport&, const std::string&, const Certificate&,
                 const std::shared_ptr<const ShimuraDatum>&, int, const FullVanishingNode&);
void verify_node(VerifyReport&, const std::string&, const Certificate&,
                 const std::shared_ptr<const ShimuraDatum>&, int, const AdjacentReductionNode&);
void verify_node(VerifyReport&, const std::string&, const Certificate&,
                 const std::shared_ptr<const ShimuraDatum>&, int, const SparseDecompositionNode&);
void verify_node(VerifyReport&, const std::string&, const Certificate&,
                 const std::shared_ptr<const ShimuraDatum>&, int, const FiberLeafNode&);
void verify_node(VerifyReport&, const std::string&, const Certificate&,
                 const std::shared_ptr<const ShimuraDatum>&, int, const TightReductionNode&);

void verify_entry(VerifyReport& rep, const std::string& tag, const Certificate& cert) {
  const std::shared_ptr<const ShimuraDatum>& datum = cert.datum;
  const ShimuraDatum& d = *datum;
  validate_weights(d, cert.weights);

  std::vector<int> expected_blocks;
  for (int b = 0; b < d.block_count(); ++b)
    if (!d.signature_one_cycle(b).empty()) expected_blocks.push_back(b);
  if (cert.sections.size() != expected_blocks.size()) {
    rep.fail(tag + ": block sections do not cover the signature-1 blocks");
    return;
  }

  for (std::size_t s = 0; s < cert.sections.size(); ++s) {
    const BlockSection& section = cert.sections[s];
    const int b = expected_blocks[s];
    const std::string where = tag + ", block '" + d.block(b).name + "'";
    if (section.block != b) {
      rep.fail(where + ": sections out of order");
      return;
    }
    const auto& cycle = d.signature_one_cycle(b);
    const int n = static_cast<int>(cycle.size());

    // Generic-curve witness: H lambda = t exactly, lambda >= 0.
    const RationalVector t_block = block_weight_vector(d, b, cert.weights);
    if (section.generic.lambda.size() != n) {
      rep.fail(where + ": lambda length mismatch");
    } else {
      const RationalVector product = hasse_matrix(d, b) * section.generic.lambda;
      for (int i = 0; i < n; ++i) {
        if (product(i) != t_block(i)) {
          rep.fail(where + ": lambda does not solve H lambda = t");
          break;
        }
      }
      for (int i = 0; i < n; ++i) {
        if (section.generic.lambda(i) < Rational(0)) {
          rep.fail(where + ": lambda has a negative coefficient");
          break;
        }
      }
    }

    // Exhaustive stratum coverage in canonical order.
    const auto expected = stratum_subsets(d, b, n);
    if (section.strata.size() != expected.size()) {
      rep.fail(where + ": stratum nodes do not enumerate all nonempty subsets");
      continue;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const StratumNode& node = section.strata[i];
      const std::set<EmbeddingId>* stratum = std::visit(
          [](const auto& v) { return &v.stratum; }, node);
      const std::string at = where + ", stratum {" + format_stratum_set(d, *stratum) + "}";
      if (*stratum != expected[i]) {
        rep.fail(at + ": out of enumeration order");
        continue;
      }
      try {
        std::visit(
            [&](const auto& v) { verify_node(rep, at, cert, datum, b, v); },
            node);
      } catch (const std::exception& e) {
        rep.fail(at + ": " + e.what());
      }
    }
  }
}

void verify_node(VerifyReport& rep, const std::string& at, const Certificate& cert,
                 const std::shared_ptr<const ShimuraDatum>& datum, int b,
                 const FullVanishingNode& node) {
  const RelationSet rels(datum, node.stratum);
  const PicardClass restricted =
      restrict(block_class_without(datum, cert.weights, b, {}), rels);
  if (!restricted.is_zero()) rep.fail(at + ": restricted class is not zero");
}

void verify_node(VerifyReport& rep, const std::string& at, const Certificate& cert,
                 const std::shared_ptr<const ShimuraDatum>& datum, int b,
                 const AdjacentReductionNode& node) {
  if (!node.stratum.count(node.first) || !node.stratum.count(node.second)) {
    rep.fail(at + ": reduction pair is not part of the stratum");
    return;
  }
  const auto reduced = adjacent_reduce(datum, cert.weights, b, {node.first, node.second});
  check_child_claim(rep, at, cert, node.child, *reduced.first, reduced.second);
}

void verify_node(VerifyReport& rep, const std::string& at, const Certificate& cert,
                 const std::shared_ptr<const ShimuraDatum>& datum, int b,
                 const SparseDecompositionNode& node) {
  VerifyReport sparse = verify_sparse(datum, cert.weights, b, node.stratum, node.solution);
  for (const std::string& why : sparse.failures) rep.fail(at + ": " + why);
  if (!sparse.ok) return;
  if (node.children.size() != node.solution.chosen.size()) {
    rep.fail(at + ": one child claim per chosen label required");
    return;
  }
  for (std::size_t j = 0; j < node.solution.chosen.size(); ++j) {
    const auto child = sparse_child(datum, cert.weights, node.solution.chosen[j]);
    check_child_claim(rep, at, cert, node.children[j], *child.first, child.second);
  }
}

void verify_node(VerifyReport& rep, const std::string& at, const Certificate& cert,
                 const std::shared_ptr<const ShimuraDatum>& datum, int b,
                 const FiberLeafNode& node) {
  const ShimuraDatum& d = *datum;
  if (node.stratum.size() != 1 || !node.stratum.count(node.chosen)) {
    rep.fail(at + ": fiber leaf needs a single chosen label");
    return;
  }
  if (classify_stratum(d, b, node.stratum) != StratumClass::Sparse) {
    rep.fail(at + ": chosen label is not sparse");
    return;
  }
  const int pos = d.cycle_label(node.chosen) - 1;
  if (!segment_weight(d, cert.weights, b, pos, pos).is_zero()) {
    rep.fail(at + ": gap segment is nonempty, fiber leaf does not apply");
    return;
  }
  const Rational degree = Rational::pow_int(d.p(), d.n_gap(node.chosen)) *
                              cert.weights.at(node.chosen) -
                          cert.weights.at(d.cycle_successor(node.chosen));
  if (node.degree != degree) rep.fail(at + ": stored fiber degree differs from recomputation");
  if (degree < Rational(0)) rep.fail(at + ": fiber degree is negative");
  const auto child = sparse_child(datum, cert.weights, node.chosen);
  check_child_claim(rep, at, cert, node.child, *child.first, child.second);
}

void verify_node(VerifyReport& rep, const std::string& at, const Certificate& cert,
                 const std::shared_ptr<const ShimuraDatum>& datum, int b,
                 const TightReductionNode& node) {
  const ShimuraDatum& d = *datum;
  if (!node.stratum.count(node.chosen)) {
    rep.fail(at + ": tight label is not part of the stratum");
    return;
  }
  if (classify_stratum(d, b, node.stratum) != StratumClass::Sparse) {
    rep.fail(at + ": stratum is not sparse");
    return;
  }
  if (!margin_at(d, cert.weights, b, d.cycle_label(node.chosen) - 1).is_zero()) {
    rep.fail(at + ": chosen label is not on its cone wall");
    return;
  }
  // On the wall the pair's weights cancel against the vanishing Hasse
  // relation, so the restricted class equals the child's pullback.
  const RelationSet rels(datum, node.stratum);
  const PicardClass full = restrict(block_class_without(datum, cert.weights, b, {}), rels);
  const PicardClass dropped = restrict(
      block_class_without(datum, cert.weights, b,
                          {node.chosen, d.cycle_successor(node.chosen)}),
      rels);
  if (full != dropped) rep.fail(at + ": restricted class is not the child pullback");
  const auto child = sparse_child(datum, cert.weights, node.chosen);
  check_child_claim(rep, at, cert, node.child, *child.first, child.second);
}

}  // namespace

CertificatePtr build_certificate(const std::shared_ptr<const ShimuraDatum>& datum,
                                 const WeightTuple& t, const BuildOptions& options) {
  CertificateBuilder builder(options);
  return builder.build(datum, t);
}

VerifyReport verify_certificate(const CertificatePtr& root) {
  VerifyReport rep;
  if (!root) {
    rep.fail("null certificate");
    return rep;
  }
  const auto entries = reachable_entries(root);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string tag = "entry " + std::to_string(i);
    try {
      verify_entry(rep, tag, *entries[i]);
    } catch (const std::exception& e) {
      rep.fail(tag + ": " + e.what());
    }
  }
  return rep;
}

std::size_t certificate_entry_count(const CertificatePtr& root) {
  return reachable_entries(root).size();
}

}  // namespace nefcert
