#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nefcert/cone.hpp"
#include "nefcert/datum.hpp"
#include "nefcert/picard.hpp"
#include "nefcert/rational.hpp"

namespace nefcert {

// ---------------------------------------------------------------------------
// Stratum-level reductions
// ---------------------------------------------------------------------------

// Removes an adjacent signature-1 pair (tau_1, tau_2 = successor of
// tau_1) from block b: the quotient identity on the pair's stratum folds
// their weights into the successor label,
//   t'_{tau_3} = p^{n_1 + n_2} t_1 - p^{n_2} t_2 + t_3,
// while all other weights carry over.  Requires t nef; the reduced tuple
// is again nef, with the pair's gaps absorbed by the predecessor label.
// When the pair is the whole block (order-2 cycle) the block simply
// leaves the signature-1 locus and its weights are dropped.
std::pair<std::shared_ptr<const ShimuraDatum>, WeightTuple> adjacent_reduce(
    const std::shared_ptr<const ShimuraDatum>& datum, const WeightTuple& t, int b,
    const std::pair<EmbeddingId, EmbeddingId>& pair);

// Exact solution of the sparse-stratum decomposition for a sparse chosen
// set T = {tau_{i_1}, ..., tau_{i_k}} in block b:
//   [omega^t]|_T = sum_j A_j * [omega^{s(j)}]|_T + sum_a B_a * [h_a]|_T,
// where s(j) drops the pair (i_j, i_j + 1) and a ranges over the labels
// strictly inside the gaps between consecutive chosen labels.
//
// With V_j = t_{i_j} - t_{i_j+1} / p^{n_{i_j}} and U_j the p-weighted sum
// of the j-th gap segment, the closed solution is
//   W = sum_j (U_j + V_j) / V_j,  S = W / (W - 1),
//   A_j = (U_j + V_j)(S - 1) / V_j,
// and B solved per segment from the triangular system
// (1 - S) t_segment = H'_j B_segment.
struct SparseSolution {
  std::vector<EmbeddingId> chosen;   // by increasing cycle label
  std::vector<Rational> U;           // gap-segment weight ahead of each chosen label
  std::vector<Rational> V;           // chosen-label margin t_i - t_{i+1}/p^{n_i}
  std::vector<Rational> A;           // pullback coefficients, one per chosen label
  Rational S;                        // sum of the A_j
  std::map<EmbeddingId, Rational> B; // auxiliary Hasse coefficients by label slot
};

// nullopt signals the degenerate case W = 1 (single chosen label with an
// empty gap segment, i.e. an order-2 cycle); throws domain_error when T
// is not sparse or some margin V_j <= 0.
std::optional<SparseSolution> sparse_solve(const ShimuraDatum& datum, const WeightTuple& t,
                                           int b, const std::set<EmbeddingId>& t_block);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string why) {
    ok = false;
    failures.push_back(std::move(why));
  }
};

// Independent check of a SparseSolution: recomputes U and V, checks the
// sign and coupling invariants (S = sum A_j, S > 1, A_j > 0,
// 1 + A_j - S >= 0, B >= 0, and both per-label identities
// U_j A_j = (U_j + V_j)(1 + A_j - S), V_j A_j = (U_j + V_j)(S - 1)), and
// replays the symbolic quotient identity with exact arithmetic.  Never
// calls sparse_solve.
VerifyReport verify_sparse(const std::shared_ptr<const ShimuraDatum>& datum,
                           const WeightTuple& t, int b, const std::set<EmbeddingId>& t_block,
                           const SparseSolution& sol);

// ---------------------------------------------------------------------------
// Nefness certificates
// ---------------------------------------------------------------------------

struct Certificate;
using CertificatePtr = std::shared_ptr<const Certificate>;

// Witness that every intersection number against curves outside all
// strata is nonnegative: lambda = H^{-1} t >= 0 in the partial Hasse
// basis of the block.
struct GenericCurveNode {
  RationalVector lambda;
};

// Witness that [omega^t] restricted to the stratum of T is the zero
// class (always the case when T covers the whole signature-1 cycle).
struct FullVanishingNode {
  std::set<EmbeddingId> stratum;
};

// Reduction of an adjacent stratum to the induced datum on its pair.
struct AdjacentReductionNode {
  std::set<EmbeddingId> stratum;
  EmbeddingId first;   // lowest-label adjacent chosen pair
  EmbeddingId second;  // cycle successor of first
  CertificatePtr child;
};

// Sparse stratum decomposed by a SparseSolution; one child certificate
// per chosen label, for the induced datum dropping that label's pair.
struct SparseDecompositionNode {
  std::set<EmbeddingId> stratum;
  SparseSolution solution;
  std::vector<CertificatePtr> children;
};

// Degenerate sparse stratum (single chosen label on an order-2 cycle):
// the stratum is a fiber bundle whose fiber degree p^{n} t_tau - t_succ
// must be nonnegative; the base contributes the child certificate.
struct FiberLeafNode {
  std::set<EmbeddingId> stratum;
  EmbeddingId chosen;
  Rational degree;
  CertificatePtr child;
};

// Boundary sparse stratum where some chosen label sits exactly on its
// cone wall (V = 0): the pair's weights then cancel against the vanishing
// Hasse relation, so the restricted class coincides with the pullback of
// the child tuple and the stratum reduces to the child outright.
struct TightReductionNode {
  std::set<EmbeddingId> stratum;
  EmbeddingId chosen;  // lowest chosen label with V = 0
  CertificatePtr child;
};

using StratumNode = std::variant<FullVanishingNode, AdjacentReductionNode,
                                 SparseDecompositionNode, FiberLeafNode, TightReductionNode>;

// All proof obligations of one block: the generic-curve witness plus one
// stratum node for every nonempty subset of the signature-1 cycle,
// ordered by (size, lexicographic slots).
struct BlockSection {
  int block = 0;
  GenericCurveNode generic;
  std::vector<StratumNode> strata;
};

// Proof that [omega^t] is nef for one (datum, weights) claim.  Children
// are full certificates for strictly smaller signature-1 loci; equal
// (datum, weights) sub-claims share one certificate object.
struct Certificate {
  std::shared_ptr<const ShimuraDatum> datum;
  WeightTuple weights;
  std::vector<BlockSection> sections;  // blocks with a signature-1 slot, ascending
};

struct BuildOptions {
  int max_block_order = 12;  // refuse blocks with more signature-1 slots
};

// Builds the full recursive certificate for a nef tuple; throws
// domain_error listing the violated constraints when t is not nef, and
// when a block exceeds max_block_order.
CertificatePtr build_certificate(const std::shared_ptr<const ShimuraDatum>& datum,
                                 const WeightTuple& t, const BuildOptions& options = {});

// Recomputes every local check of every reachable certificate from raw
// data: generic-curve witnesses solve H lambda = t with lambda >= 0,
// stratum coverage is exhaustive, each node's defining identities hold,
// children certify exactly the recomputed reduced claims, and the
// signature-1 count strictly decreases along every edge.  Independent of
// build_certificate and sparse_solve.
VerifyReport verify_certificate(const CertificatePtr& root);

// Deterministic enumeration order shared by builder and verifier:
// subsets of block b's signature-1 slots with size in [1, max_size],
// ordered by (size, lexicographic slot list).
std::vector<std::set<EmbeddingId>> stratum_subsets(const ShimuraDatum& datum, int b,
                                                   int max_size);

// Number of distinct certificates reachable from root (shared children
// counted once).
std::size_t certificate_entry_count(const CertificatePtr& root);

}  // namespace nefcert
