#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "nefcert/cone.hpp"
#include "nefcert/datum.hpp"
#include "nefcert/rational.hpp"
#include "nefcert/strata.hpp"

namespace nefcert {

// Reference implementations used to cross-check the closed-form results.
// Everything here recomputes from first principles (generic exact
// elimination, brute-force enumeration) and shares no code with the
// solvers it validates.

// Exact Gauss-Jordan inverse; throws domain_error when m is singular or
// not square.
RationalMatrix gauss_inverse(const RationalMatrix& m);

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct SolveResult {
  SolveStatus status = SolveStatus::Unique;
  RationalVector solution;  // only meaningful when status == Unique
};

// Exact solver for m x = rhs by Gauss-Jordan elimination.
SolveResult solve_exact(const RationalMatrix& m, const RationalVector& rhs);

struct SparseOracleResult {
  SolveStatus status = SolveStatus::Unique;
  std::vector<Rational> A;           // per chosen label, ascending
  std::map<EmbeddingId, Rational> B; // per auxiliary gap label
};

// Solves the sparse-stratum decomposition by brute force: writes the
// quotient identity
//   [omega^t]|_T = sum_j A_j [omega^{s(j)}]|_T + sum_a B_a [h_a]|_T
// as a linear system over the surviving generators of the block and
// eliminates exactly.  Throws domain_error when T is not sparse.
SparseOracleResult solve_sparse_directly(const std::shared_ptr<const ShimuraDatum>& datum,
                                         const WeightTuple& t, int b,
                                         const std::set<EmbeddingId>& t_block);

struct StratumEntry {
  int block = 0;
  std::set<EmbeddingId> stratum;
  StratumClass cls = StratumClass::Empty;
};

// Enumerates per block every nonempty subset of the signature-1 slots
// with at most max_size elements, ordered by (size, lexicographic
// slots); a block with no signature-1 slot contributes the single empty
// entry.  Independent of stratum_subsets.
std::vector<StratumEntry> enumerate_strata(const ShimuraDatum& datum, int max_size);

}  // namespace nefcert
