#include "nefcert/oracle.hpp"

#include <algorithm>

#include "nefcert/errors.hpp"
#include "nefcert/picard.hpp"

namespace nefcert {

RationalMatrix gauss_inverse(const RationalMatrix& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw domain_error("gauss_inverse needs a square matrix");
  RationalMatrix work = m;
  RationalMatrix inverse = RationalMatrix::Constant(n, n, Rational(0));
  for (Eigen::Index i = 0; i < n; ++i) inverse(i, i) = Rational(1);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index row = col; row < n; ++row) {
      if (!work(row, col).is_zero()) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw domain_error("matrix is singular");
    if (pivot != col) {
      work.row(pivot).swap(work.row(col));
      inverse.row(pivot).swap(inverse.row(col));
    }
    const Rational lead = work(col, col);
    for (Eigen::Index j = 0; j < n; ++j) {
      work(col, j) = work(col, j) / lead;
      inverse(col, j) = inverse(col, j) / lead;
    }
    for (Eigen::Index row = 0; row < n; ++row) {
      if (row == col || work(row, col).is_zero()) continue;
      const Rational factor = work(row, col);
      for (Eigen::Index j = 0; j < n; ++j) {
        work(row, j) = work(row, j) - factor * work(col, j);
        inverse(row, j) = inverse(row, j) - factor * inverse(col, j);
      }
    }
  }
  return inverse;
}

SolveResult solve_exact(const RationalMatrix& m, const RationalVector& rhs) {
  if (m.rows() != rhs.size()) throw domain_error("solve_exact dimension mismatch");
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  RationalMatrix work(rows, cols + 1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) work(i, j) = m(i, j);
    work(i, cols) = rhs(i);
  }
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = row; r < rows; ++r) {
      if (!work(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) work.row(pivot).swap(work.row(row));
    const Rational lead = work(row, col);
    for (Eigen::Index j = col; j <= cols; ++j) work(row, j) = work(row, j) / lead;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == row || work(r, col).is_zero()) continue;
      const Rational factor = work(r, col);
      for (Eigen::Index j = col; j <= cols; ++j)
        work(r, j) = work(r, j) - factor * work(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  for (Eigen::Index r = row; r < rows; ++r)
    if (!work(r, cols).is_zero()) return {SolveStatus::Inconsistent, {}};
  if (static_cast<Eigen::Index>(pivot_cols.size()) < cols)
    return {SolveStatus::Underdetermined, {}};
  RationalVector x = RationalVector::Constant(cols, Rational(0));
  for (std::size_t r = 0; r < pivot_cols.size(); ++r)
    x(pivot_cols[r]) = work(static_cast<Eigen::Index>(r), cols);
  return {SolveStatus::Unique, std::move(x)};
}

SparseOracleResult solve_sparse_directly(const std::shared_ptr<const ShimuraDatum>& datum,
                                         const WeightTuple& t, int b,
                                         const std::set<EmbeddingId>& t_block) {
  const ShimuraDatum& d = *datum;
  validate_weights(d, t);
  if (classify_stratum(d, b, t_block) != StratumClass::Sparse)
    throw domain_error("solve_sparse_directly needs a sparse chosen set");
  const auto& cycle = d.signature_one_cycle(b);
  const std::size_t n = cycle.size();

  std::vector<EmbeddingId> chosen;
  std::vector<EmbeddingId> auxiliary;
  std::vector<EmbeddingId> survivors;
  for (std::size_t i = 0; i < n; ++i) {
    const EmbeddingId tau = cycle[i];
    const EmbeddingId pred = cycle[(i + n - 1) % n];
    if (t_block.count(tau)) chosen.push_back(tau);
    if (!t_block.count(tau)) survivors.push_back(tau);
    if (!t_block.count(tau) && !t_block.count(pred)) auxiliary.push_back(tau);
  }

  const RelationSet rels(datum, t_block);
  auto class_column = [&](const PicardClass& cls) {
    RationalVector column =
        RationalVector::Constant(static_cast<Eigen::Index>(survivors.size()), Rational(0));
    for (const auto& [tau, c] : cls.terms()) {
      const auto it = std::find(survivors.begin(), survivors.end(), tau);
      if (it == survivors.end())
        throw domain_error("internal: normal form leaves an eliminated generator");
      column(it - survivors.begin()) = c;
    }
    return column;
  };
  auto weighted_class = [&](const std::set<EmbeddingId>& excluded) {
    PicardClass cls(datum);
    for (const EmbeddingId& tau : cycle)
      if (!excluded.count(tau)) cls.add_term(tau, t.at(tau));
    return cls;
  };

  const Eigen::Index rows = static_cast<Eigen::Index>(survivors.size());
  const Eigen::Index k = static_cast<Eigen::Index>(chosen.size());
  RationalMatrix system(rows, k + static_cast<Eigen::Index>(auxiliary.size()));
  for (Eigen::Index j = 0; j < k; ++j) {
    const EmbeddingId tau = chosen[static_cast<std::size_t>(j)];
    system.col(j) = class_column(restrict(weighted_class({tau, d.cycle_successor(tau)}), rels));
  }
  for (std::size_t a = 0; a < auxiliary.size(); ++a)
    system.col(k + static_cast<Eigen::Index>(a)) =
        class_column(restrict(hasse_class(datum, auxiliary[a]), rels));
  const RationalVector rhs = class_column(restrict(weighted_class({}), rels));

  SolveResult solved = solve_exact(system, rhs);
  SparseOracleResult out;
  out.status = solved.status;
  if (solved.status == SolveStatus::Unique) {
    for (Eigen::Index j = 0; j < k; ++j) out.A.push_back(solved.solution(j));
    for (std::size_t a = 0; a < auxiliary.size(); ++a)
      out.B.emplace(auxiliary[a], solved.solution(k + static_cast<Eigen::Index>(a)));
  }
  return out;
}

std::vector<StratumEntry> enumerate_strata(const ShimuraDatum& datum, int max_size) {
  if (max_size < 1) throw domain_error("enumerate_strata needs max_size >= 1");
  std::vector<StratumEntry> out;
  for (int b = 0; b < datum.block_count(); ++b) {
    const auto& cycle = datum.signature_one_cycle(b);
    const int n = static_cast<int>(cycle.size());
    if (n == 0) {
      out.push_back({b, {}, StratumClass::Empty});
      continue;
    }
    for (int size = 1; size <= std::min(max_size, n); ++size) {
      std::vector<char> pick(static_cast<std::size_t>(n), 0);
      std::fill(pick.begin(), pick.begin() + size, 1);
      do {
        std::set<EmbeddingId> subset;
        for (int i = 0; i < n; ++i)
          if (pick[static_cast<std::size_t>(i)]) subset.insert(cycle[static_cast<std::size_t>(i)]);
        const StratumClass cls = classify_stratum(datum, b, subset);
        out.push_back({b, std::move(subset), cls});
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  return out;
}

}  // namespace nefcert
