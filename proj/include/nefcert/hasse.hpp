#pragma once

#include <string>
#include <vector>

#include "nefcert/datum.hpp"
#include "nefcert/rational.hpp"

namespace nefcert {

// Change-of-basis matrix H of block b between the Hodge generators
// [omega_{tau_i}] and the partial Hasse classes [h_{tau_i}], both indexed
// by the block's signature-1 cycle (tau_1, ..., tau_N):
//   H[i][i] = -1,  H[(i mod N)+1][i] = p^{n_{tau_i}},
// i.e. the coordinate identity sum_i t_i [omega_{tau_i}] =
// sum_i lambda_i [h_{tau_i}] holds exactly when H lambda = t.
// For N = 1 the two coefficients land on the same entry: H = (p^n - 1).
RationalMatrix hasse_matrix(const ShimuraDatum& datum, int b);

// Exact inverse of hasse_matrix via the cyclic closed form
//   (H^{-1})_{i,j} = P/(P-1) * p^{-e(i,j)},   P = p^{n_1 + ... + n_N},
// where e(i,j) sums the gaps n_i, n_{i+1}, ... cyclically up to n_{j-1}
// ((j-i) mod N terms; the full cycle of N terms when i = j).  All
// entries are strictly positive.
RationalMatrix hasse_inverse_closed_form(const ShimuraDatum& datum, int b);

// Coordinates of block b's weight vector t in the partial Hasse basis:
// lambda = H^{-1} t, with t listed along the signature-1 cycle.
RationalVector lambda_coefficients(const ShimuraDatum& datum, int b,
                                   const RationalVector& t);

bool is_identity(const RationalMatrix& m);

// Row-major rendering, entries "a/b" separated by single spaces, one row
// per line.
std::string format_matrix(const RationalMatrix& m);

}  // namespace nefcert
