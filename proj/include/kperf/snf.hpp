#pragma once

#include "kperf/numeric.hpp"

#include <optional>
#include <vector>

namespace kperf {

// Smith normal form u * a * v = d of an integer matrix. u, v are unimodular
// and d is diagonal with d(0,0) | d(1,1) | ... >= 0, zeros last. Inverses of
// the transforms are tracked alongside so lattice computations never have to
// invert a unimodular matrix after the fact.
struct SmithForm {
  IntMat u, u_inv;  // rows x rows
  IntMat v, v_inv;  // cols x cols
  IntMat d;         // rows x cols
  std::vector<Int> invariant_factors;  // nonzero diagonal entries, in chain order

  Index rank() const { return static_cast<Index>(invariant_factors.size()); }
  // Diagonal entry at i, with the usual convention d(i,i) = 0 past min(m,n).
  Int diag(Index i) const {
    return i < std::min(d.rows(), d.cols()) ? d(i, i) : Int(0);
  }
};

// Deterministic SNF via elementary row/column operations. Pivoting always
// selects the entry of minimal nonzero absolute value in the remaining
// submatrix (first such in row-major order), which keeps intermediate
// coefficient growth tame; entries are exact mpz regardless.
SmithForm smith_normal_form(const IntMat& a);

template <typename Derived>
SmithForm smith_normal_form(const Eigen::MatrixBase<Derived>& a) {
  return smith_normal_form(IntMat(a));
}

// Exact determinant, fraction-free Bareiss elimination.
Int determinant(IntMat a);

inline bool is_unimodular(const IntMat& a) {
  if (a.rows() != a.cols()) return false;
  Int d = determinant(a);
  return d == 1 || d == -1;
}

// Some integer solution x of a x = b, or nullopt when none exists.
std::optional<IntVec> solve_linear(const IntMat& a, const IntVec& b);

// Columns form a lattice basis of { x : a x = 0 }.
IntMat kernel_basis(const IntMat& a);

// Membership of b in the lattice spanned by the columns of a.
bool in_column_lattice(const IntMat& a, const IntVec& b);

// hstack/vstack conveniences for building the block systems used by kernel
// and preimage computations.
IntMat hstack(const IntMat& a, const IntMat& b);
IntMat vstack(const IntMat& a, const IntMat& b);

}  // namespace kperf
