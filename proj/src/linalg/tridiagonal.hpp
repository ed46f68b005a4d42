#pragma once

#include <vector>

#include "girko/linalg/matrix.hpp"

namespace girko::linalg::detail {

inline constexpr int kMaxSweepsPerEigenvalue = 40;

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix.
///
/// `diag` has length n, `off[i]` couples i and i+1 (off[n-1] is ignored).
/// On return `diag` holds the eigenvalues (unsorted). When `z` is non-null
/// its columns are rotated along, so passing the reducing transform yields
/// the eigenvectors of the original matrix.
void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, ComplexMatrix* z);

/// Sorts values ascending and permutes the columns of `z` to match.
void sort_ascending(std::vector<double>& values, ComplexMatrix* z);

}  // namespace girko::linalg::detail
