#pragma once

#include "mld/common.hpp"

#include <vector>

namespace mld {

// In-place reduced row echelon form; returns pivot columns. Zero rows are dropped.
std::vector<int> rref(RatMat& a);
int matrix_rank(RatMat a);
// Basis of {x : a x = 0}; ncols is needed when a has no rows.
RatMat nullspace(const RatMat& a, std::size_t ncols);
RatMat transpose(const RatMat& a);

}  // namespace mld
