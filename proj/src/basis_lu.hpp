#pragma once

#include <cstddef>
#include <vector>

namespace sbg::lp {

// Sparse LU of a square basis matrix (KLU: block triangular form plus AMD
// ordering inside blocks). Solves work in place on dense vectors.
class BasisLu {
 public:
  BasisLu();
  ~BasisLu();
  BasisLu(const BasisLu&) = delete;
  BasisLu& operator=(const BasisLu&) = delete;

  // Compressed sparse column input with sorted row indices. Returns false
  // when the matrix is singular.
  bool factor(int n, const std::vector<int>& col_ptr, const std::vector<int>& row_idx,
              const std::vector<double>& values);

  void solve(double* x) const;            // B x = b
  void solve_transposed(double* x) const; // B^T x = b
  std::size_t nonzeros() const { return nnz_; }

 private:
  void release();

  int n_ = 0;
  std::size_t nnz_ = 0;
  // KLU handles, kept opaque so klu.h stays out of the header.
  void* common_;
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
};

}  // namespace sbg::lp
