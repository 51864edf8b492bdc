#include "basis_lu.hpp"

#include <klu.h>

namespace sbg::lp {

namespace {

klu_common* common(void* p) { return static_cast<klu_common*>(p); }
klu_symbolic* symbolic(void* p) { return static_cast<klu_symbolic*>(p); }
klu_numeric* numeric(void* p) { return static_cast<klu_numeric*>(p); }

}  // namespace

BasisLu::BasisLu() : common_(new klu_common) { klu_defaults(common(common_)); }

BasisLu::~BasisLu() {
  release();
  delete common(common_);
}

void BasisLu::release() {
  if (numeric_) {
    klu_numeric* num = numeric(numeric_);
    klu_free_numeric(&num, common(common_));
  }
  if (symbolic_) {
    klu_symbolic* sym = symbolic(symbolic_);
    klu_free_symbolic(&sym, common(common_));
  }
  numeric_ = nullptr;
  symbolic_ = nullptr;
}

bool BasisLu::factor(int n, const std::vector<int>& col_ptr, const std::vector<int>& row_idx,
                     const std::vector<double>& values) {
  release();
  n_ = n;
  nnz_ = 0;
  auto* ap = const_cast<int*>(col_ptr.data());
  auto* ai = const_cast<int*>(row_idx.data());
  auto* ax = const_cast<double*>(values.data());
  klu_symbolic* sym = klu_analyze(n, ap, ai, common(common_));
  if (!sym) return false;
  symbolic_ = sym;
  klu_numeric* num = klu_factor(ap, ai, ax, sym, common(common_));
  if (!num) {
    release();
    return false;
  }
  numeric_ = num;
  if (common(common_)->status != KLU_OK) {
    release();
    return false;
  }
  nnz_ = static_cast<std::size_t>(num->lnz + num->unz);
  return true;
}

void BasisLu::solve(double* x) const {
  klu_solve(symbolic(symbolic_), numeric(numeric_), n_, 1, x, common(common_));
}

void BasisLu::solve_transposed(double* x) const {
  klu_tsolve(symbolic(symbolic_), numeric(numeric_), n_, 1, x, common(common_));
}

}  // namespace sbg::lp
