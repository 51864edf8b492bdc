#include "sbg/bounds.hpp"

#include <cmath>

#include "sbg/errors.hpp"

namespace sbg {

double window_bound(double lambda, int n, int horizon, double g_bar) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("bound: lambda must lie in (0,1]");
  if (n < 1 || n > horizon) throw DomainError("bound: window must satisfy 1 <= n <= N");
  if (!(g_bar >= 0.0) || !std::isfinite(g_bar)) throw DomainError("bound: g_bar must be finite and nonnegative");
  const int tail = horizon - n;
  if (lambda == 1.0) return tail * g_bar;
  return std::pow(lambda, n) * (1.0 - std::pow(lambda, tail)) / (1.0 - lambda) * g_bar;
}

}  // namespace sbg
