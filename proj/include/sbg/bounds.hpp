#pragma once

namespace sbg {

// Worst-case loss of the window-by-window strategy against a full-horizon
// optimal opponent: lambda^n (1 - lambda^(N-n)) / (1 - lambda) * g_bar,
// and (N - n) * g_bar at lambda = 1.
double window_bound(double lambda, int n, int horizon, double g_bar);

}  // namespace sbg
