#pragma once

#include <Eigen/Core>
#include <vector>

#include "odb/core_model.hpp"

namespace odb::floquet {

// Sideband amplitudes for a wave e^{i k_0 x} incident from the left on
// -g0 sin(tau) delta(x). Coupling convention:
//   k_n t_n - (g0/2) (t_{n+1} - t_{n-1}) = k_0 delta_{n0},   r_n = t_n - delta_{n0},
// closed channels carry k_n = i kappa_n (decaying). With this sign
// t_{+-1} -> -+ g0 / (2 k_{+-1}) to first order, the same as 2 pi i A(+-1) / k_f.
struct FloquetSolution {
  double eps_i = 0.0;
  double g0 = 0.0;
  int N = 0;
  Eigen::VectorXcd k, t, r;  // index n + N
  double unitarity_defect = 0.0;
  double T_total = 0.0;
  double R_total = 0.0;
  bool is_open(int n) const;
  cplx t_at(int n) const { return t(n + N); }
  cplx r_at(int n) const { return r(n + N); }
  cplx k_at(int n) const { return k(n + N); }
};

// g_static adds a time-independent -g_static delta(x); the undriven
// limit then has t_0 = k / (k + i g_static).
FloquetSolution solve(double eps_i, double g0, int N, double g_static = 0.0);

int default_truncation(double eps_i);

// Grows N from the default until the unitarity defect is below 1e-10 and
// the coefficients no longer move when N grows by 10.
FloquetSolution solve_converged(double eps_i, double g0);

double total_transmission_exact(double eps_i, double g0, int N);

struct ZeroLocation {
  double eps_star = 1.0;
  double t0_sq = 1.0;
  int N = 0;
  std::vector<std::pair<double, double>> trace;  // coarse scan (eps, |t0|^2)
};

ZeroLocation zero_locate_exact(double g0);

}  // namespace odb::floquet
