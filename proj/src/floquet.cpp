#include "odb/floquet.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "odb/errors.hpp"
#include "odb/numerics.hpp"

namespace odb::floquet {

bool FloquetSolution::is_open(int n) const { return k(n + N).imag() == 0.0 && k(n + N).real() > 0.0; }

FloquetSolution solve(double eps_i, double g0, int N, double g_static) {
  if (!(eps_i > 0.0)) throw DomainError("floquet::solve: eps_i must be positive");
  if (N < 2) throw DomainError("floquet::solve: N too small");
  const int M = 2 * N + 1;
  FloquetSolution s;
  s.eps_i = eps_i;
  s.g0 = g0;
  s.N = N;
  s.k.resize(M);
  for (int i = 0; i < M; ++i) {
    const double e = 2.0 * (eps_i + (i - N));
    s.k(i) = e > 0.0 ? cplx(std::sqrt(e), 0.0) : cplx(0.0, std::sqrt(-e));
  }
  if (g0 == 0.0 && g_static == 0.0) {  // uncoupled; a threshold channel would make the matrix singular
    s.t = Eigen::VectorXcd::Zero(M);
    s.t(N) = 1.0;
    s.r = Eigen::VectorXcd::Zero(M);
    s.T_total = 1.0;
    return s;
  }
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(3 * M);
  for (int i = 0; i < M; ++i) {
    trip.emplace_back(i, i, s.k(i) + cplx(0.0, g_static));
    if (i + 1 < M) trip.emplace_back(i, i + 1, -0.5 * g0);
    if (i > 0) trip.emplace_back(i, i - 1, 0.5 * g0);
  }
  Eigen::SparseMatrix<cplx> A(M, M);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(M);
  b(N) = s.k(N);
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("floquet::solve: singular sideband system");
  s.t = lu.solve(b);
  if (lu.info() != Eigen::Success || !s.t.allFinite()) throw SolverError("floquet::solve: solve failed");
  s.r = s.t;
  s.r(N) -= 1.0;
  const double k0 = s.k(N).real();
  for (int i = 0; i < M; ++i) {
    if (!s.is_open(i - N)) continue;
    const double w = s.k(i).real() / k0;
    s.T_total += w * std::norm(s.t(i));
    s.R_total += w * std::norm(s.r(i));
  }
  s.unitarity_defect = std::abs(s.T_total + s.R_total - 1.0);
  return s;
}

int default_truncation(double eps_i) { return 2 * (static_cast<int>(std::floor(eps_i)) + 1) + 20; }

FloquetSolution solve_converged(double eps_i, double g0) {
  int N = default_truncation(eps_i);
  for (int attempt = 0; attempt < 6; ++attempt, N *= 2) {
    FloquetSolution a = solve(eps_i, g0, N);
    const FloquetSolution b = solve(eps_i, g0, N + 10);
    double moved = 0.0;
    for (int n = -N; n <= N; ++n) moved = std::max(moved, std::abs(a.t_at(n) - b.t_at(n)));
    if (a.unitarity_defect < 1e-10 && moved < 1e-13) return a;
  }
  throw SolverError("floquet::solve_converged: truncation did not converge; increase N");
}

double total_transmission_exact(double eps_i, double g0, int N) { return solve(eps_i, g0, N).T_total; }

ZeroLocation zero_locate_exact(double g0) {
  if (!(g0 > 0.0) || g0 > 1.0) throw DomainError("zero_locate_exact: need 0 < g0 <= 1");
  ZeroLocation z;
  z.N = 40;
  auto t0sq = [&](double e) { return std::norm(solve(e, g0, z.N).t_at(0)); };
  // the dip sits at 1 - O(g0^4), so the scan is uniform in log(1 - eps)
  constexpr int kScan = 3000;
  std::vector<double> es(kScan), fs(kScan);
  for (int i = 0; i < kScan; ++i) {
    const double s = std::pow(10.0, -14.0 + (std::log10(0.3) + 14.0) * i / (kScan - 1));
    es[i] = 1.0 - s;
    fs[i] = t0sq(es[i]);
    if (i % 100 == 0) z.trace.emplace_back(es[i], fs[i]);
  }
  const int ib = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  if (fs[ib] > 0.5) throw NotFoundError("zero_locate_exact: no transmission dip in [0.7, 1)");
  const double lo = es[std::min(ib + 1, kScan - 1)], hi = es[std::max(ib - 1, 0)];
  const num::MinResult m = num::bracket_min(t0sq, lo, hi, 1e-17 + 1e-12 * (hi - lo), 8);
  z.eps_star = m.f < fs[ib] ? m.x : es[ib];
  z.t0_sq = std::min(m.f, fs[ib]);
  return z;
}

}  // namespace odb::floquet
