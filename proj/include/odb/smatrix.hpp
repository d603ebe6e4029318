#pragma once

#include <map>
#include <string>
#include <vector>

#include "odb/core_model.hpp"
#include "odb/renorm.hpp"

namespace odb {

enum class Order { first, second_bare, renormalized };

Order parse_order(const std::string& s);
std::string to_string(Order o);

// (nt, mc, lb): total transitions, c/c transitions, b/c or c/b transitions
struct DiagramLabel {
  int nt = 0, mc = 0, lb = 0;
};

enum class AmpKind { T, R };

struct DiagramTerm {
  DiagramLabel label;
  cplx value{};
  int sideband = 0;
  AmpKind amplitude = AmpKind::T;
  bool renormalized = false;
};

struct AssemblyDiagnostics {
  cplx gamma0{};          // elastic loop
  cplx b_elastic{};       // B (bare or renormalized) entering T(0)
  int n0 = 1;             // dominant pole index
  double eps_R = 0.0, eta_R = 0.0;
  bool near_pole = false;  // |eps~ - n0| < 10 eta_R
  cplx T0_far{};           // far-from-pole elastic form (diagnostic only)
  double far_mismatch = 0.0;  // |T0_far - T(0)|
  bool gamma_below_minus_one = false;
};

struct SMatrixDecomposition {
  double eps_i = 0.0;
  double g0 = 0.0;
  Order order = Order::renormalized;
  int n_max = 6;
  std::vector<DiagramTerm> terms;
  std::map<int, cplx> T, R;  // open sidebands with |n| <= n_max
  double T_total = 0.0;
  AssemblyDiagnostics diag;
};

SMatrixDecomposition assemble(double eps_i, double g0, Order order, int n_max = 6);
SMatrixDecomposition assemble(RenormTable& table, Order order, int n_max = 6);

// Renormalized elastic amplitude alone; the table keeps the loops for reuse.
cplx elastic_T0(RenormTable& table);

double w0(double eps_i, double g0);
double w0(RenormTable& table);

struct ZeroResult {
  double eps_star = 1.0;
  double t0_sq = 1.0;
  double lo = 0.0, hi = 0.0;  // bracket searched
  double eps_fp = 1.0;        // fixed point of eps_R(1) = 1
  double alpha1_est = 0.0;    // -alpha(1) / g0^2 at the fixed point
  double prediction = 1.0;    // 1 - g0^2/8 - alpha(1) at the fixed point
  std::vector<std::pair<double, double>> trace;  // (eps, |T(0)|^2) samples
};

ZeroResult find_transmission_zero(double g0);

struct NearZeroAmplitudes {
  std::map<int, cplx> T, R;  // T(n) = R(n) for n != 0
  double R0_sq = 0.0;
  double flux = 0.0;         // |T(0)|^2 + |R(0)|^2 + sum_open |k_f|/k_i (|T|^2 + |R|^2)
  double detuning = 0.0;     // |1 - eps_R(1)|
  double eta_R1 = 0.0;
};

// Limiting forms valid where |1 - eps_R(1)| is well inside eta_R(1); outside
// |1 - eps_R(1)| <= regime_factor * eta_R(1) a RegimeError is thrown.
NearZeroAmplitudes near_zero_amplitudes(double eps_i, double g0, int n_max = 6,
                                        double regime_factor = 3.0);

}  // namespace odb
