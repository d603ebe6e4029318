#pragma once

#include <map>
#include <vector>

#include "odb/amplitudes.hpp"
#include "odb/core_model.hpp"

namespace odb {

struct LoopOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-16;
  int l_cap = 64;  // per side of the l-sum
};

struct LoopValue {
  double re = 0.0;
  double im = 0.0;
  int n = 0;
  std::vector<int> open_channels;  // l with k_l^2 > 0 that carry an energy pole
  int l_min = 0, l_max = 0;        // truncation reached
  double quad_error = 0.0;
  bool truncation_warning = false;
  double im_energy_poles = 0.0;     // -pi sum_l A A / k_l over open channels
  double im_endpoint_poles = 0.0;   // half residues at k = k_i, k_f (inelastic only)
  std::vector<double> pole_residues;  // d/dk residues at the energy poles, per open l
  cplx value() const { return {re, im}; }
};

// Second-order continuum loop by direct quadrature over k.
LoopValue gamma_loop(double k_f, double k_i, int n, double g0, const LoopOptions& opt = {});

// Closed-form elastic loop (imaginary part from the residue sum, real part I1 + I2).
// Closed channels use k_l -> +i|k_l|.
LoopValue gamma_elastic_closed(double k_i, double g0);

cplx b_bare(double k_f, double k_i, int n, double eps_i, double g0, double eta);

double alpha_shift(int n0, double eps_i, double g0);
double beta_width(int n0, double eps_i, double g0);

struct RenormFactors {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_factor = 0.0;
  double eta_R = 0.0;
  double eps_R = 0.0;
  cplx Z = 1.0;
  int n0 = 1;
  bool gamma_below_minus_one = false;
};

// Nearest odd pole index (at least 1) to eps_i + g0^2/8.
int dominant_pole_index(double eps_i, double g0);

// Per-energy cache of alpha(n0), beta(n0) and the loops the renormalized
// amplitudes need.
class RenormTable {
 public:
  RenormTable(double eps_i, double g0);
  double eps_i() const { return eps_; }
  double g0() const { return g0_; }
  double k_i() const { return ki_; }
  double alpha(int n0);
  double beta(int n0);
  const LoopValue& gamma(int n);  // Gamma_{k_f k_i}(n), k_f of the open sideband n
  double gamma_factor(int n, int n0);
  double eta_R(int n, int n0) { return beta(n0) * (1.0 + gamma_factor(n, n0)); }
  double eps_R(int n0) { return eps_ + g0_ * g0_ / 8.0 + alpha(n0); }
  cplx Z(int n, int n0);  // normalization of the n0 pole term
  cplx Z(int n);          // at the dominant pole
  RenormFactors factors(int n, int n0);
  cplx b_renorm(int n);
  void set_gamma(int n, const LoopValue& v) { gammas_[n] = v; }

 private:
  double eps_, g0_, ki_;
  std::map<int, double> alpha_, beta_;
  std::map<int, LoopValue> gammas_;
};

RenormFactors renorm_factors(int n, int n0, double k_f, double k_i, double eps_i, double g0);
cplx b_renorm(double k_f, double k_i, int n, double eps_i, double g0);

}  // namespace odb
