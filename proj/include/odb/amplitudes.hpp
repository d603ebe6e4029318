#pragma once

#include "odb/core_model.hpp"
#include "odb/numerics.hpp"

namespace odb {

struct FourierCoefficient {
  int n;
  cplx value;
};

// sign factor s(n) = theta(n) - (-1)^n theta(-n)
double s_factor(int n);

// continuum-continuum transition amplitude (k final, kp initial)
cplx phi_cc(double k, double kp, double tau, double g0, double eta = 0.0);

// continuum -> bound (exact instantaneous form); bound -> continuum is the conjugate
cplx phi_cb(double k, double tau, double g0);
cplx phi_bc(double k, double tau, double g0);
// mean-coupling forms: phi_kb_mean is bound -> continuum, phi_cb_mean its conjugate
cplx phi_kb_mean(double k, double tau, double g0);
cplx phi_cb_mean(double k, double tau, double g0);

cplx A_coefficient(double k_f, double k_i, int n, double g0);
// (k - k_i) A_{k k_i}(n) evaluated at k = k_f, regular at k_f = k_i
cplx A_residue(double k_f, double k_i, int n, double g0);

cplx B_kb(double k, int n, double g0);  // bound -> continuum k
cplx B_bk(double k, int n, double g0);  // continuum k -> bound
inline double B_sq(double k, int n, double g0) { return std::norm(B_kb(k, n, g0)); }

// quadrature oracles of the defining Fourier transforms
num::CQuad A_quadrature(double k_f, double k_i, int n, double g0, double tol = 1e-13);
num::CQuad B_kb_quadrature(double k, int n, double g0, double tol = 1e-13);
num::CQuad B_bk_quadrature(double k, int n, double g0, double tol = 1e-13);

}  // namespace odb
