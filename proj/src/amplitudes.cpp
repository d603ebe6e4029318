#include "odb/amplitudes.hpp"

#include <cmath>

#include "odb/errors.hpp"

namespace odb {

namespace {
constexpr cplx I(0.0, 1.0);
double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }
}  // namespace

double s_factor(int n) {
  if (n > 0) return 1.0;
  if (n < 0) return -parity(n);
  return 0.0;
}

cplx phi_cc(double k, double kp, double tau, double g0, double eta) {
  if (!(k > 0.0) || !(kp > 0.0)) throw DomainError("phi_cc: wavenumbers must be positive");
  if (k == kp) throw DomainError("phi_cc: diagonal element excluded by renormalization");
  const double g = g0 * std::sin(tau), gd = g0 * std::cos(tau);
  const double th = std::atan(g / kp) - std::atan(g / k);
  const cplx kpe = kp + I * eta;
  return I / kPi * gd * std::exp(I * th) / std::sqrt((g * g + k * k) * (g * g + kp * kp)) * k * kp /
         (k * k - kpe * kpe);
}

cplx phi_cb(double k, double tau, double g0) {
  const double g = g0 * std::sin(tau), gd = g0 * std::cos(tau);
  if (!(g > 0.0)) throw NoBoundStateError("phi_cb: no bound state at this phase");
  if (!(k > 0.0)) throw DomainError("phi_cb: k must be positive");
  return -2.0 * I * k * std::sqrt(g / (2.0 * kPi)) * gd / std::pow(g * g + k * k, 1.5) *
         std::exp(I * std::atan(g / k));
}

cplx phi_bc(double k, double tau, double g0) { return std::conj(phi_cb(k, tau, g0)); }

cplx phi_kb_mean(double k, double tau, double g0) {
  if (!(k > 0.0)) throw DomainError("phi_kb_mean: k must be positive");
  const double g = g0 * std::sin(tau), gd = g0 * std::cos(tau);
  return 2.0 * I * k * std::sqrt(g0 / (4.0 * kPi)) * gd / (k - I * g0 / 2.0) *
         std::exp(-2.0 * I * std::atan(g / k)) / (k * k + g * g);
}

cplx phi_cb_mean(double k, double tau, double g0) { return std::conj(phi_kb_mean(k, tau, g0)); }

cplx A_coefficient(double kf, double ki, int n, double g0) {
  if (n == 0) return 0.0;
  const double d = (kf - ki) * (kf + ki);
  if (d == 0.0) throw DomainError("A_coefficient: pole at k_f = k_i");
  const int m = std::abs(n);
  const double br = q_factor(ki, m, g0) - parity(n) * q_factor(kf, m, g0);
  return I / kPi * (kf * ki / (d * (kf + ki))) * br * s_factor(n);
}

cplx A_residue(double kf, double ki, int n, double g0) {
  if (n == 0) return 0.0;
  const int m = std::abs(n);
  const double br = q_factor(ki, m, g0) - parity(n) * q_factor(kf, m, g0);
  return I / kPi * (kf * ki / ((kf + ki) * (kf + ki))) * br * s_factor(n);
}

cplx B_kb(double k, int n, double g0) {
  if (n % 2 == 0) return 0.0;
  return 2.0 * I * std::sqrt(g0 / (4.0 * kPi)) / (k - I * g0 / 2.0) * q_factor(k, std::abs(n), g0);
}

cplx B_bk(double k, int n, double g0) { return std::conj(B_kb(k, -n, g0)); }

num::CQuad A_quadrature(double kf, double ki, int n, double g0, double tol) {
  auto f = [=](double t) {
    const double g = g0 * std::sin(t);
    return std::exp(2.0 * I * (std::atan(g / kf) - std::atan(g / ki))) * phi_cc(kf, ki, t, g0);
  };
  return num::fourier_oracle(f, n, tol);
}

num::CQuad B_kb_quadrature(double k, int n, double g0, double tol) {
  auto f = [=](double t) {
    return std::exp(2.0 * I * std::atan(g0 * std::sin(t) / k)) * phi_kb_mean(k, t, g0);
  };
  return num::fourier_oracle(f, n, tol);
}

num::CQuad B_bk_quadrature(double k, int n, double g0, double tol) {
  auto f = [=](double t) {
    return phi_cb_mean(k, t, g0) * std::exp(-2.0 * I * std::atan(g0 * std::sin(t) / k));
  };
  return num::fourier_oracle(f, n, tol);
}

}  // namespace odb
