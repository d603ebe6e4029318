#include "odb/core_model.hpp"

#include <cmath>

#include "odb/errors.hpp"

namespace odb {

ModelParams to_dimensionless(double mass, double omega, double g_phys) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw DomainError("to_dimensionless: mass and omega must be positive");
  ModelParams p;
  p.g0 = g_phys / (kHbar * omega) * std::sqrt(mass * omega / kHbar);
  p.physical = PhysicalInputs{mass, omega, g_phys};
  p.ell0 = std::sqrt(kHbar / (mass * omega));
  p.eps0 = kHbar * omega;
  return p;
}

double physical_strength(double mass, double omega, double g0) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw DomainError("physical_strength: mass and omega must be positive");
  return g0 * kHbar * omega / std::sqrt(mass * omega / kHbar);
}

Channel sideband_channel(double k_i, int n) {
  Channel c;
  c.n = n;
  const double e = k_i * k_i + 2.0 * n;
  if (e > 0.0) {
    c.status = ChannelStatus::open;
    c.k = std::sqrt(e);
  } else {
    c.status = ChannelStatus::closed;
    c.kappa = std::sqrt(-e);
  }
  return c;
}

double bound_energy(double g) {
  if (!(g > 0.0)) throw NoBoundStateError("bound_energy: no bound state for g <= 0");
  return -0.5 * g * g;
}

double mean_bound_energy(double g0) { return -g0 * g0 / 8.0; }

double theta(double k, double g) {
  if (!(k > 0.0)) throw DomainError("theta: k must be positive");
  return std::atan(g / k);
}

double q_factor(double k, int n, double g0) {
  if (n < 0) throw DomainError("q_factor: n must be non-negative");
  if (n == 0) return 1.0;
  if (g0 == 0.0) return 0.0;
  // g0/(sqrt(k^2+g0^2)+k) avoids the cancellation at k >> g0
  const double q1 = g0 / (std::sqrt(k * k + g0 * g0) + k);
  double r = 1.0;
  for (int j = 0; j < n; ++j) r *= q1;
  return r;
}

BasisPoint basis_point(double tau, double g0, double k) {
  const double g = g0 * std::sin(tau);
  return {tau, g, theta(k, g), g > 0.0};
}

cplx basis_wavefunction(double xi, const BasisState& s, double g) {
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  const cplx I(0.0, 1.0);
  switch (s.kind) {
    case StateKind::bound:
      if (!(g > 0.0)) throw NoBoundStateError("basis_wavefunction: bound state needs g > 0");
      return std::sqrt(g) * std::exp(-g * std::abs(xi));
    case StateKind::continuum_plus:
    case StateKind::continuum_minus: {
      if (!(s.k > 0.0)) throw DomainError("basis_wavefunction: k must be positive");
      const double sgn = s.kind == StateKind::continuum_plus ? 1.0 : -1.0;
      const cplx refl = g / (g + I * s.k);
      return norm * (std::exp(sgn * I * s.k * xi) - refl * std::exp(I * s.k * std::abs(xi)));
    }
  }
  return 0.0;
}

double berry_phase(double k, double tau, double g0) {
  const double g = g0 * std::sin(tau);
  const double gdot = g0 * std::cos(tau);
  return -gdot * k / (g * g + k * k);
}

}  // namespace odb
