#pragma once

#include <complex>
#include <optional>

namespace odb {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = 1.054571817e-34;  // J s

struct PhysicalInputs {
  double mass;    // kg
  double omega;   // rad/s
  double g_phys;  // J m
};

struct ModelParams {
  double g0 = 0.0;
  std::optional<PhysicalInputs> physical;
  double ell0 = 0.0;  // m, only set with physical inputs
  double eps0 = 0.0;  // J, only set with physical inputs
};

ModelParams to_dimensionless(double mass, double omega, double g_phys);
// inverse of the g0 map, used for round-trip checks
double physical_strength(double mass, double omega, double g0);

enum class ChannelStatus { open, closed };

struct Channel {
  int n = 0;
  ChannelStatus status = ChannelStatus::closed;
  double k = 0.0;      // open channels
  double kappa = 0.0;  // closed channels
  bool is_open() const { return status == ChannelStatus::open; }
  // complex wavenumber with Im k >= 0, the branch used for evanescent waves
  cplx wavenumber() const { return is_open() ? cplx(k, 0.0) : cplx(0.0, kappa); }
};

Channel sideband_channel(double k_i, int n);

double bound_energy(double g);
double mean_bound_energy(double g0);
double theta(double k, double g);

// q_k(n) = ((sqrt(k^2+g0^2)-k)/g0)^n
double q_factor(double k, int n, double g0);

struct BasisPoint {
  double tau;
  double g_tau;
  double theta_k;
  bool bound_present;
};

BasisPoint basis_point(double tau, double g0, double k);

enum class StateKind { continuum_plus, continuum_minus, bound };

struct BasisState {
  StateKind kind;
  double k = 0.0;
};

cplx basis_wavefunction(double xi, const BasisState& state, double g);

double berry_phase(double k, double tau, double g0);

}  // namespace odb
