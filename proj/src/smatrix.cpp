#include "odb/smatrix.hpp"

#include <algorithm>
#include <cmath>

#include "odb/amplitudes.hpp"
#include "odb/errors.hpp"
#include "odb/numerics.hpp"

namespace odb {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double kBareEta = 1e-12;

bool odd(int n) { return n % 2 != 0; }

// far-from-pole elastic form: only the n0 = +-1 pole terms, bare energies, Im Gamma
cplx far_form(double eps, double ki, double g0, const cplx& gamma0) {
  cplx s = 0.0;
  for (int n0 : {1, -1}) s += B_kb(ki, n0, g0) * B_bk(ki, -n0, g0) / (eps - n0);
  return 1.0 - 2.0 * kPi * I / ki * s + 4.0 * kPi / ki * gamma0.imag();
}

}  // namespace

Order parse_order(const std::string& s) {
  if (s == "first") return Order::first;
  if (s == "second_bare") return Order::second_bare;
  if (s == "renormalized") return Order::renormalized;
  throw DomainError("unknown order '" + s + "' (first, second_bare, renormalized)");
}

std::string to_string(Order o) {
  switch (o) {
    case Order::first: return "first";
    case Order::second_bare: return "second_bare";
    case Order::renormalized: return "renormalized";
  }
  return "?";
}

cplx elastic_T0(RenormTable& t) {
  const double ki = t.k_i();
  return 1.0 - 2.0 * kPi * I / ki * t.b_renorm(0) - 4.0 * kPi * I / ki * t.gamma(0).value();
}

SMatrixDecomposition assemble(double eps_i, double g0, Order order, int n_max) {
  if (!(eps_i > 0.0)) throw DomainError("assemble: eps_i must be positive");
  RenormTable table(eps_i, g0);
  return assemble(table, order, n_max);
}

SMatrixDecomposition assemble(RenormTable& table, Order order, int n_max) {
  if (n_max < 0) throw DomainError("assemble: n_max must be non-negative");
  const double eps_i = table.eps_i(), g0 = table.g0();
  SMatrixDecomposition d;
  d.eps_i = eps_i;
  d.g0 = g0;
  d.order = order;
  d.n_max = n_max;
  const double ki = table.k_i();
  const bool second = order != Order::first;
  const bool ren = order == Order::renormalized;

  for (int n = -n_max; n <= n_max; ++n) {
    const Channel c = sideband_channel(ki, n);
    if (!c.is_open()) continue;
    const double kf = c.k;
    const cplx pre = 2.0 * kPi * I / kf;
    std::vector<DiagramTerm> local;
    if (n == 0) local.push_back({{0, 0, 0}, 1.0, 0, AmpKind::T, false});
    local.push_back({{1, 1, 0}, n == 0 ? cplx(0.0) : pre * A_coefficient(kf, ki, n, g0), n, AmpKind::T, false});
    if (second && g0 != 0.0) {
      const cplx b = ren ? table.b_renorm(n) : b_bare(kf, ki, n, eps_i, g0, kBareEta);
      local.push_back({{2, 0, 2}, -pre * b, n, AmpKind::T, ren});
      local.push_back({{2, 2, 0}, -2.0 * pre * table.gamma(n).value(), n, AmpKind::T, false});
      if (n == 0) d.diag.b_elastic = b;
    }
    cplx tsum = 0.0, rsum = 0.0;
    for (const auto& t : local) tsum += t.value;
    d.T[n] = tsum;
    // R(n) = T(n) - delta_{n0}: the same terms without the free one
    std::vector<DiagramTerm> rterms;
    for (const auto& t : local) {
      if (t.label.nt == 0) continue;
      rterms.push_back(t);
      rterms.back().amplitude = AmpKind::R;
      rsum += t.value;
    }
    d.R[n] = rsum;
    d.terms.insert(d.terms.end(), local.begin(), local.end());
    d.terms.insert(d.terms.end(), rterms.begin(), rterms.end());
  }

  d.T_total = std::norm(d.T[0]);
  for (const auto& [n, t] : d.T)
    if (n != 0) d.T_total += sideband_channel(ki, n).k / ki * std::norm(t);

  if (second && g0 != 0.0) {
    auto& g = d.diag;
    g.gamma0 = table.gamma(0).value();
    g.n0 = dominant_pole_index(eps_i, g0);
    g.eps_R = table.eps_R(g.n0);
    g.eta_R = table.eta_R(0, g.n0);
    g.gamma_below_minus_one = table.gamma_factor(0, g.n0) <= -1.0;
    g.near_pole = std::abs(eps_i + g0 * g0 / 8.0 - g.n0) < 10.0 * g.eta_R;
    g.T0_far = far_form(eps_i, ki, g0, g.gamma0);
    g.far_mismatch = std::abs(g.T0_far - d.T[0]);
  }
  return d;
}

double w0(double eps_i, double g0) {
  if (!(eps_i > 0.0)) throw DomainError("w0: eps_i must be positive");
  RenormTable t(eps_i, g0);
  return w0(t);
}

double w0(RenormTable& t) {
  if (t.g0() == 0.0) return 0.0;
  const double ki = t.k_i();
  return std::abs(2.0 * kPi * t.b_renorm(0).real()) / std::abs(ki + 4.0 * kPi * t.gamma(0).im);
}

ZeroResult find_transmission_zero(double g0) {
  if (!(g0 > 0.0) || g0 > 1.0) throw DomainError("find_transmission_zero: need 0 < g0 <= 1");
  ZeroResult z;
  const double shift = g0 * g0 / 8.0;
  auto detune = [&](double e) { return e + shift + alpha_shift(1, e, g0) - 1.0; };
  try {
    z.eps_fp = num::find_root(detune, 0.7, 1.0 + 0.3, 1e-13);
  } catch (const std::exception&) {
    z.eps_fp = 1.0 - shift;
  }
  const double a1 = alpha_shift(1, z.eps_fp, g0);
  z.alpha1_est = -a1 / (g0 * g0);
  z.prediction = 1.0 - shift - a1;
  const double eta = beta_width(1, z.eps_fp, g0);
  z.lo = std::max(1e-3, 1.0 - shift - 3.0 * g0 * g0 * std::abs(z.alpha1_est));
  z.hi = std::max(1.0, z.eps_fp + 10.0 * eta);

  auto t0sq = [&](double e) {
    RenormTable t(e, g0);
    return std::norm(elastic_T0(t));
  };
  std::vector<double> es;
  constexpr int kCoarse = 40, kFine = 60;
  for (int i = 0; i < kCoarse; ++i) es.push_back(z.lo + (z.hi - z.lo) * i / (kCoarse - 1));
  for (int i = 0; i < kFine; ++i) {
    const double e = z.eps_fp - 10.0 * eta + 20.0 * eta * i / (kFine - 1);
    if (e > z.lo && e < z.hi) es.push_back(e);
  }
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  std::size_t ib = 0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    z.trace.emplace_back(es[i], t0sq(es[i]));
    if (z.trace[i].second < z.trace[ib].second) ib = i;
  }
  const double a = es[ib == 0 ? 0 : ib - 1], b = es[std::min(ib + 1, es.size() - 1)];
  z.eps_star = es[ib];
  z.t0_sq = z.trace[ib].second;
  if (b > a) {
    const num::MinResult m = num::bracket_min(t0sq, a, b, 1e-10 * std::max(1.0, b - a), 4);
    if (m.f < z.t0_sq) {
      z.eps_star = m.x;
      z.t0_sq = m.f;
    }
  }
  if (z.t0_sq > 0.5) {
    std::string msg = "find_transmission_zero: no minimum below 0.5 in [" + std::to_string(z.lo) + ", " +
                      std::to_string(z.hi) + "]; scan:";
    for (std::size_t i = 0; i < z.trace.size(); i += 10)
      msg += " (" + std::to_string(z.trace[i].first) + ", " + std::to_string(z.trace[i].second) + ")";
    throw NotFoundError(msg);
  }
  return z;
}

NearZeroAmplitudes near_zero_amplitudes(double eps_i, double g0, int n_max, double regime_factor) {
  if (!(eps_i > 0.0) || !(g0 > 0.0)) throw DomainError("near_zero_amplitudes: need eps_i, g0 > 0");
  RenormTable t(eps_i, g0);
  const double ki = t.k_i();
  NearZeroAmplitudes out;
  out.eta_R1 = t.eta_R(0, 1);
  out.detuning = std::abs(1.0 - t.eps_R(1));
  if (out.detuning > regime_factor * out.eta_R1)
    throw RegimeError("near_zero_amplitudes: |1 - eps_R(1)| = " + std::to_string(out.detuning) +
                      " is outside the pole region (eta_R(1) = " + std::to_string(out.eta_R1) + ")");
  const double img = t.gamma(0).im;
  // elastic amplitude with the n0 = 1 denominator reduced to i eta_R(1)
  cplx s = 0.0;
  for (int side : {+1, -1})
    for (int step = 0; step < 40; ++step) {
      const int l = side * (2 * step + 1);
      if (l == 1) continue;
      s += B_kb(ki, l, g0) * B_bk(ki, -l, g0) / (eps_i - l);
    }
  const cplx b11 = B_kb(ki, 1, g0) * B_bk(ki, -1, g0);
  const cplx T0 = 1.0 - 2.0 * kPi * I / ki * s - 2.0 * kPi * I / ki * b11 / (I * out.eta_R1) * t.Z(0) +
                  4.0 * kPi / ki * img;
  out.T[0] = T0;
  out.R[0] = T0 - 1.0;
  out.R0_sq = std::norm(out.R[0]);
  out.flux = std::norm(T0) + out.R0_sq;
  const cplx b1 = B_kb(ki, 1, g0);
  for (int n = -n_max; n <= n_max; ++n) {
    if (n == 0) continue;
    const Channel c = sideband_channel(ki, n);
    if (!c.is_open()) continue;
    const cplx v = odd(n) ? cplx(0.0) : -ki / c.k * B_kb(c.k, n + 1, g0) / b1 * (1.0 + 2.0 * kPi / ki * img);
    out.T[n] = v;
    out.R[n] = v;
    out.flux += c.k / ki * 2.0 * std::norm(v);
  }
  return out;
}

}  // namespace odb
