#include "odb/renorm.hpp"

#include <algorithm>
#include <cmath>

#include "odb/errors.hpp"
#include "odb/numerics.hpp"

namespace odb {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double kOpenThreshold = 1e-12;  // k^2 below this counts as closed
constexpr double kSeriesRel = 1e-15;

bool odd(int n) { return n % 2 != 0; }
double parity(int n) { return odd(n) ? -1.0 : 1.0; }

// A without the pole guard; zero on the measure-zero diagonal.
cplx A_raw(double kf, double ki, int n, double g0) {
  if (n == 0 || kf == ki) return 0.0;
  return A_coefficient(kf, ki, n, g0);
}

struct TermResult {
  cplx value;
  double err;
  bool open;
  double residue;  // energy-pole residue of the integrand, d/dk form
};

TermResult gamma_term(double kf, double ki, int n, int l, double g0, const LoopOptions& opt) {
  double kl2 = ki * ki + 2.0 * l;
  if (std::abs(kl2) <= kOpenThreshold) kl2 = 0.0;  // threshold: keep the k^2 zero exact
  // factored when open so the pole sits exactly on the fold point
  const double klp = kl2 > 0.0 ? std::sqrt(kl2) : 0.0;
  auto f = [=](double k) -> cplx {
    const double den = klp > 0.0 ? 0.5 * (klp - k) * (klp + k) : 0.5 * (kl2 - k * k);
    return A_raw(kf, k, n - l, g0) * A_raw(k, ki, l, g0) / den;
  };
  std::vector<num::SingularPoint> pts;
  const bool elastic = n == 0;
  if (elastic) {
    if (odd(l)) {
      const cplx r1 = A_residue(ki, ki, -l, g0), r2 = A_residue(ki, ki, l, g0);
      pts.push_back({ki, num::PointKind::double_pole, -r1 * r2 / double(l)});
    } else {
      pts.push_back({ki, num::PointKind::simple_pole});
    }
  } else {
    pts.push_back({ki, num::PointKind::simple_pole});
    pts.push_back({kf, num::PointKind::simple_pole});
  }
  TermResult out{0.0, 0.0, false, 0.0};
  cplx pole_term = 0.0;
  if (kl2 > kOpenThreshold) {
    const double kl = std::sqrt(kl2);
    pts.push_back({kl, num::PointKind::simple_pole});
    const cplx aa = A_raw(kf, kl, n - l, g0) * A_raw(kl, ki, l, g0);
    pole_term = -I * kPi * aa / kl;
    out.open = true;
    out.residue = (-aa / kl).real();
  }
  const double split = std::max({4.0 * ki, 4.0 * kf, 4.0 * g0, 8.0});
  num::QuadOptions q{opt.abs_tol, opt.rel_tol, 20000};
  const num::CQuad r = num::singular_semiinf_c(f, pts, split, q);
  out.value = r.value + pole_term;
  out.err = r.error_estimate;
  return out;
}

}  // namespace

LoopValue gamma_loop(double kf, double ki, int n, double g0, const LoopOptions& opt) {
  if (!(kf > 0.0) || !(ki > 0.0)) throw DomainError("gamma_loop: wavenumbers must be positive");
  LoopValue lv;
  lv.n = n;
  if (g0 == 0.0) return lv;
  cplx total = 0.0;
  double im_end = 0.0;
  std::vector<std::pair<int, double>> residues;
  for (int side : {+1, -1}) {
    int quiet = 0, used = 0;
    for (int step = 1; used < opt.l_cap; ++step) {
      const int l = side * step;
      if (l == n) continue;
      const TermResult t = gamma_term(kf, ki, n, l, g0, opt);
      cplx term = t.value;
      if (n != 0) {
        // half residues of the k = k_i and k = k_f poles
        cplx di = 0.0, df = 0.0;
        if (odd(l)) di = A_raw(kf, ki, n - l, g0) * A_residue(ki, ki, l, g0) / double(l);
        if (odd(n - l)) df = -A_residue(kf, kf, n - l, g0) * A_raw(kf, ki, l, g0) / double(l - n);
        const cplx end = I * kPi * (df - di);
        term += end;
        im_end += end.imag();
      }
      total += term;
      lv.quad_error += t.err;
      if (t.open) {
        lv.open_channels.push_back(l);
        residues.emplace_back(l, t.residue);
        lv.im_energy_poles += kPi * t.residue;
      }
      lv.l_min = std::min(lv.l_min, l);
      lv.l_max = std::max(lv.l_max, l);
      ++used;
      quiet = std::abs(term) <= kSeriesRel * std::abs(total) ? quiet + 1 : 0;
      if (quiet >= 2) break;
    }
    if (used >= opt.l_cap) lv.truncation_warning = true;
  }
  std::sort(residues.begin(), residues.end());
  std::sort(lv.open_channels.begin(), lv.open_channels.end());
  for (const auto& [l, r] : residues) lv.pole_residues.push_back(r);
  lv.re = total.real();
  lv.im = total.imag();
  lv.im_endpoint_poles = im_end;
  return lv;
}

LoopValue gamma_elastic_closed(double ki, double g0) {
  if (!(ki > 0.0) || !(g0 > 0.0)) throw DomainError("gamma_elastic_closed: need k_i, g0 > 0");
  LoopValue lv;
  const double kib = ki / g0;
  auto sq = [](cplx z) { return std::sqrt(z); };
  auto lam = [&](cplx kb) { return sq(kb * kb + 1.0) - kb; };
  auto kap = [&](cplx kb) { return sq(kb * kb + 1.0); };
  auto qb = [&](cplx kb, int m) { return std::pow(lam(kb), m); };
  const cplx lk = lam(kib), kk = kap(kib);
  const cplx ki_c = ki;
  cplx total = 0.0;
  double im_open = 0.0;
  for (int side : {+1, -1}) {
    int quiet = 0;
    for (int step = 1; step <= 64; ++step) {
      const int l = side * step, L = step;
      const double kl2 = ki * ki + 2.0 * l;
      const bool open = kl2 > kOpenThreshold;
      const cplx kl = open ? cplx(std::sqrt(kl2), 0.0) : cplx(0.0, std::sqrt(std::max(-kl2, 0.0)));
      const cplx klb = kl / g0;
      const cplx kl2c = open ? cplx(kl2, 0.0) : kl * kl;
      const double sl = parity(l), sl1 = parity(l - 1);
      const cplx d = qb(klb, L) - sl * qb(kib, L);
      const cplx im_term = -(ki * ki / (4.0 * kPi)) * kl / double(l * l) / ((ki_c + kl) * (ki_c + kl)) * d * d;
      if (open) {
        im_open += im_term.real();
        lv.open_channels.push_back(l);
      }
      const cplx A1 = qb(klb, L) * (1.0 / (klb * (klb - kib)) + sl / (klb * (klb + kib))) -
                      2.0 / (klb * klb - kib * kib) * qb(kib, L);
      const cplx B1 = qb(klb, L - 1) * (lam(klb) * lam(klb) - 1.0) *
                          (1.0 / (klb * (klb - kib)) + sl1 / (klb * (klb + kib))) -
                      2.0 / (klb * klb - kib * kib) * qb(kib, L - 1) * (lk * lk - 1.0);
      const cplx I1 = ki * ki / (16.0 * kPi * kPi) * kl2c * std::log(kl2c) / double(l * l) * A1 * B1 /
                      (g0 * g0 * g0);
      const cplx A2 = 0.5 * qb(kib, L + 1) / (kk * kk * kib) - 0.5 * (L + 1) * qb(kib, L) / (kk * kib) -
                      std::pow(lk, L + 1) / (kk * kk * kib) -
                      0.25 * qb(kib, L) / (kk * kk * kib) * (lk - kib) + 0.25 * sl * qb(kib, L) / (kib * kib);
      const cplx B2 = qb(kib, L) / (kk * kk * kib) * (lk * lk - 1.0) -
                      double(L) * qb(kib, L - 1) / (kk * kib) * (lk * lk - 1.0) -
                      4.0 * std::pow(lk, L + 2) / (kk * kk * kib) -
                      0.5 * qb(kib, L - 1) / (kk * kk * kib) * (lk * lk - 1.0) * (lk - kib) +
                      0.5 * sl1 * qb(kib, L - 1) / (kib * kib) * (lk * lk - 1.0);
      const cplx I2 = -std::pow(ki, 4) * std::log(ki * ki) / (4.0 * kPi * kPi) / double(l * l) * A2 * B2 /
                      (g0 * g0 * g0);
      const cplx term = I * im_term + I1 + I2;
      total += term;
      lv.l_min = std::min(lv.l_min, l);
      lv.l_max = std::max(lv.l_max, l);
      quiet = std::abs(term) <= kSeriesRel * std::abs(total) ? quiet + 1 : 0;
      if (quiet >= 2) break;
    }
  }
  std::sort(lv.open_channels.begin(), lv.open_channels.end());
  // closed channels continue into Re only; near a threshold log(k_l^2) of
  // the continued k_l would otherwise leak an imaginary part
  lv.re = total.real();
  lv.im = im_open;
  lv.im_energy_poles = im_open;
  return lv;
}

cplx b_bare(double kf, double ki, int n, double eps_i, double g0, double eta) {
  if (!(eta > 0.0)) throw DomainError("b_bare: eta must be positive");
  if (odd(n) || g0 == 0.0) return 0.0;  // needs n+n0 and n0 both odd
  const double et = eps_i + g0 * g0 / 8.0;
  cplx total = 0.0;
  for (int side : {+1, -1}) {
    int quiet = 0;
    for (int step = 0, used = 0; used < 64; ++step) {
      const int n0 = side * (2 * step + 1);
      const cplx t = B_kb(kf, n + n0, g0) * B_bk(ki, -n0, g0) / (et - n0 + I * eta);
      total += t;
      ++used;
      quiet = std::abs(t) <= kSeriesRel * std::abs(total) ? quiet + 1 : 0;
      if (quiet >= 2) break;
    }
  }
  return total;
}

namespace {

// sum_{m >= 0} (a + 2m)^{-p}, Euler-Maclaurin with step 2
double odd_power_tail(double a, int p) {
  const double ap = std::pow(a, -p);
  return 0.5 * a * ap / (p - 1) + 0.5 * ap + p / 6.0 * ap / a - p * (p + 1) * (p + 2) / 90.0 * ap / (a * a * a);
}

// alpha(n0, eps) = a(eps - n0); the two signs of the odd index m share |B(m)|^2
double alpha_shifted(double x, double g0) {
  // x = odd integer puts a pole on k = 0 with a divergent limit; take the open side
  const double xr = std::round(x);
  if (odd(static_cast<int>(xr)) && std::abs(x - xr) < 1e-10) x = xr + 1e-10;
  constexpr int kLast = 99;
  double total = 0.0, t_last = 0.0, t_prev = 0.0;
  int quiet = 0;
  for (int j = 1; j <= kLast; j += 2) {
    // e_k - e = (k - k_e)(k + k_e)/2 with k_e the pole passed to the fold
    const double ep = x + j, em = x - j;
    auto pole = [](double e) { return 2.0 * e > kOpenThreshold ? std::sqrt(2.0 * e) : 0.0; };
    const double kp = pole(ep), km = pole(em);
    auto den = [](double k, double e, double ke) {
      return ke > 0.0 ? 0.5 * (k - ke) * (k + ke) : 0.5 * k * k - e;
    };
    auto f = [=](double k) -> cplx {
      return B_sq(k, j, g0) * (1.0 / den(k, ep, kp) + 1.0 / den(k, em, km));
    };
    std::vector<num::SingularPoint> pts;
    double kmax = 0.0;
    for (double ke : {kp, km}) {
      if (ke > 0.0) {
        pts.push_back({ke, num::PointKind::simple_pole});
        kmax = std::max(kmax, ke);
      }
    }
    bool near = false;
    for (const auto& p : pts) near = near || std::abs(p.x - g0) < 0.5 * g0;
    if (!near && g0 > 0.0) pts.push_back({g0, num::PointKind::split});
    const double split = std::max({4.0 * kmax, 4.0 * g0, 8.0});
    const num::CQuad r = num::singular_semiinf_c(f, pts, split, {1e-16, 1e-11, 20000});
    const double t = 2.0 * r.value.real();
    total += t;
    t_prev = t_last;
    t_last = t;
    quiet = std::abs(t) <= kSeriesRel * std::abs(total) ? quiet + 1 : 0;
    if (quiet >= 2) return total;
  }
  // terms fall off as C/j^3 + D/j^5; fit on the last two and add the rest
  const double J = kLast, Jm = kLast - 2;
  const double a3 = 1.0 / (J * J * J), a5 = a3 / (J * J);
  const double b3 = 1.0 / (Jm * Jm * Jm), b5 = b3 / (Jm * Jm);
  const double det = a3 * b5 - a5 * b3;
  const double C = (t_last * b5 - t_prev * a5) / det, D = (a3 * t_prev - b3 * t_last) / det;
  return total + C * odd_power_tail(J + 2.0, 3) + D * odd_power_tail(J + 2.0, 5);
}

double beta_shifted(double x, double g0) {
  double total = 0.0;
  int m = static_cast<int>(std::floor(-x)) - 1;
  if (!odd(m)) --m;
  int quiet = 0;
  for (int used = 0; used < 128; m += 2, ++used) {
    const double e = 2.0 * (x + m);
    if (e <= kOpenThreshold) continue;
    const double k = std::sqrt(e);
    const double t = 2.0 * kPi / k * B_sq(k, m, g0);
    total += t;
    quiet = t <= kSeriesRel * total ? quiet + 1 : 0;
    if (quiet >= 2) break;
  }
  return total;
}

}  // namespace

double alpha_shift(int n0, double eps_i, double g0) {
  if (!(g0 > 0.0)) throw DomainError("alpha_shift: g0 must be positive");
  return alpha_shifted(eps_i - n0, g0);
}

double beta_width(int n0, double eps_i, double g0) {
  if (!(g0 > 0.0)) throw DomainError("beta_width: g0 must be positive");
  return beta_shifted(eps_i - n0, g0);
}

int dominant_pole_index(double eps_i, double g0) {
  const double et = eps_i + g0 * g0 / 8.0;
  const int n0 = 2 * static_cast<int>(std::lround(std::floor((et - 1.0) / 2.0 + 0.5))) + 1;
  return std::max(1, n0);
}

RenormTable::RenormTable(double eps_i, double g0) : eps_(eps_i), g0_(g0), ki_(std::sqrt(2.0 * eps_i)) {
  if (!(eps_i > 0.0)) throw DomainError("RenormTable: eps_i must be positive");
}

double RenormTable::alpha(int n0) {
  auto it = alpha_.find(n0);
  if (it != alpha_.end()) return it->second;
  const double v = g0_ > 0.0 ? alpha_shift(n0, eps_, g0_) : 0.0;
  alpha_[n0] = v;
  return v;
}

double RenormTable::beta(int n0) {
  auto it = beta_.find(n0);
  if (it != beta_.end()) return it->second;
  const double v = g0_ > 0.0 ? beta_width(n0, eps_, g0_) : 0.0;
  beta_[n0] = v;
  return v;
}

const LoopValue& RenormTable::gamma(int n) {
  auto it = gammas_.find(n);
  if (it != gammas_.end()) return it->second;
  const Channel c = sideband_channel(ki_, n);
  if (!c.is_open()) throw DomainError("RenormTable::gamma: closed sideband");
  return gammas_[n] = gamma_loop(c.k, ki_, n, g0_);
}

double RenormTable::gamma_factor(int n, int n0) {
  const cplx g00 = gamma(0).value();
  if (n == 0) return 4.0 * kPi / ki_ * g00.imag();
  const double kf = sideband_channel(ki_, n).k;
  const cplx den = B_kb(kf, n + n0, g0_);
  if (den == 0.0) return 2.0 * kPi / ki_ * g00.imag();  // ratio term skipped
  const cplx rho = B_kb(ki_, n0, g0_) / den;
  return 2.0 * kPi / ki_ * (g00 + rho * gamma(n).value()).imag();
}

cplx RenormTable::Z(int n) { return Z(n, dominant_pole_index(eps_, g0_)); }

cplx RenormTable::Z(int n, int n0) {
  if (g0_ == 0.0) return 1.0;
  if (n == 0) {
    const double er = eps_R(n0), et = eta_R(0, n0);
    cplx s = 0.0;
    for (int side : {+1, -1}) {
      int quiet = 0;
      for (int step = 0; step < 64; ++step) {
        const int l = side * (2 * step + 1);
        if (l == n0) continue;
        const cplx t = B_kb(ki_, -l, g0_) * B_bk(ki_, l, g0_) / (er - l + I * et);
        s += t;
        quiet = std::abs(t) <= kSeriesRel * std::abs(s) ? quiet + 1 : 0;
        if (quiet >= 2) break;
      }
    }
    return 1.0 - 2.0 * kPi * I / ki_ * (4.0 * I * gamma(0).im - s);
  }
  if (odd(n)) return 1.0;  // B^R(n) vanishes identically
  const double kf = sideband_channel(ki_, n).k;
  const cplx rho = B_kb(ki_, n0, g0_) / B_kb(kf, n + n0, g0_);
  const double et = eps_ + g0_ * g0_ / 8.0;
  cplx s = 0.0;
  for (int side : {+1, -1}) {
    int quiet = 0;
    for (int step = 0; step < 64; ++step) {
      const int l = side * (2 * step + 1);
      if (l == -n0) continue;
      const cplx t = B_kb(kf, n - l, g0_) * B_bk(ki_, l, g0_) / (et + l);
      s += t;
      quiet = std::abs(t) <= kSeriesRel * std::abs(s) ? quiet + 1 : 0;
      if (quiet >= 2) break;
    }
  }
  const cplx inner = 2.0 * gamma(0).value() +
                     rho * (2.0 * gamma(n).value() - A_coefficient(kf, ki_, n, g0_)) - rho * s;
  return 1.0 - 2.0 * kPi * I / ki_ * inner;
}

RenormFactors RenormTable::factors(int n, int n0) {
  RenormFactors rf;
  rf.n0 = n0;
  if (g0_ == 0.0) {
    rf.eps_R = eps_;
    return rf;
  }
  rf.alpha = alpha(n0);
  rf.beta = beta(n0);
  rf.gamma_factor = gamma_factor(n, n0);
  rf.eta_R = rf.beta * (1.0 + rf.gamma_factor);
  rf.eps_R = eps_R(n0);
  rf.Z = Z(n, n0);
  rf.gamma_below_minus_one = rf.gamma_factor <= -1.0;
  return rf;
}

cplx RenormTable::b_renorm(int n) {
  if (odd(n) || g0_ == 0.0) return 0.0;
  const double kf = sideband_channel(ki_, n).k;
  cplx total = 0.0;
  for (int side : {+1, -1}) {
    int quiet = 0;
    for (int step = 0; step < 64; ++step) {
      const int n0 = side * (2 * step + 1);
      const cplx num = B_kb(kf, n + n0, g0_) * B_bk(ki_, -n0, g0_);
      // tiny numerators are dropped before their alpha integrals are paid for
      if (std::abs(num) <= 1e-18 * std::abs(total)) {
        if (++quiet >= 2) break;
        continue;
      }
      const cplx t = num / (eps_R(n0) - n0 + I * eta_R(n, n0)) * Z(n, n0);
      total += t;
      quiet = std::abs(t) <= kSeriesRel * std::abs(total) ? quiet + 1 : 0;
      if (quiet >= 2) break;
    }
  }
  return total;
}

RenormFactors renorm_factors(int n, int n0, double kf, double ki, double eps_i, double g0) {
  if (std::abs(ki - std::sqrt(2.0 * eps_i)) > 1e-12 * ki)
    throw DomainError("renorm_factors: k_i inconsistent with eps_i");
  const Channel c = sideband_channel(ki, n);
  if (!c.is_open() || std::abs(c.k - kf) > 1e-12 * kf)
    throw DomainError("renorm_factors: k_f is not the open sideband n");
  RenormTable t(eps_i, g0);
  return t.factors(n, n0);
}

cplx b_renorm(double kf, double ki, int n, double eps_i, double g0) {
  const Channel c = sideband_channel(ki, n);
  if (!c.is_open() || std::abs(c.k - kf) > 1e-12 * kf)
    throw DomainError("b_renorm: k_f is not the open sideband n");
  RenormTable t(eps_i, g0);
  return t.b_renorm(n);
}

}  // namespace odb
