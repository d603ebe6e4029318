#include "odb/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/tools/roots.hpp>

#include "odb/errors.hpp"

namespace odb::num {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = 3.14159265358979323846;

// Kronrod 21 abscissae (positive half); odd indices are the Gauss 10 nodes.
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208626368087, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b;
  cplx value;
  double err;
  double l1;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk21(const CFunc& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx rk = fc * wgk[10];
  cplx rg = 0.0;
  double l1 = std::abs(fc) * wgk[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = h * xgk[j];
    const cplx f1 = f(c - dx), f2 = f(c + dx);
    rk += wgk[j] * (f1 + f2);
    l1 += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
  }
  double err = std::abs((rk - rg) * h);
  const double l1h = l1 * std::abs(h);
  err = std::max(err, 50.0 * kEps * l1h);
  return {a, b, rk * h, err, l1h};
}

}  // namespace

CQuad adaptive_quad_c(const CFunc& f, double a, double b, const QuadOptions& opt) {
  if (!(a < b)) {
    if (a == b) return {};
    throw DomainError("adaptive_quad: need a < b");
  }
  std::priority_queue<Segment> heap;
  std::vector<Segment> frozen;  // too narrow to split further
  heap.push(gk21(f, a, b));
  long evals = 21;
  auto totals = [&](cplx& v, double& e, double& l1) {
    v = 0.0; e = 0.0; l1 = 0.0;
    // copy keeps the reduction order deterministic (heap array order)
    auto h = heap;
    std::vector<Segment> all;
    all.reserve(h.size() + frozen.size());
    while (!h.empty()) { all.push_back(h.top()); h.pop(); }
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    for (const auto& s : all) { v += s.value; e += s.err; l1 += s.l1; }
  };
  cplx v;
  double e, l1;
  double e_run = heap.top().err;
  cplx v_run = heap.top().value;
  int count = 1;
  for (;;) {
    const double target = std::max({opt.abs_tol, opt.rel_tol * std::abs(v_run)});
    if (e_run <= target || heap.empty()) break;
    if (count >= opt.max_intervals) {
      totals(v, e, l1);
      if (e <= std::max(target, 200.0 * kEps * l1)) break;
      throw ToleranceError("adaptive_quad: interval budget exhausted", v.real(), e);
    }
    Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b) || (s.b - s.a) < 1e-14 * std::abs(m)) {
      frozen.push_back(s);
      continue;
    }
    Segment l = gk21(f, s.a, m), r = gk21(f, m, s.b);
    evals += 42;
    e_run += l.err + r.err - s.err;
    v_run += l.value + r.value - s.value;
    heap.push(l);
    heap.push(r);
    ++count;
    if (count % 64 == 0) {  // refresh running sums against drift
      totals(v, e, l1);
      e_run = e;
      v_run = v;
      if (e_run <= 200.0 * kEps * l1) break;
    }
  }
  totals(v, e, l1);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw ToleranceError("adaptive_quad: non-finite integrand value", v.real(), e);
  return {v, e, evals};
}

PVResult pv_integral_c(const CFunc& f, double p, double a, double b, const QuadOptions& opt) {
  if (!(a < p && p < b)) throw DomainError("pv_integral: need a < pole < b");
  const double h = std::min(p - a, b - p);
  PVResult out;
  auto fold = [&](double u) { return f(p + u) + f(p - u); };
  CQuad w = adaptive_quad_c(fold, 0.0, h, opt);
  out.value = w.value;
  out.error_estimate = w.error_estimate;
  out.evaluations = 2 * w.evaluations;
  if (p - h > a) {
    CQuad r = adaptive_quad_c(f, a, p - h, opt);
    out.value += r.value; out.error_estimate += r.error_estimate; out.evaluations += r.evaluations;
  }
  if (p + h < b) {
    CQuad r = adaptive_quad_c(f, p + h, b, opt);
    out.value += r.value; out.error_estimate += r.error_estimate; out.evaluations += r.evaluations;
  }
  // residue at three geometric offsets; the odd part kills the even error terms
  const double u0 = h / 8.0;
  auto g = [&](double u) { return 0.5 * u * (f(p + u) - f(p - u)); };
  auto e = [&](double u) { return 0.5 * u * u * (f(p + u) + f(p - u)); };
  const cplx g1 = g(u0), g2 = g(u0 / 2), g3 = g(u0 / 4);
  const cplx c1 = (4.0 * g2 - g1) / 3.0, c2 = (4.0 * g3 - g2) / 3.0;
  out.residue = (16.0 * c2 - c1) / 15.0;
  out.residue_error = std::abs(c2 - c1) / 15.0;
  out.evaluations += 10;
  const cplx e2 = e(u0 / 2), e3 = e(u0 / 4);
  const double scale = std::abs(out.residue) * u0 + std::abs(out.value) * u0 + 1e-300;
  if (std::abs(e3) > 0.5 * std::abs(e2) && std::abs(e3) > 1e-6 * scale)
    throw PoleOrderError("pv_integral: integrand is more singular than a simple pole");
  return out;
}

namespace {

// Integral over (0, h) of the regularized fold r(u) = f(p+u) + f(p-u) - 2 c2 / u^2.
// r is even and smooth, but its evaluation cancels catastrophically as u -> 0,
// so below u_c it is replaced by r0 + r2 u^2 fitted at u_c and 2 u_c.
CQuad hadamard_fold(const CFunc& f, double p, cplx c2, double h, const QuadOptions& opt) {
  auto r = [&](double u) { return f(p + u) + f(p - u) - 2.0 * c2 / (u * u); };
  const double uc = 1e-2 * h;
  CQuad out = adaptive_quad_c(r, uc, h, opt);
  const cplx r1 = r(uc), r2v = r(2.0 * uc);
  const cplx c = (r2v - r1) / (3.0 * uc * uc);
  const cplx r0 = r1 - c * uc * uc;
  out.value += r0 * uc + c * uc * uc * uc / 3.0;
  out.value -= 2.0 * c2 / h;
  out.evaluations = 2 * out.evaluations + 4;
  return out;
}

}  // namespace

CQuad finite_part_c(const CFunc& f, double p, cplx c2, double a, double b, const QuadOptions& opt) {
  if (!(a < p && p < b)) throw DomainError("finite_part: need a < pole < b");
  const double h = std::min(p - a, b - p);
  CQuad out = hadamard_fold(f, p, c2, h, opt);
  if (p - h > a) {
    CQuad r = adaptive_quad_c(f, a, p - h, opt);
    out.value += r.value; out.error_estimate += r.error_estimate; out.evaluations += r.evaluations;
  }
  if (p + h < b) {
    CQuad r = adaptive_quad_c(f, p + h, b, opt);
    out.value += r.value; out.error_estimate += r.error_estimate; out.evaluations += r.evaluations;
  }
  return out;
}

namespace {

CQuad tail_from(const CFunc& f, double x0, const QuadOptions& opt) {
  auto g = [&](double u) -> cplx {
    const double c = std::cos(u);
    if (c <= 0.0) return 0.0;
    const cplx v = f(std::tan(u)) / (c * c);
    return std::isfinite(v.real()) && std::isfinite(v.imag()) ? v : cplx(0.0);
  };
  try {
    return adaptive_quad_c(g, std::atan(x0), 0.5 * kPi, opt);
  } catch (const ToleranceError& e) {
    throw DivergenceError("semiinf_integral: tail does not converge");
  }
}

void accumulate(CQuad& acc, const CQuad& r) {
  acc.value += r.value;
  acc.error_estimate += r.error_estimate;
  acc.evaluations += r.evaluations;
}

}  // namespace

CQuad singular_semiinf_c(const CFunc& f, std::vector<SingularPoint> pts, double split,
                         const QuadOptions& opt) {
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.x < y.x; });
  for (const auto& s : pts)
    if (!(s.x > 0.0)) throw DomainError("singular_semiinf: points must be positive");
  CQuad acc;
  double x = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double p = pts[j].x;
    const double left = p - (j == 0 ? 0.0 : pts[j - 1].x);
    const double right = j + 1 < pts.size() ? pts[j + 1].x - p : left;
    if (pts[j].kind == PointKind::split) {
      if (p > x) accumulate(acc, adaptive_quad_c(f, x, p, opt));
      x = std::max(x, p);
      continue;
    }
    const double h = 0.4 * std::min(left, right);
    if (p - h > x) accumulate(acc, adaptive_quad_c(f, x, p - h, opt));
    if (pts[j].kind == PointKind::simple_pole) {
      auto fold = [&](double u) { return f(p + u) + f(p - u); };
      accumulate(acc, adaptive_quad_c(fold, 0.0, h, opt));
    } else {
      accumulate(acc, hadamard_fold(f, p, pts[j].c2, h, opt));
    }
    x = p + h;
  }
  const double X = std::max(split, x);
  if (X > x) accumulate(acc, adaptive_quad_c(f, x, X, opt));
  const CQuad t1 = tail_from(f, X, opt);
  CQuad t2 = adaptive_quad_c(f, X, 2.0 * X, opt);
  accumulate(t2, tail_from(f, 2.0 * X, opt));
  const double diff = std::abs(t1.value - t2.value);
  const double scale = std::abs(acc.value + t1.value);
  if (diff > std::max(1e3 * opt.abs_tol, 1e-6 * scale))
    throw DivergenceError("semiinf_integral: result changes under split doubling");
  acc.value += t1.value;
  acc.error_estimate += t1.error_estimate + diff;
  acc.evaluations += t1.evaluations + t2.evaluations;
  return acc;
}

CQuad semiinf_integral_c(const CFunc& f, double split, const QuadOptions& opt) {
  return singular_semiinf_c(f, {}, split, opt);
}

CQuad fourier_oracle(const CFunc& f, int n, double tol) {
  auto g = [&](double t) { return f(t) * std::exp(cplx(0.0, n * t)); };
  CQuad out;
  constexpr int kLevels = 18;
  for (int half = 0; half < 2; ++half) {
    const double a = half * kPi, b = a + kPi;
    std::vector<std::vector<cplx>> R(kLevels, std::vector<cplx>(kLevels));
    double hstep = b - a;
    R[0][0] = 0.5 * hstep * (g(a) + g(b));
    double l1 = 0.5 * hstep * (std::abs(g(a)) + std::abs(g(b)));
    long evals = 2;
    bool done = false;
    for (int j = 1; j < kLevels && !done; ++j) {
      hstep *= 0.5;
      cplx s = 0.0;
      double sa = 0.0;
      const long m = 1L << (j - 1);
      for (long i = 0; i < m; ++i) {
        const cplx v = g(a + (2 * i + 1) * hstep);
        s += v;
        sa += std::abs(v);
      }
      evals += m;
      l1 = 0.5 * l1 + hstep * sa;
      R[j][0] = 0.5 * R[j - 1][0] + hstep * s;
      double fac = 1.0;
      for (int k = 1; k <= j; ++k) {
        fac *= 4.0;
        R[j][k] = R[j][k - 1] + (R[j][k - 1] - R[j - 1][k - 1]) / (fac - 1.0);
      }
      const double err = std::abs(R[j][j] - R[j - 1][j - 1]);
      if (j >= 4 && err <= tol * l1) {
        out.value += R[j][j];
        out.error_estimate += err;
        done = true;
      }
      if (j == kLevels - 1 && !done)
        throw ToleranceError("fourier_oracle: refinement did not converge", R[j][j].real(), err);
    }
    out.evaluations += evals;
  }
  out.value /= 2.0 * kPi;
  out.error_estimate /= 2.0 * kPi;
  return out;
}

MinResult bracket_min(const std::function<double(double)>& f, double a, double b, double tol,
                      int samples) {
  if (!(a < b)) throw DomainError("bracket_min: need a < b");
  samples = std::max(samples, 4);
  std::vector<double> xs(samples + 1), fs(samples + 1);
  MinResult out;
  for (int i = 0; i <= samples; ++i) {
    xs[i] = a + (b - a) * i / samples;
    fs[i] = f(xs[i]);
  }
  out.evaluations = samples + 1;
  for (int i = 0; i <= samples; ++i) {
    const bool lo = i == 0 || fs[i] < fs[i - 1];
    const bool hi = i == samples || fs[i] <= fs[i + 1];
    if (lo && hi) out.local_minima.push_back(xs[i]);
  }
  out.ambiguous = out.local_minima.size() > 1;
  const int ib = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  double lo = xs[std::max(ib - 1, 0)], hi = xs[std::min(ib + 1, samples)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  out.evaluations += 2;
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
    ++out.evaluations;
    if (hi - lo <= 4.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
  }
  // candidates: the golden pair and the sampled best (covers boundary minima)
  out.x = xs[ib];
  out.f = fs[ib];
  if (f1 < out.f) { out.x = x1; out.f = f1; }
  if (f2 < out.f) { out.x = x2; out.f = f2; }
  const double fl = f(lo), fh = f(hi);
  out.evaluations += 2;
  if (fl < out.f) { out.x = lo; out.f = fl; }
  if (fh < out.f) { out.x = hi; out.f = fh; }
  return out;
}

double find_root(const std::function<double(double)>& f, double a, double b, double xtol) {
  const double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw NotFoundError("find_root: interval does not bracket a root");
  std::uintmax_t iters = 200;
  auto tolf = [xtol](double x, double y) { return std::abs(x - y) <= xtol; };
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tolf, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace odb::num
