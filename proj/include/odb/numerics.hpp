#pragma once

#include <complex>
#include <functional>
#include <type_traits>
#include <vector>

namespace odb::num {

using cplx = std::complex<double>;
using CFunc = std::function<cplx(double)>;

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 4000;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  long evaluations = 0;
};

using CQuad = QuadratureResult<cplx>;

// Gauss-Kronrod 10/21 with global bisection. Throws ToleranceError when the
// interval budget runs out before the tolerance is met.
CQuad adaptive_quad_c(const CFunc& f, double a, double b, const QuadOptions& opt = {});

struct PVResult : CQuad {
  cplx residue{};         // Richardson estimate of lim (x-p) f(x)
  double residue_error = 0.0;
};

// Principal value through a simple pole at p, a < p < b. The pole term is
// removed over the largest symmetric window, where its log antiderivative
// vanishes, by folding f(p+u)+f(p-u).
PVResult pv_integral_c(const CFunc& f, double pole, double a, double b, const QuadOptions& opt = {});

// Hadamard finite part through a double pole with known coefficient c2
// (f ~ c2/(x-p)^2 + c1/(x-p) + regular).
CQuad finite_part_c(const CFunc& f, double pole, cplx c2, double a, double b,
                    const QuadOptions& opt = {});

enum class PointKind { split, simple_pole, double_pole };

struct SingularPoint {
  double x;
  PointKind kind;
  cplx c2{};  // double_pole only
};

// Integral over (0, inf) of f with isolated singular points. Points are
// handled by symmetric folding windows, the tail beyond `split` by k = tan u.
// The tail is checked by doubling the split point; the difference enters
// the error estimate.
CQuad singular_semiinf_c(const CFunc& f, std::vector<SingularPoint> pts, double split,
                         const QuadOptions& opt = {});

CQuad semiinf_integral_c(const CFunc& f, double split, const QuadOptions& opt = {});

// (1/2pi) int_0^{2pi} f(tau) e^{i n tau} dtau; Romberg on [0,pi] and [pi,2pi]
// so the half-period points are always panel edges.
CQuad fourier_oracle(const CFunc& f, int n, double tol = 1e-12);

struct MinResult {
  double x = 0.0;
  double f = 0.0;
  bool ambiguous = false;            // more than one sampled local minimum
  std::vector<double> local_minima;  // sampled locations
  long evaluations = 0;
};

MinResult bracket_min(const std::function<double(double)>& f, double a, double b, double tol,
                      int samples = 32);

// Bracketed root (TOMS 748 from Boost.Math).
double find_root(const std::function<double(double)>& f, double a, double b, double xtol);

namespace detail {
template <class F>
CFunc as_complex(F f) {
  return [f](double x) -> cplx { return cplx(f(x)); };
}
template <class F>
using ret_t = std::invoke_result_t<F, double>;

template <class F>
auto narrow(const CQuad& r) {
  if constexpr (std::is_same_v<ret_t<F>, double>)
    return QuadratureResult<double>{r.value.real(), r.error_estimate, r.evaluations};
  else
    return r;
}
}  // namespace detail

template <class F>
auto adaptive_quad(F f, double a, double b, const QuadOptions& opt = {}) {
  return detail::narrow<F>(adaptive_quad_c(detail::as_complex(f), a, b, opt));
}

template <class F>
auto semiinf_integral(F f, double split, const QuadOptions& opt = {}) {
  return detail::narrow<F>(semiinf_integral_c(detail::as_complex(f), split, opt));
}

}  // namespace odb::num
