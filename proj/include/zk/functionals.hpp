#pragma once
// Integral functionals.  Quadratic quantities are evaluated in coefficient
// space, where the discrete Parseval identity makes them exact; cubic and
// higher powers are evaluated by synthesis on an oversampled grid (padding is
// exact, so the only error is the quadrature of the unresolved power).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "zk/operators.hpp"
#include "zk/transforms.hpp"

namespace zk {

[[nodiscard]] inline double inner_product(const Domain& dom,
                                          const SpectralField& a,
                                          const SpectralField& b) {
  require_shape(dom, a);
  require_shape(dom, b);
  if (a.basis1 != b.basis1 || a.basis2 != b.basis2)
    throw std::invalid_argument("inner_product: basis tags differ");
  double s = 0.0;
  for (int l = 0; l < dom.n2(); ++l)
    for (int j = 0; j < dom.n1(); ++j)
      for (int k = 0; k < dom.kx(); ++k) {
        const size_t i = dom.sidx(k, j, l);
        s += dom.mult(k) * (a.c[i].real() * b.c[i].real() +
                            a.c[i].imag() * b.c[i].imag());
      }
  return s * dom.modal_weight();
}

namespace detail {

// Sum of w(xi, mu1, mu2) * |c|^2 over modes, with multiplicity and quadrature
// weights folded in.
template <class W>
[[nodiscard]] double weighted_sq(const Domain& dom, const SpectralField& f, W w) {
  require_shape(dom, f);
  double s = 0.0;
  for (int l = 0; l < dom.n2(); ++l) {
    const double m2 = dom.d() == 2 ? dom.mu2()[static_cast<size_t>(l)] : 0.0;
    for (int j = 0; j < dom.n1(); ++j) {
      const double m1 = dom.mu1()[static_cast<size_t>(j)];
      for (int k = 0; k < dom.kx(); ++k) {
        const double xi = dom.xi()[static_cast<size_t>(k)];
        s += dom.mult(k) * w(xi, m1, m2) * std::norm(f.c[dom.sidx(k, j, l)]);
      }
    }
  }
  return s * dom.modal_weight();
}

}  // namespace detail

[[nodiscard]] inline double l2_sq(const Domain& dom, const SpectralField& f) {
  return detail::weighted_sq(dom, f, [](double, double, double) { return 1.0; });
}

[[nodiscard]] inline double l2_norm(const Domain& dom, const SpectralField& f) {
  return std::sqrt(l2_sq(dom, f));
}

// |grad u|^2 = sum (xi^2 + mu1^2 + mu2^2) |c|^2
[[nodiscard]] inline double grad_sq(const Domain& dom, const SpectralField& f) {
  return detail::weighted_sq(dom, f, [](double x, double a, double b) {
    return x * x + a * a + b * b;
  });
}

// [u]_2^2 = |u_xx|^2 + |u_yy|^2 (+ |u_zz|^2): pure fourth-power weights.
[[nodiscard]] inline double semi2_sq(const Domain& dom, const SpectralField& f) {
  return detail::weighted_sq(dom, f, [](double x, double a, double b) {
    return x * x * x * x + a * a * a * a + b * b * b * b;
  });
}

// [grad u]_2^2 = sum_i [d_i u]_2^2: the product weight (|k|^2)(|k|^4_diag).
[[nodiscard]] inline double grad_semi2_sq(const Domain& dom,
                                          const SpectralField& f) {
  return detail::weighted_sq(dom, f, [](double x, double a, double b) {
    return (x * x + a * a + b * b) *
           (x * x * x * x + a * a * a * a + b * b * b * b);
  });
}

// Full H^2 norm squared: sum over all derivatives up to second order.
[[nodiscard]] inline double h2_sq(const Domain& dom, const SpectralField& f) {
  return detail::weighted_sq(dom, f, [](double x, double a, double b) {
    const double x2 = x * x, a2 = a * a, b2 = b * b;
    return 1.0 + x2 + a2 + b2 + x2 * x2 + a2 * a2 + b2 * b2 + x2 * a2 +
           x2 * b2 + a2 * b2;
  });
}

// x-mean profile: coefficients of bar u(y) = int_0^1 u dx in the transverse
// basis, plus its cross-sectional L2 norm.
struct XMean {
  std::vector<cplx> coeff;  // n1*n2 entries, first axis fastest
  double l2 = 0.0;
};

[[nodiscard]] inline XMean x_mean(const Domain& dom, const SpectralField& f) {
  require_shape(dom, f);
  XMean r;
  r.coeff.resize(static_cast<size_t>(dom.n1()) * dom.n2());
  double s = 0.0;
  for (int l = 0; l < dom.n2(); ++l)
    for (int j = 0; j < dom.n1(); ++j) {
      const cplx v = f.c[dom.sidx(0, j, l)];
      r.coeff[static_cast<size_t>(j) + static_cast<size_t>(dom.n1()) * l] = v;
      s += std::norm(v);
    }
  r.l2 = std::sqrt(s * dom.modal_weight());
  return r;
}

namespace detail {

[[nodiscard]] inline Domain refined_domain(const Domain& dom, int factor) {
  DomainSpec s{dom.d(), dom.nx() * factor, dom.n1() * factor,
               dom.d() == 2 ? dom.n2() * factor : 0, dom.bc()};
  return build_domain(s);
}

[[nodiscard]] inline double grid_power_integral(const Domain& fine,
                                                const PhysicalField& v, int p,
                                                bool absolute) {
  double s = 0.0;
  for (double x : v.v) {
    double t = absolute ? std::fabs(x) : x;
    double acc = 1.0;
    for (int q = 0; q < p; ++q) acc *= t;
    s += acc;
  }
  return s * fine.quad_weight();
}

}  // namespace detail

// int u^3 on a caller-supplied oversampled grid (same d and bc, finer
// resolution).  Padding reproduces u exactly on the fine grid; a 4x grid
// leaves only the quadrature error of the cubic, ~1e-12 for resolved fields.
[[nodiscard]] inline double signed_cubic(const Domain& dom, const SpectralField& f,
                                         const Domain& fine) {
  PhysicalField v = inverse_transform(fine, resample(dom, fine, f));
  return detail::grid_power_integral(fine, v, 3, false);
}

[[nodiscard]] inline double signed_cubic(const Domain& dom,
                                         const SpectralField& f) {
  return signed_cubic(dom, f, detail::refined_domain(dom, 4));
}

// int |u|^p by refining the synthesis grid until doubling changes the result
// by less than rel_tol.  |u|^p has kinks at the zero set, so convergence is
// by brute grid-doubling rather than spectral padding alone.
[[nodiscard]] inline double lp_integral(const Domain& dom, const SpectralField& f,
                                        int p, double rel_tol = 1e-8) {
  if (p < 2 || p > 8) throw std::invalid_argument("lp_integral: p must be in 2..8");
  const int cap = dom.d() == 1 ? 64 : 8;
  double prev = 0.0;
  bool have_prev = false;
  double last = 0.0;
  for (int factor = 2; factor <= cap; factor *= 2) {
    const Domain fine = detail::refined_domain(dom, factor);
    PhysicalField v = inverse_transform(fine, resample(dom, fine, f));
    last = detail::grid_power_integral(fine, v, p, true);
    if (have_prev &&
        std::fabs(last - prev) <= rel_tol * std::max(std::fabs(last), 1e-300))
      return last;
    prev = last;
    have_prev = true;
  }
  return last;
}

[[nodiscard]] inline double lp_norm(const Domain& dom, const SpectralField& f,
                                    int p, double rel_tol = 1e-8) {
  return std::pow(lp_integral(dom, f, p, rel_tol), 1.0 / p);
}

// E1(u) = 1/2 |grad u|^2 - 1/6 int u^3: conserved by the undamped, unforced
// semidiscrete flow up to the cubic quadrature error.
[[nodiscard]] inline double energy_e1(const Domain& dom, const SpectralField& f,
                                      const Domain& fine) {
  return 0.5 * grad_sq(dom, f) - signed_cubic(dom, f, fine) / 6.0;
}

[[nodiscard]] inline double energy_e1(const Domain& dom, const SpectralField& f) {
  return energy_e1(dom, f, detail::refined_domain(dom, 4));
}

}  // namespace zk
