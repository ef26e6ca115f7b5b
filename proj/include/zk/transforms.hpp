#pragma once

// Forward/inverse transforms, dealias projection, conjugate-symmetry repair,
// resolution resampling and boundary traces.
//
// forward_transform returns the coefficients of the basis expansion (see
// domain.hpp for the normalisation); inverse_transform is plain synthesis.
// Fields whose transverse axes are tagged `cosine` (odd-order derivatives of
// dirichlet data) are synthesised through a direct-summation path: they occur
// only in traces and diagnostics, never inside the time loop.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "zk/domain.hpp"
#include "zk/field.hpp"

namespace zk {

[[nodiscard]] inline SpectralField forward_transform(const Domain& dom, const PhysicalField& u) {
  require_shape(dom, u);
  SpectralField out = make_spectral(dom);
  dom.exec_x_forward(u.v.data(), out.c.data());
  dom.exec_transverse(out.c.data(), 1, /*forward=*/true);
  if (dom.d() == 2) dom.exec_transverse(out.c.data(), 2, /*forward=*/true);
  const double s = dom.forward_scale();
  for (cplx& z : out.c) z *= s;
  return out;
}

namespace detail {

// Basis matrices for the direct-summation synthesis path.
inline std::vector<cplx> transverse_basis_matrix(const std::vector<double>& mu,
                                                 const std::vector<double>& y,
                                                 TransverseBasis basis) {
  const int n = int(mu.size());
  const int g = int(y.size());
  std::vector<cplx> b(std::size_t(n) * g);
  for (int j = 0; j < n; ++j)
    for (int q = 0; q < g; ++q) {
      const double s = y[q] + pi / 2;
      switch (basis) {
        case TransverseBasis::sine: b[std::size_t(j) * g + q] = std::sin(mu[j] * s); break;
        case TransverseBasis::cosine: b[std::size_t(j) * g + q] = std::cos(mu[j] * s); break;
        case TransverseBasis::fourier:
          b[std::size_t(j) * g + q] = std::polar(1.0, mu[j] * s);
          break;
      }
    }
  return b;
}

inline PhysicalField inverse_direct(const Domain& dom, const SpectralField& f) {
  PhysicalField out = make_physical(dom);
  const int kx = dom.kx(), n1 = dom.n1(), n2 = dom.n2(), nx = dom.nx();
  std::vector<cplx> xmat(std::size_t(kx) * nx);
  for (int k = 0; k < kx; ++k)
    for (int i = 0; i < nx; ++i)
      xmat[std::size_t(k) * nx + i] = std::polar(1.0, 2.0 * pi * k * dom.x_grid()[i]);
  const auto b1 = transverse_basis_matrix(dom.mu1(), dom.y1_grid(), f.basis1);
  const auto b2 = dom.d() == 2
                      ? transverse_basis_matrix(dom.mu2(), dom.y2_grid(), f.basis2)
                      : std::vector<cplx>{cplx(1.0, 0.0)};
  const int g2 = dom.d() == 2 ? n2 : 1;
  for (int l = 0; l < n2; ++l)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < kx; ++k) {
        const cplx c = f.at(dom, k, j, l);
        if (c == cplx(0.0, 0.0)) continue;
        const double m = dom.mult(k);
        for (int lq = 0; lq < g2; ++lq) {
          const cplx cl = c * b2[std::size_t(l) * g2 + lq];
          for (int jq = 0; jq < n1; ++jq) {
            const cplx cj = cl * b1[std::size_t(j) * n1 + jq];
            for (int i = 0; i < nx; ++i)
              out.v[dom.pidx(i, jq, lq)] +=
                  m * (cj * xmat[std::size_t(k) * nx + i]).real();
          }
        }
      }
  return out;
}

}  // namespace detail

[[nodiscard]] inline PhysicalField inverse_transform(const Domain& dom, const SpectralField& f) {
  require_shape(dom, f);
  if (!in_standard_basis(dom, f)) return detail::inverse_direct(dom, f);
  std::vector<cplx> buf = f.c;  // transverse passes run in place; c2r destroys input
  if (dom.d() == 2) dom.exec_transverse(buf.data(), 2, /*forward=*/false);
  dom.exec_transverse(buf.data(), 1, /*forward=*/false);
  PhysicalField out = make_physical(dom);
  dom.exec_x_inverse(buf.data(), out.v.data());
  const double s = dom.inverse_scale();
  if (s != 1.0)
    for (double& v : out.v) v *= s;
  return out;
}

// Zero every mode above the alias-safe cutoffs (2/3 rule in each direction).
// Never increases a coefficient, hence never increases the L2 norm.
[[nodiscard]] inline SpectralField project_dealias(const Domain& dom, const SpectralField& f) {
  require_shape(dom, f);
  SpectralField out = f;
  for (int l = 0; l < dom.n2(); ++l)
    for (int j = 0; j < dom.n1(); ++j)
      for (int k = 0; k < dom.kx(); ++k)
        if (k > dom.kcut() || !dom.keep1(j) || !dom.keep2(l))
          out.c[dom.sidx(k, j, l)] = cplx(0.0, 0.0);
  return out;
}

// Repair the conjugate symmetry a real field must satisfy on the k = 0 and
// k = Nx/2 planes (transverse-mirror pairing for the fourier basis, plain
// realness for dirichlet).  Interior k columns carry their conjugates
// implicitly and need no repair.
inline void enforce_real_symmetry(const Domain& dom, SpectralField& f) {
  require_shape(dom, f);
  const int n1 = dom.n1(), n2 = dom.n2();
  for (int k : {0, dom.kx() - 1}) {
    if (dom.bc() == TransverseBc::dirichlet) {
      for (int l = 0; l < n2; ++l)
        for (int j = 0; j < n1; ++j) {
          cplx& z = f.c[dom.sidx(k, j, l)];
          z = cplx(z.real(), 0.0);
        }
    } else {
      for (int l = 0; l < n2; ++l)
        for (int j = 0; j < n1; ++j) {
          const int jm = j == 0 ? 0 : n1 - j;
          const int lm = l == 0 ? 0 : n2 - l;
          if (std::make_pair(j, l) > std::make_pair(jm, lm)) continue;
          cplx& a = f.c[dom.sidx(k, j, l)];
          cplx& b = f.c[dom.sidx(k, jm, lm)];
          if (j == jm && l == lm) {
            a = cplx(a.real(), 0.0);
          } else {
            const cplx avg = 0.5 * (a + std::conj(b));
            a = avg;
            b = std::conj(avg);
          }
        }
    }
  }
}

// Exact change of resolution within one basis family: zero-padding on refine,
// Galerkin truncation on coarsen.  Nyquist columns split/merge so that the
// synthesised function is preserved exactly (pad) or L2-projected (truncate).
[[nodiscard]] inline SpectralField resample(const Domain& src, const Domain& dst,
                              const SpectralField& f) {
  require_shape(src, f);
  if (src.d() != dst.d() || src.bc() != dst.bc())
    throw std::invalid_argument("resample: domains differ in d or transverse bc");
  if (!in_standard_basis(src, f))
    throw std::invalid_argument("resample: field not in the standard basis");

  // Per-axis mode maps: each destination slot collects weighted source slots.
  struct Term {
    int idx;
    cplx w;
  };
  const auto x_map = [&]() {
    std::vector<std::vector<Term>> m(dst.kx());
    const int nyq_s = src.kx() - 1, nyq_d = dst.kx() - 1;
    for (int k = 0; k < src.kx(); ++k) {
      if (k > nyq_d) continue;
      if (k == nyq_s && k < nyq_d)
        m[k].push_back({k, cplx(0.5, 0.0)});  // source Nyquist is the cos mode
      else
        m[k].push_back({k, cplx(1.0, 0.0)});  // new Nyquist: see post-pass below
    }
    return m;
  }();

  const auto transverse_map = [&](int ns, int nd, TransverseBc bc) {
    std::vector<std::vector<Term>> m(nd);
    if (bc == TransverseBc::dirichlet) {
      for (int j = 0; j < std::min(ns, nd); ++j) m[j].push_back({j, cplx(1.0, 0.0)});
      return m;
    }
    auto mode_of = [](int j, int n) { return j <= n / 2 ? j : j - n; };
    auto slot_of = [](int mm, int n) { return mm >= 0 ? mm : mm + n; };
    const bool s_nyq = ns % 2 == 0, d_nyq = nd % 2 == 0;
    for (int j = 0; j < ns; ++j) {
      const int mm = mode_of(j, ns);
      if (s_nyq && mm == ns / 2 && ns < nd) {
        // split the sampled cos mode into e^{+} and e^{-} halves
        m[slot_of(mm, nd)].push_back({j, cplx(0.5, 0.0)});
        m[slot_of(-mm, nd)].push_back({j, cplx(0.5, 0.0)});
        continue;
      }
      if (std::abs(mm) > nd / 2) continue;
      if (d_nyq && std::abs(mm) == nd / 2 && nd < ns)
        m[slot_of(nd / 2, nd)].push_back({j, cplx(1.0, 0.0)});  // merge onto cos
      else
        m[slot_of(mm, nd)].push_back({j, cplx(1.0, 0.0)});
    }
    return m;
  };
  const auto m1 = transverse_map(src.n1(), dst.n1(), src.bc());
  const auto m2 = src.d() == 2 ? transverse_map(src.n2(), dst.n2(), src.bc())
                               : std::vector<std::vector<Term>>{{{0, cplx(1.0, 0.0)}}};

  SpectralField out = make_spectral(dst);
  for (int l = 0; l < dst.n2(); ++l)
    for (int j = 0; j < dst.n1(); ++j)
      for (int k = 0; k < dst.kx(); ++k) {
        cplx acc(0.0, 0.0);
        for (const Term& tx : x_map[k])
          for (const Term& t1 : m1[j])
            for (const Term& t2 : m2[l])
              acc += tx.w * t1.w * t2.w * f.c[src.sidx(tx.idx, t1.idx, t2.idx)];
        out.c[dst.sidx(k, j, l)] = acc;
      }

  // Truncation in x promotes the previously interior mode pair k = +/-nyq to
  // the self-conjugate Nyquist plane; its stored cos-mode coefficients are
  //   dst(nyq, m) = src(nyq, m) + conj(src(nyq, -m)),
  // a conjugate mirror across transverse modes (entrywise 2*Re for the real
  // sine basis, where the mirror is the identity).
  if (dst.kx() < src.kx()) {
    const int kq = dst.kx() - 1;
    const auto mirror = [&](int j, int n) {
      return dst.bc() == TransverseBc::periodic ? (n - j) % n : j;
    };
    const size_t stride = static_cast<size_t>(dst.n1());
    std::vector<cplx> plane(stride * dst.n2());
    for (int l = 0; l < dst.n2(); ++l)
      for (int j = 0; j < dst.n1(); ++j)
        plane[j + stride * l] = out.c[dst.sidx(kq, j, l)];
    for (int l = 0; l < dst.n2(); ++l)
      for (int j = 0; j < dst.n1(); ++j) {
        const cplx mirrored =
            plane[mirror(j, dst.n1()) + stride * mirror(l, dst.n2())];
        out.c[dst.sidx(kq, j, l)] = plane[j + stride * l] + std::conj(mirrored);
      }
  }
  return out;
}

// ---- boundary traces ----

enum class Face { x0, x1, y_lo, y_hi, z_lo, z_hi };

// Trace of (d/d n)^order u on a face.  Layout: x faces hold (y [, z]) values
// as values[j + n1*l]; y faces hold (x [, z]) as values[i + nx*l]; z faces
// hold (x, y) as values[i + nx*j].
struct Trace {
  Face face;
  int order = 0;
  int na = 0, nb = 1;
  std::vector<double> values;
};

namespace detail {

// d^q/ds^q of the transverse basis element evaluated at a wall (s = 0 or pi).
inline cplx face_weight(TransverseBasis basis, double mu, bool at_pi, int q) {
  const double sgn = at_pi ? std::cos(mu * pi) : 1.0;  // (-1)^n for integer mu
  switch (basis) {
    case TransverseBasis::sine:
      switch (q) {
        case 0: case 2: return 0.0;
        case 1: return cplx(mu * sgn, 0.0);
        default: return cplx(-mu * mu * mu * sgn, 0.0);
      }
    case TransverseBasis::cosine:
      switch (q) {
        case 0: return cplx(sgn, 0.0);
        case 2: return cplx(-mu * mu * sgn, 0.0);
        default: return 0.0;
      }
    default: {  // fourier: e^{i mu s}, value 1 at both walls (period pi)
      cplx w(1.0, 0.0);
      for (int t = 0; t < q; ++t) w *= cplx(0.0, mu);
      return w;
    }
  }
}

}  // namespace detail

[[nodiscard]] inline Trace boundary_trace(const Domain& dom, const SpectralField& f, Face face,
                            int order) {
  require_shape(dom, f);
  if (order < 0 || order > 3)
    throw std::invalid_argument("boundary_trace: order must be in 0..3");
  if ((face == Face::z_lo || face == Face::z_hi) && dom.d() != 2)
    throw std::invalid_argument("boundary_trace: z faces require d = 2");

  Trace tr;
  tr.face = face;
  tr.order = order;
  const int kx = dom.kx(), n1 = dom.n1(), n2 = dom.n2(), nx = dom.nx();

  if (face == Face::x0 || face == Face::x1) {
    // e^{2 pi i k x} = 1 at both ends; odd-order Nyquist derivative is zero.
    tr.na = n1;
    tr.nb = n2;
    SpectralField slice = make_spectral(dom);  // transverse content in k = 0 plane
    for (int l = 0; l < n2; ++l)
      for (int j = 0; j < n1; ++j) {
        cplx acc(0.0, 0.0);
        for (int k = 0; k < kx; ++k) {
          cplx w(1.0, 0.0);
          for (int t = 0; t < order; ++t) w *= cplx(0.0, dom.xi()[k]);
          if (order % 2 == 1 && k == kx - 1) w = 0.0;
          const cplx term = w * f.at(dom, k, j, l);
          acc += k == 0 || k == kx - 1 ? term : 2.0 * term;
        }
        slice.at(dom, 0, j, l) = acc;
      }
    slice.basis1 = f.basis1;
    slice.basis2 = f.basis2;
    // Synthesise the transverse profile by direct summation.
    const auto b1 = detail::transverse_basis_matrix(dom.mu1(), dom.y1_grid(), f.basis1);
    const auto b2 = dom.d() == 2
                        ? detail::transverse_basis_matrix(dom.mu2(), dom.y2_grid(), f.basis2)
                        : std::vector<cplx>{cplx(1.0, 0.0)};
    tr.values.assign(std::size_t(n1) * n2, 0.0);
    const int g2 = dom.d() == 2 ? n2 : 1;
    for (int l = 0; l < n2; ++l)
      for (int j = 0; j < n1; ++j) {
        const cplx c = slice.at(dom, 0, j, l);
        for (int lq = 0; lq < g2; ++lq)
          for (int jq = 0; jq < n1; ++jq)
            tr.values[std::size_t(jq) + std::size_t(n1) * lq] +=
                (c * b1[std::size_t(j) * n1 + jq] * b2[std::size_t(l) * g2 + lq]).real();
      }
    return tr;
  }

  const bool axis1 = face == Face::y_lo || face == Face::y_hi;
  const bool at_pi = face == Face::y_hi || face == Face::z_hi;
  const auto& mu = axis1 ? dom.mu1() : dom.mu2();
  const TransverseBasis basis = axis1 ? f.basis1 : f.basis2;

  // Contract the wall axis, then synthesise the remaining axes directly.
  tr.na = nx;
  tr.nb = axis1 ? n2 : n1;
  tr.values.assign(std::size_t(nx) * tr.nb, 0.0);
  std::vector<cplx> xmat(std::size_t(kx) * nx);
  for (int k = 0; k < kx; ++k)
    for (int i = 0; i < nx; ++i)
      xmat[std::size_t(k) * nx + i] = std::polar(1.0, 2.0 * pi * k * dom.x_grid()[i]);
  const auto& mu_keep = axis1 ? dom.mu2() : dom.mu1();
  const auto& y_keep = axis1 ? dom.y2_grid() : dom.y1_grid();
  const TransverseBasis basis_keep = axis1 ? f.basis2 : f.basis1;
  const auto bk = dom.d() == 2 || !axis1
                      ? detail::transverse_basis_matrix(mu_keep, y_keep, basis_keep)
                      : std::vector<cplx>{cplx(1.0, 0.0)};
  const int gk = int(y_keep.size() > 0 ? y_keep.size() : 1);

  for (int l = 0; l < n2; ++l)
    for (int j = 0; j < n1; ++j) {
      const int wall_idx = axis1 ? j : l;
      const int keep_idx = axis1 ? l : j;
      const cplx w = detail::face_weight(basis, mu[wall_idx], at_pi, order);
      if (w == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < kx; ++k) {
        const cplx c = w * f.at(dom, k, j, l) * dom.mult(k);
        if (c == cplx(0.0, 0.0)) continue;
        for (int q = 0; q < gk; ++q) {
          const cplx cq = c * bk[std::size_t(keep_idx) * gk + q];
          for (int i = 0; i < nx; ++i)
            tr.values[std::size_t(i) + std::size_t(nx) * q] +=
                (cq * xmat[std::size_t(k) * nx + i]).real();
        }
      }
    }
  return tr;
}

}  // namespace zk
