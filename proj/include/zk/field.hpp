#pragma once

// Value types for fields on the channel.
//
// SpectralField holds complex coefficients on the half-spectrum layout
// (k fastest, then transverse axis 1, then axis 2); real-valued fields keep
// the k = 0 and k = Nx/2 planes conjugate-consistent.  Each transverse axis
// carries a basis tag: odd-order derivatives of dirichlet (sine) data land in
// the companion cosine family sitting on the same nodes, and such fields are
// flagged rather than silently mixed back into the sine span.
//
// PhysicalField holds real grid values, x fastest.

#include <complex>
#include <stdexcept>
#include <vector>

#include "zk/domain.hpp"

namespace zk {

enum class TransverseBasis { sine, cosine, fourier };

struct SpectralField {
  int kx = 0, n1 = 0, n2 = 1;
  TransverseBasis basis1 = TransverseBasis::sine;
  TransverseBasis basis2 = TransverseBasis::sine;
  std::vector<cplx> c;

  cplx& at(const Domain& dom, int k, int j, int l = 0) { return c[dom.sidx(k, j, l)]; }
  const cplx& at(const Domain& dom, int k, int j, int l = 0) const {
    return c[dom.sidx(k, j, l)];
  }
};

struct PhysicalField {
  int nx = 0, n1 = 0, n2 = 1;
  std::vector<double> v;

  double& at(const Domain& dom, int i, int j, int l = 0) { return v[dom.pidx(i, j, l)]; }
  const double& at(const Domain& dom, int i, int j, int l = 0) const {
    return v[dom.pidx(i, j, l)];
  }
};

inline TransverseBasis default_basis(TransverseBc bc) {
  return bc == TransverseBc::dirichlet ? TransverseBasis::sine : TransverseBasis::fourier;
}

inline SpectralField make_spectral(const Domain& dom) {
  SpectralField f;
  f.kx = dom.kx();
  f.n1 = dom.n1();
  f.n2 = dom.n2();
  f.basis1 = default_basis(dom.bc());
  f.basis2 = default_basis(dom.bc());
  f.c.assign(dom.spectral_size(), cplx(0.0, 0.0));
  return f;
}

inline PhysicalField make_physical(const Domain& dom) {
  PhysicalField f;
  f.nx = dom.nx();
  f.n1 = dom.n1();
  f.n2 = dom.n2();
  f.v.assign(dom.physical_size(), 0.0);
  return f;
}

inline void require_shape(const Domain& dom, const SpectralField& f) {
  if (f.kx != dom.kx() || f.n1 != dom.n1() || f.n2 != dom.n2() ||
      f.c.size() != dom.spectral_size())
    throw std::invalid_argument("field: spectral shape does not match domain");
}

inline void require_shape(const Domain& dom, const PhysicalField& f) {
  if (f.nx != dom.nx() || f.n1 != dom.n1() || f.n2 != dom.n2() ||
      f.v.size() != dom.physical_size())
    throw std::invalid_argument("field: physical shape does not match domain");
}

inline bool in_standard_basis(const Domain& dom, const SpectralField& f) {
  const TransverseBasis b = default_basis(dom.bc());
  return f.basis1 == b && f.basis2 == b;
}

}  // namespace zk
