#pragma once
// Forcing evaluation.  Modal forcing drives a fixed set of real basis
// directions with amplitude amp*cos(omega*t); the driven coefficients are
// prepared once with the real-field symmetry baked in, so evaluation is a
// deterministic scatter.  Manufactured forcing assembles the residual
// f = du*/dt - lambda u* + N(u*) of a catalogued exact solution.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zk/manufactured.hpp"

namespace zk {

class ForcingEvaluator {
 public:
  ForcingEvaluator() = default;  // zero forcing

  ForcingEvaluator(const Domain& dom, const ForcingSpec& spec,
                   const LinearSymbol& sym, bool dealias)
      : kind_(spec.kind), dealias_(dealias) {
    if (kind_ == ForcingSpec::Kind::zero) return;
    if (kind_ == ForcingSpec::Kind::manufactured) {
      mc_ = manufactured_case(spec.manufactured_id);
      if (!(mc_.domain == DomainSpec{dom.d(), dom.nx(), dom.n1(),
                                     dom.d() == 2 ? dom.n2() : 0, dom.bc()}))
        throw std::invalid_argument(
            "forcing: manufactured case expects a different domain");
      sym_ = sym;
      return;
    }
    for (const ForcingSpec::Mode& q : spec.modes) prepare_mode(dom, q);
  }

  [[nodiscard]] bool is_zero() const { return kind_ == ForcingSpec::Kind::zero; }

  [[nodiscard]] SpectralField operator()(const Domain& dom, double t) const {
    SpectralField f = make_spectral(dom);
    if (kind_ == ForcingSpec::Kind::modal) {
      for (const Entry& e : entries_) f.c[e.idx] += e.w * std::cos(e.omega * t);
    } else if (kind_ == ForcingSpec::Kind::manufactured) {
      const SpectralField us = mc_.exact(dom, t);
      const SpectralField ds = mc_.exact_dt(dom, t);
      const SpectralField nl = nonlinear_term(dom, us, dealias_);
      for (size_t i = 0; i < f.c.size(); ++i)
        f.c[i] = ds.c[i] - sym_.lambda(i) * us.c[i] + nl.c[i];
    }
    return f;
  }

  // Analytic k = 0 column of int_0^t f ds, laid out as [j + n1*l]: the
  // driving term of the x-mean law d(bar u)/dt = bar f.  Zero for mean-free
  // forcing (manufactured profiles have k >= 1 throughout).
  [[nodiscard]] std::vector<cplx> mean_integral(const Domain& dom,
                                                double t) const {
    std::vector<cplx> r(static_cast<size_t>(dom.n1()) * dom.n2());
    if (kind_ != ForcingSpec::Kind::modal) return r;
    for (const Entry& e : entries_) {
      if (e.k != 0) continue;
      r[static_cast<size_t>(e.tj) + static_cast<size_t>(dom.n1()) * e.tl] +=
          e.w * (e.omega == 0.0 ? t : std::sin(e.omega * t) / e.omega);
    }
    return r;
  }

 private:
  struct Entry {
    size_t idx = 0;
    int k = 0, tj = 0, tl = 0;
    double w = 0.0;
    double omega = 0.0;
  };

  void prepare_mode(const Domain& dom, const ForcingSpec::Mode& q) {
    if (q.k < 0 || q.k >= dom.kx())
      throw std::invalid_argument("forcing: mode k out of range");
    const auto slot = [&](int mode, int n) {
      if (dom.bc() == TransverseBc::dirichlet) {
        if (mode < 1 || mode > n)
          throw std::invalid_argument("forcing: transverse mode out of range");
        return std::pair<int, int>{mode - 1, mode - 1};  // slot, mirror
      }
      if (std::abs(mode) > n / 2)
        throw std::invalid_argument("forcing: transverse mode out of range");
      const int s = mode >= 0 ? mode : mode + n;
      const int ms = mode <= 0 ? -mode : n - mode;
      return std::pair<int, int>{s, ms};
    };
    const auto [j, mj] = slot(q.n, dom.n1());
    const auto [l, ml] = dom.d() == 2 ? slot(q.m, dom.n2())
                                      : std::pair<int, int>{0, 0};
    // Self-conjugate x planes carry the implicit conjugate mode: split the
    // weight across the transverse mirror so the assembled field is real.
    if (q.k == 0 || q.k == dom.kx() - 1) {
      entries_.push_back({dom.sidx(q.k, j, l), q.k, j, l, 0.5 * q.amp, q.omega});
      entries_.push_back(
          {dom.sidx(q.k, mj, ml), q.k, mj, ml, 0.5 * q.amp, q.omega});
    } else {
      entries_.push_back({dom.sidx(q.k, j, l), q.k, j, l, q.amp, q.omega});
    }
  }

  ForcingSpec::Kind kind_ = ForcingSpec::Kind::zero;
  std::vector<Entry> entries_;
  ManufacturedCase mc_;
  LinearSymbol sym_;
  bool dealias_ = true;
};

}  // namespace zk
