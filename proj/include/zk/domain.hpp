#pragma once

// Spectral domain for the channel M = (0,1)_x x (-pi/2, pi/2)^d, d = 1 or 2.
//
// x is 1-periodic and carried by the complex Fourier basis e^{2*pi*i*k*x}.
// Real fields are stored on the half-spectrum k = 0..Nx/2 (conjugate part
// implicit); the k = Nx/2 column is the Nyquist mode, whose coefficient must
// stay real and whose odd-order x-derivatives are defined as zero.
//
// Each transverse direction is parametrised by s = y + pi/2 in (0, pi) and
// carries one of two bases:
//   dirichlet:  phi_n(s) = sin(n s), n = 1..Nt.  phi_n and phi_n'' vanish at
//               both walls, so homogeneous Dirichlet data and the Delta-trace
//               matching hold exactly for every member of the span.
//               Collocation nodes are the interior points s_j = (j+1)*pi/(Nt+1).
//   periodic:   psi_m(s) = e^{2 i m s} (period pi, even integer wavenumber
//               mu = 2m), FFT index order m_j = j for j <= Nt/2, j - Nt above.
//               Nodes s_j = j*pi/Nt.
//
// Normalisation (used verbatim by every transform below):
//   forward  = orthogonal-projection coefficients of the basis expansion,
//   inverse  = plain synthesis.  Round trips are identities to roundoff and
//   the grid quadrature sum(u*v)*dx*ds equals the modal form
//   sum_k mult_k * wt * Re(u_hat conj(v_hat)), with mult_k = 1 for
//   k in {0, Nx/2} and 2 otherwise, and wt = prod(pi/2 dirichlet | pi periodic).
//
// Transforms are FFTW-backed (r2c/c2r in x, RODFT00 for dirichlet axes,
// strided complex DFT for periodic axes).  Plans are created once per Domain
// with FFTW_ESTIMATE | FFTW_UNALIGNED, so plan choice is deterministic and
// execution through the new-array API is safe on caller-local buffers from
// concurrent threads.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

enum class TransverseBc { dirichlet, periodic };

struct DomainSpec {
  int d = 1;        // number of transverse directions (1 or 2)
  int nx = 0;       // x resolution, even, >= 8
  int nt1 = 0;      // first transverse resolution, >= 8
  int nt2 = 0;      // second transverse resolution, >= 8 when d == 2
  TransverseBc bc = TransverseBc::dirichlet;

  bool operator==(const DomainSpec& o) const {
    return d == o.d && nx == o.nx && nt1 == o.nt1 &&
           (d == 1 || nt2 == o.nt2) && bc == o.bc;
  }
};

inline const char* to_string(TransverseBc bc) {
  return bc == TransverseBc::dirichlet ? "dirichlet" : "periodic";
}

namespace detail {

// FFTW's planner is not thread-safe; executions through the new-array API are.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanSet {
  fftw_plan x_fwd = nullptr;   // real (nx) -> complex (nx/2+1), many
  fftw_plan x_inv = nullptr;   // complex -> real, many (destroys input)
  fftw_plan t1 = nullptr;      // dirichlet axis 1: RODFT00, in-place, re+im
  fftw_plan t2 = nullptr;      // dirichlet axis 2
  fftw_plan p1_fwd = nullptr;  // periodic axis 1 DFT, in-place
  fftw_plan p1_inv = nullptr;
  fftw_plan p2_fwd = nullptr;
  fftw_plan p2_inv = nullptr;

  ~PlanSet() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (fftw_plan p : {x_fwd, x_inv, t1, t2, p1_fwd, p1_inv, p2_fwd, p2_inv})
      if (p) fftw_destroy_plan(p);
  }
};

}  // namespace detail

class Domain {
 public:
  explicit Domain(const DomainSpec& spec) : spec_(spec) {
    validate(spec);
    kx_ = spec.nx / 2 + 1;
    n1_ = spec.nt1;
    n2_ = spec.d == 2 ? spec.nt2 : 1;

    xi_.resize(kx_);
    for (int k = 0; k < kx_; ++k) xi_[k] = 2.0 * pi * k;

    mu1_ = transverse_wavenumbers(n1_, spec.bc);
    mu2_ = spec.d == 2 ? transverse_wavenumbers(n2_, spec.bc)
                       : std::vector<double>{0.0};

    x_.resize(spec.nx);
    for (int i = 0; i < spec.nx; ++i) x_[i] = double(i) / spec.nx;
    y1_ = transverse_grid(n1_, spec.bc);
    y2_ = spec.d == 2 ? transverse_grid(n2_, spec.bc) : std::vector<double>{};

    const double ds1 = transverse_spacing(n1_, spec.bc);
    const double ds2 = spec.d == 2 ? transverse_spacing(n2_, spec.bc) : 1.0;
    quad_weight_ = ds1 * ds2 / spec.nx;
    const double w1 = spec.bc == TransverseBc::dirichlet ? pi / 2 : pi;
    modal_weight_ = spec.d == 2 ? w1 * w1 : w1;

    // 2/3-style cutoffs: quadratic products of retained modes fold back, after
    // grid sampling, only onto discarded modes.  x: 3*kcut < Nx.  dirichlet:
    // the odd extension lives on a 2(Nt+1)-point circle, so 3*ncut < 2(Nt+1).
    // periodic transverse: 3*mcut < Nt (in the integer index m, mu = 2m).
    kcut_ = (spec.nx - 1) / 3;
    ncut1_ = cutoff(n1_, spec.bc);
    ncut2_ = spec.d == 2 ? cutoff(n2_, spec.bc) : 0;

    make_plans();
  }

  Domain(const Domain&) = delete;
  Domain& operator=(const Domain&) = delete;
  Domain(Domain&&) = default;
  Domain& operator=(Domain&&) = default;

  const DomainSpec& spec() const { return spec_; }
  int d() const { return spec_.d; }
  int nx() const { return spec_.nx; }
  int kx() const { return kx_; }     // stored x modes, k = 0..nx/2
  int n1() const { return n1_; }     // stored modes along transverse axis 1
  int n2() const { return n2_; }     // stored modes along transverse axis 2 (1 if d==1)
  TransverseBc bc() const { return spec_.bc; }

  std::size_t spectral_size() const { return std::size_t(kx_) * n1_ * n2_; }
  std::size_t physical_size() const { return std::size_t(spec_.nx) * n1_ * n2_; }
  std::size_t sidx(int k, int j, int l = 0) const {
    return std::size_t(k) + std::size_t(kx_) * (std::size_t(j) + std::size_t(n1_) * l);
  }
  std::size_t pidx(int i, int j, int l = 0) const {
    return std::size_t(i) + std::size_t(spec_.nx) * (std::size_t(j) + std::size_t(n1_) * l);
  }

  // xi_k = 2*pi*k; mu = n (dirichlet) or 2m (periodic); mu2 = {0} when d==1.
  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& mu1() const { return mu1_; }
  const std::vector<double>& mu2() const { return mu2_; }

  const std::vector<double>& x_grid() const { return x_; }
  const std::vector<double>& y1_grid() const { return y1_; }
  const std::vector<double>& y2_grid() const { return y2_; }

  double quad_weight() const { return quad_weight_; }    // dx * ds1 [* ds2]
  double modal_weight() const { return modal_weight_; }  // transverse L2 weight
  double mult(int k) const { return (k == 0 || k == kx_ - 1) ? 1.0 : 2.0; }

  int kcut() const { return kcut_; }
  int ncut1() const { return ncut1_; }
  int ncut2() const { return ncut2_; }
  // Dealias survival per stored transverse index.
  bool keep1(int j) const { return keep_index(j, n1_, ncut1_, spec_.bc); }
  bool keep2(int l) const {
    return spec_.d == 1 || keep_index(l, n2_, ncut2_, spec_.bc);
  }

  // ---- low-level transform passes (used by transforms.hpp) ----

  // Real grid -> complex half-spectrum; both buffers caller-owned.
  void exec_x_forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(plans_->x_fwd, const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
  }
  // Complex half-spectrum -> real grid; destroys `in`.
  void exec_x_inverse(cplx* in, double* out) const {
    fftw_execute_dft_c2r(plans_->x_inv, reinterpret_cast<fftw_complex*>(in), out);
  }
  // In-place transverse pass over `buf` (spectral layout) for axis 1 or 2.
  void exec_transverse(cplx* buf, int axis, bool forward) const {
    if (spec_.bc == TransverseBc::dirichlet) {
      fftw_plan p = axis == 1 ? plans_->t1 : plans_->t2;
      fftw_execute_r2r(p, reinterpret_cast<double*>(buf),
                       reinterpret_cast<double*>(buf));
    } else {
      fftw_plan p = axis == 1 ? (forward ? plans_->p1_fwd : plans_->p1_inv)
                              : (forward ? plans_->p2_fwd : plans_->p2_inv);
      fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf),
                       reinterpret_cast<fftw_complex*>(buf));
    }
  }

  double forward_scale() const {
    double s = 1.0 / spec_.nx;
    s *= transverse_forward_scale(n1_, spec_.bc);
    if (spec_.d == 2) s *= transverse_forward_scale(n2_, spec_.bc);
    return s;
  }
  double inverse_scale() const {
    double s = 1.0;
    if (spec_.bc == TransverseBc::dirichlet) {
      s *= 0.5;
      if (spec_.d == 2) s *= 0.5;
    }
    return s;
  }

  static void validate(const DomainSpec& spec) {
    if (spec.d != 1 && spec.d != 2)
      throw std::invalid_argument("domain: d must be 1 or 2");
    if (spec.nx < 8 || spec.nt1 < 8 || (spec.d == 2 && spec.nt2 < 8))
      throw std::invalid_argument("domain: resolutions must be >= 8 per direction");
    if (spec.nx % 2 != 0)
      throw std::invalid_argument("domain: nx must be even");
  }

 private:
  static std::vector<double> transverse_wavenumbers(int n, TransverseBc bc) {
    std::vector<double> mu(n);
    if (bc == TransverseBc::dirichlet) {
      for (int j = 0; j < n; ++j) mu[j] = j + 1;
    } else {
      for (int j = 0; j < n; ++j) mu[j] = 2.0 * (j <= n / 2 ? j : j - n);
    }
    return mu;
  }
  static std::vector<double> transverse_grid(int n, TransverseBc bc) {
    std::vector<double> y(n);
    if (bc == TransverseBc::dirichlet) {
      for (int j = 0; j < n; ++j) y[j] = -pi / 2 + pi * (j + 1) / (n + 1);
    } else {
      for (int j = 0; j < n; ++j) y[j] = -pi / 2 + pi * j / n;
    }
    return y;
  }
  static double transverse_spacing(int n, TransverseBc bc) {
    return bc == TransverseBc::dirichlet ? pi / (n + 1) : pi / n;
  }
  static double transverse_forward_scale(int n, TransverseBc bc) {
    return bc == TransverseBc::dirichlet ? 1.0 / (n + 1) : 1.0 / n;
  }
  static int cutoff(int n, TransverseBc bc) {
    if (bc == TransverseBc::dirichlet) return (2 * (n + 1) - 1) / 3;
    return (n - 1) / 3;
  }
  static bool keep_index(int j, int n, int cut, TransverseBc bc) {
    if (bc == TransverseBc::dirichlet) return j + 1 <= cut;
    const int m = j <= n / 2 ? j : j - n;
    return std::abs(m) <= cut;
  }

  void make_plans() {
    plans_ = std::make_unique<detail::PlanSet>();
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int howmany = n1_ * n2_;

    std::vector<double> rbuf(physical_size());
    std::vector<cplx> cbuf(spectral_size());
    auto* cb = reinterpret_cast<fftw_complex*>(cbuf.data());

    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    {
      int n[1] = {spec_.nx};
      plans_->x_fwd = fftw_plan_many_dft_r2c(1, n, howmany, rbuf.data(), nullptr, 1,
                                             spec_.nx, cb, nullptr, 1, kx_, flags);
      plans_->x_inv = fftw_plan_many_dft_c2r(1, n, howmany, cb, nullptr, 1, kx_,
                                             rbuf.data(), nullptr, 1, spec_.nx, flags);
    }
    auto* db = reinterpret_cast<double*>(cbuf.data());
    if (spec_.bc == TransverseBc::dirichlet) {
      // Axis pass over the complex buffer viewed as doubles: transform stride
      // spans the axis, loop dims cover {k, other transverse, re/im}.
      fftw_r2r_kind kind[1] = {FFTW_RODFT00};
      {
        fftw_iodim64 dims[1] = {{n1_, std::int64_t(2) * kx_, std::int64_t(2) * kx_}};
        fftw_iodim64 loop[3] = {{kx_, 2, 2},
                                {n2_, std::int64_t(2) * kx_ * n1_, std::int64_t(2) * kx_ * n1_},
                                {2, 1, 1}};
        plans_->t1 = fftw_plan_guru64_r2r(1, dims, 3, loop, db, db, kind, flags);
      }
      if (spec_.d == 2) {
        fftw_iodim64 dims[1] = {{n2_, std::int64_t(2) * kx_ * n1_, std::int64_t(2) * kx_ * n1_}};
        fftw_iodim64 loop[3] = {{kx_, 2, 2}, {n1_, std::int64_t(2) * kx_, std::int64_t(2) * kx_}, {2, 1, 1}};
        plans_->t2 = fftw_plan_guru64_r2r(1, dims, 3, loop, db, db, kind, flags);
      }
    } else {
      {
        fftw_iodim64 dims[1] = {{n1_, kx_, kx_}};
        fftw_iodim64 loop[2] = {{kx_, 1, 1}, {n2_, std::int64_t(kx_) * n1_, std::int64_t(kx_) * n1_}};
        plans_->p1_fwd = fftw_plan_guru64_dft(1, dims, 2, loop, cb, cb, FFTW_FORWARD, flags);
        plans_->p1_inv = fftw_plan_guru64_dft(1, dims, 2, loop, cb, cb, FFTW_BACKWARD, flags);
      }
      if (spec_.d == 2) {
        fftw_iodim64 dims[1] = {{n2_, std::int64_t(kx_) * n1_, std::int64_t(kx_) * n1_}};
        fftw_iodim64 loop[2] = {{kx_, 1, 1}, {n1_, kx_, kx_}};
        plans_->p2_fwd = fftw_plan_guru64_dft(1, dims, 2, loop, cb, cb, FFTW_FORWARD, flags);
        plans_->p2_inv = fftw_plan_guru64_dft(1, dims, 2, loop, cb, cb, FFTW_BACKWARD, flags);
      }
    }
    for (fftw_plan p : {plans_->x_fwd, plans_->x_inv})
      if (!p) throw std::runtime_error("domain: FFTW plan creation failed");
  }

  DomainSpec spec_;
  int kx_ = 0, n1_ = 0, n2_ = 1;
  int kcut_ = 0, ncut1_ = 0, ncut2_ = 0;
  std::vector<double> xi_, mu1_, mu2_;
  std::vector<double> x_, y1_, y2_;
  double quad_weight_ = 0.0, modal_weight_ = 0.0;
  std::unique_ptr<detail::PlanSet> plans_;
};

inline Domain build_domain(const DomainSpec& spec) { return Domain(spec); }

// Storage slot of a transverse mode number along axis 1 or 2: the sine basis
// indexes n >= 1 as n - 1; the periodic basis takes signed m, |m| <= Nt/2,
// in FFT order (negative modes wrap).
[[nodiscard]] inline int transverse_index(const Domain& dom, int mode,
                                          int axis) {
  const int n = axis == 1 ? dom.n1() : dom.n2();
  if (dom.bc() == TransverseBc::dirichlet) {
    if (mode < 1 || mode > n)
      throw std::invalid_argument("domain: transverse mode out of range");
    return mode - 1;
  }
  if (std::abs(mode) > n / 2)
    throw std::invalid_argument("domain: transverse mode out of range");
  return mode >= 0 ? mode : mode + n;
}

}  // namespace zk
