#include "test_support.hpp"

using namespace zktest;

TEST_CASE("exact integration of the linear subproblem", "[timestepper]") {
  // amplitudes small enough that the quadratic term sits below roundoff of
  // the linear part, so each mode must follow e^{lambda t} exactly
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SolverParams p;
  p.epsilon = 1e-3;
  p.dt = 1e-2;
  p.t_final = 1.0;
  SpectralField u0 = make_spectral(dom);
  u0.c[dom.sidx(1, 0)] = cplx(1e-10, 0.0);
  u0.c[dom.sidx(2, 3)] = cplx(0.0, -2e-10);
  enforce_real_symmetry(dom, u0);

  const IntegrationResult r = integrate(dom, u0, p);
  const LinearSymbol sym = linear_symbol(dom, p);
  double err = 0.0;
  for (size_t i = 0; i < u0.c.size(); ++i) {
    const cplx exact = u0.c[i] * std::exp(sym.lambda(i) * p.t_final);
    err = std::max(err, std::abs(r.state.u.c[i] - exact));
  }
  REQUIRE(err < 1e-22);  // ~1e-12 relative to the 1e-10 amplitudes
}

TEST_CASE("small-amplitude solution tracks the linearized flow", "[timestepper]") {
  // max|u0| = 1e-3; over T = 1 the quadratic correction stays below 1e-6
  const Domain dom = build_domain({1, 64, 32, 0, TransverseBc::dirichlet});
  SolverParams p;
  p.epsilon = 1e-3;
  p.dt = 1e-3;
  p.t_final = 1.0;
  SpectralField u0 = single_mode(dom, 1, 0, 0, cplx(5e-4, 0.0));  // 1e-3 cos sin

  const IntegrationResult r = integrate(dom, u0, p, {.cadence = 1000});
  const LinearSymbol sym = linear_symbol(dom, p);
  SpectralField lin = u0;
  for (size_t i = 0; i < lin.c.size(); ++i)
    lin.c[i] *= std::exp(sym.lambda(i) * p.t_final);
  double diff2 = 0.0;
  for (int j = 0; j < dom.n1(); ++j)
    for (int k = 0; k < dom.kx(); ++k) {
      const size_t i = dom.sidx(k, j);
      diff2 += dom.mult(k) * std::norm(r.state.u.c[i] - lin.c[i]);
    }
  REQUIRE(std::sqrt(diff2 * dom.modal_weight()) < 1e-6);
}

TEST_CASE("manufactured catalog: linear regime", "[timestepper]") {
  const ManufacturedCase mc = manufactured_case("linear-k1n1");
  const Domain dom = build_domain(mc.domain);
  const IntegrationResult r =
      integrate(dom, mc.exact(dom, 0.0), mc.params, {.cadence = 1000});
  const SpectralField ref = mc.exact(dom, mc.params.t_final);
  REQUIRE(max_coeff_diff(r.state.u, ref) < 1e-12);
}

TEST_CASE("manufactured catalog: steady state is held", "[timestepper]") {
  ManufacturedCase mc = manufactured_case("steady");
  mc.params.t_final = 0.2;
  const Domain dom = build_domain(mc.domain);
  const IntegrationResult r =
      integrate(dom, mc.exact(dom, 0.0), mc.params, {.cadence = 50});
  const SpectralField ref = mc.exact(dom, 0.2);
  REQUIRE(max_coeff_diff(r.state.u, ref) < 1e-12);
}

TEST_CASE("manufactured catalog: fourth-order error decay", "[timestepper]") {
  ManufacturedCase mc = manufactured_case("nonlinear-moderate");
  mc.params.t_final = 0.5;
  const Domain dom = build_domain(mc.domain);
  const SpectralField u0 = mc.exact(dom, 0.0);
  const SpectralField ref = mc.exact(dom, 0.5);
  double errs[2];
  const double dts[2] = {2e-3, 1e-3};
  for (int q = 0; q < 2; ++q) {
    SolverParams p = mc.params;
    p.dt = dts[q];
    const IntegrationResult r = integrate(dom, u0, p, {.cadence = 1000});
    double d2 = 0.0;
    for (int j = 0; j < dom.n1(); ++j)
      for (int k = 0; k < dom.kx(); ++k) {
        const size_t i = dom.sidx(k, j);
        d2 += dom.mult(k) * std::norm(r.state.u.c[i] - ref.c[i]);
      }
    errs[q] = std::sqrt(d2 * dom.modal_weight());
  }
  const double ratio = errs[0] / errs[1];
  INFO("errors " << errs[0] << " " << errs[1] << " ratio " << ratio);
  REQUIRE(ratio > 8.0);
  REQUIRE(ratio < 32.0);
}

TEST_CASE("unknown manufactured id", "[timestepper]") {
  REQUIRE_THROWS_WITH(manufactured_case("warp-drive"),
                      Catch::Matchers::ContainsSubstring("unknown id 'warp-drive'"));
}

TEST_CASE("step watchdog flags blowup", "[timestepper]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SolverParams p;
  p.epsilon = 0.0;
  p.dt = 0.05;  // grossly exceeds the advective stability limit
  p.t_final = 10.0;
  const SpectralField u0 = single_mode(dom, 1, 0, 0, cplx(2e3, 0.0));
  REQUIRE_THROWS_AS(integrate(dom, u0, p), BlowupError);
}

TEST_CASE("integration input validation", "[timestepper]") {
  const Domain dom = build_domain({1, 16, 12, 0, TransverseBc::dirichlet});
  const SpectralField u0 = make_spectral(dom);
  SolverParams p;
  p.dt = 3e-3;
  p.t_final = 1.0;  // not an integer multiple
  REQUIRE_THROWS_WITH(integrate(dom, u0, p),
                      Catch::Matchers::ContainsSubstring("integer multiple"));
  p.t_final = 3e-1;
  REQUIRE_THROWS_WITH(integrate(dom, u0, p, {.cadence = 0}),
                      Catch::Matchers::ContainsSubstring("cadence"));
  SolverParams bad = p;
  bad.epsilon = -1.0;
  REQUIRE_THROWS_WITH(integrate(dom, u0, bad),
                      Catch::Matchers::ContainsSubstring("epsilon must be >= 0"));
}

TEST_CASE("record stream layout and balance bookkeeping", "[timestepper]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SolverParams p;
  p.epsilon = 1e-2;
  p.dt = 1e-3;
  p.t_final = 0.05;
  const SpectralField u0 = single_mode(dom, 1, 0, 0, cplx(0.02, 0.0));
  const IntegrationResult r = integrate(dom, u0, p, {.cadence = 10});
  REQUIRE(r.records.size() == 6);  // t = 0 and five interior ticks
  REQUIRE(r.records.front().t == 0.0);
  REQUIRE(r.records.back().t == Catch::Approx(0.05));
  // The dissipation integral is a trapezoid sum on the record ticks, so the
  // balance defect here is dominated by the (cadence * dt)^2 sampling error
  // of int [u]_2^2 dt, which at this damping rate sits near 2e-3.
  double worst = 0.0;
  for (size_t q = 1; q < r.records.size(); ++q) {
    REQUIRE(r.records[q].diss_integral > r.records[q - 1].diss_integral);
    worst = std::max(worst, std::fabs(r.records[q].balance_residual));
  }
  REQUIRE(worst < 1e-2);

  // halving the tick spacing must shrink the sampling error about 4x
  SolverParams ph = p;
  ph.dt = 5e-4;
  const IntegrationResult rh = integrate(dom, u0, ph, {.cadence = 10});
  double worst_h = 0.0;
  for (const DiagnosticsRecord& rec : rh.records)
    worst_h = std::max(worst_h, std::fabs(rec.balance_residual));
  REQUIRE(worst_h < 0.35 * worst);
}

TEST_CASE("cubic recording can be switched off", "[timestepper]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SolverParams p;
  p.epsilon = 1e-2;
  p.dt = 1e-3;
  p.t_final = 0.01;
  const SpectralField u0 = single_mode(dom, 1, 0, 0, cplx(0.02, 0.0));
  const IntegrationResult r =
      integrate(dom, u0, p, {.cadence = 5, .record_cubic = false});
  for (const DiagnosticsRecord& rec : r.records) {
    REQUIRE(std::isnan(rec.cubic));
    REQUIRE(std::isnan(rec.e1));
    REQUIRE(std::isfinite(rec.l2));
    REQUIRE(std::isfinite(rec.balance_residual));
  }
}

TEST_CASE("bitwise determinism across repeated runs", "[timestepper]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SolverParams p;
  p.epsilon = 1e-3;
  p.dt = 1e-3;
  p.t_final = 0.02;
  std::mt19937_64 rng(31);
  const SpectralField u0 = random_field(dom, rng);
  const IntegrationResult a = integrate(dom, u0, p, {.cadence = 4});
  const IntegrationResult b = integrate(dom, u0, p, {.cadence = 4});
  REQUIRE(max_coeff_diff(a.state.u, b.state.u) == 0.0);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t q = 0; q < a.records.size(); ++q)
    REQUIRE(to_csv_row(a.records[q]) == to_csv_row(b.records[q]));
}

TEST_CASE("mean evolution under constant x-mean forcing", "[timestepper]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SolverParams p;
  p.epsilon = 0.0;
  p.dt = 1e-3;
  p.t_final = 0.2;
  p.forcing.kind = ForcingSpec::Kind::modal;
  p.forcing.modes.push_back({.k = 0, .n = 2, .m = 1, .amp = 0.05, .omega = 0.0});
  const SpectralField u0 = single_mode(dom, 1, 0, 0, cplx(0.01, 0.0));
  const IntegrationResult r = integrate(dom, u0, p, {.cadence = 20});
  for (const DiagnosticsRecord& rec : r.records)
    REQUIRE(rec.mean_residual < 1e-13);
  // two different step sizes leave the x-mean bitwise-close (exact linear law)
  SolverParams p2 = p;
  p2.dt = 5e-4;
  const IntegrationResult r2 = integrate(dom, u0, p2, {.cadence = 40});
  const XMean m1 = x_mean(dom, r.state.u);
  const XMean m2 = x_mean(dom, r2.state.u);
  double dm = 0.0;
  for (size_t q = 0; q < m1.coeff.size(); ++q)
    dm = std::max(dm, std::abs(m1.coeff[q] - m2.coeff[q]));
  REQUIRE(dm < 1e-14);
}

TEST_CASE("advective step-size heuristic", "[timestepper]") {
  const Domain dom = build_domain({1, 64, 32, 0, TransverseBc::dirichlet});
  const SpectralField zero = make_spectral(dom);
  const double cap = stability_dt(dom, zero);
  REQUIRE(cap == Catch::Approx(0.1));  // quiescent field: documented ceiling

  const SpectralField u = single_mode(dom, 1, 0, 0, cplx(0.5, 0.0));  // max 1
  const double dt1 = stability_dt(dom, u);
  const SpectralField u2 = single_mode(dom, 1, 0, 0, cplx(1.0, 0.0));  // max 2
  REQUIRE(stability_dt(dom, u2) == Catch::Approx(dt1 / 2).epsilon(1e-10));

  const Domain wide = build_domain({1, 128, 32, 0, TransverseBc::dirichlet});
  const SpectralField uw = single_mode(wide, 1, 0, 0, cplx(0.5, 0.0));
  REQUIRE(stability_dt(wide, uw) == Catch::Approx(dt1 / 2).epsilon(1e-10));
}
