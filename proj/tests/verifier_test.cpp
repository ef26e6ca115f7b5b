#include <mutex>

#include "test_support.hpp"

using namespace zktest;

TEST_CASE("seeded field generator", "[verifier]") {
  const Domain dom = build_domain({1, 32, 24, 0, TransverseBc::dirichlet});
  SECTION("is deterministic per seed") {
    std::mt19937_64 a(99), b(99), c(100);
    const SpectralField ua = random_field(dom, a);
    const SpectralField ub = random_field(dom, b);
    const SpectralField uc = random_field(dom, c);
    REQUIRE(max_coeff_diff(ua, ub) == 0.0);
    REQUIRE(max_coeff_diff(ua, uc) > 0.0);
  }
  SECTION("honors the mean-free and dealias restrictions") {
    std::mt19937_64 rng(7);
    const SpectralField u = random_field(dom, rng, {.x_mean_free = true});
    for (int j = 0; j < dom.n1(); ++j) {
      REQUIRE(std::abs(u.c[dom.sidx(0, j)]) == 0.0);
      for (int k = dom.kcut() + 1; k < dom.kx(); ++k)
        REQUIRE(std::abs(u.c[dom.sidx(k, j)]) == 0.0);
    }
  }
}

TEST_CASE("static identity checks on random fields", "[verifier]") {
  const Domain dom = build_domain({1, 64, 32, 0, TransverseBc::dirichlet});
  std::mt19937_64 rng(42);
  for (int s = 0; s < 25; ++s) {
    const SpectralField u = random_field(dom, rng);
    const IdentityReport skew = check_skew(dom, u, 1.0);
    const IdentityReport neutral = check_nonlinear_neutral(dom, u);
    CHECK(skew.pass);
    CHECK(skew.residual < 1e-12);
    CHECK(neutral.pass);
    CHECK(neutral.residual < 1e-12);
  }
}

TEST_CASE("integration-by-parts identity via oversampled quadrature",
          "[verifier]") {
  const Domain dom = build_domain({1, 64, 32, 0, TransverseBc::dirichlet});
  std::mt19937_64 rng(43);
  for (int s = 0; s < 8; ++s) {
    const SpectralField u = random_field(dom, rng);
    const IdentityReport r = check_52_identity(dom, u);
    CHECK(r.pass);
    CHECK(r.residual < 1e-12);
    CHECK(r.lhs == Catch::Approx(r.rhs).margin(1e-10 * r.scale));
  }
}

TEST_CASE("modal inequality suite", "[verifier]") {
  const Domain dom = build_domain({1, 64, 32, 0, TransverseBc::dirichlet});
  SECTION("random sampling stays below the certified bounds") {
    const PoincareReport rep = check_poincare_suite(dom, 150, 11);
    REQUIRE(rep.pass);
    REQUIRE(rep.max_ratio1 <= 1.0 / (2 * pi) + 1e-12);
    REQUIRE(rep.max_ratio2 <= 0.5 + 1e-12);  // AM-GM gives the sharper 1/2
    REQUIRE(rep.max_ratio3 <= rep.ratio3_ceiling + 1e-12);
  }
  SECTION("sample floor is enforced") {
    REQUIRE_THROWS_WITH(check_poincare_suite(dom, 10, 1),
                        Catch::Matchers::ContainsSubstring("sample_count"));
  }
  SECTION("extremal fields attain the constants") {
    // sin(2 pi x) sin(s): |u_x| / |u_xx| = 1/(2 pi) exactly
    const SpectralField e1 = single_mode(dom, 1, 0, 0, cplx(0.0, -0.5));
    const double ux = zk::detail::weighted_sq(
        dom, e1, [](double x, double, double) { return x * x; });
    const double uxx = zk::detail::weighted_sq(
        dom, e1, [](double x, double, double) { return x * x * x * x; });
    REQUIRE(std::sqrt(ux / uxx) == Catch::Approx(1.0 / (2 * pi)).epsilon(1e-14));

    // cos(2 pi x) cos(y): |u_xy|^2 / [u]_2^2 = (2 pi)^2 / ((2 pi)^4 + 1)
    const SpectralField e2 = single_mode(dom, 1, 0, 0, cplx(0.5, 0.0));
    const double uxy = zk::detail::weighted_sq(
        dom, e2, [](double x, double a, double) { return x * x * a * a; });
    const double x2 = 4 * pi * pi;
    REQUIRE(uxy / semi2_sq(dom, e2) ==
            Catch::Approx(x2 / (x2 * x2 + 1)).epsilon(1e-13));
  }
}

TEST_CASE("trajectory certificates", "[verifier]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SpectralField u0 = make_spectral(dom);
  u0.c[dom.sidx(1, 0)] = cplx(0.02, 0.0);
  u0.c[dom.sidx(1, 1)] = cplx(0.0, 0.01);
  enforce_real_symmetry(dom, u0);

  SECTION("energy conservation at eps = 0") {
    SolverParams p;
    p.epsilon = 0.0;
    p.dt = 1e-3;
    p.t_final = 0.2;
    const IntegrationResult r = integrate(dom, u0, p, {.cadence = 20});
    const IdentityReport e1 = check_e1_conservation(r.records);
    REQUIRE(e1.pass);
    REQUIRE(e1.residual < 1e-10);
  }
  SECTION("dissipation balance and envelope at eps > 0") {
    SolverParams p;
    p.epsilon = 1e-2;
    p.dt = 2e-4;
    p.t_final = 0.1;
    const IntegrationResult r = integrate(dom, u0, p, {.cadence = 1});
    const ForcingEvaluator none;
    const IdentityReport bal = check_l2_balance(dom, r.records, none, 1e-5);
    REQUIRE(bal.pass);
    const IdentityReport env = check_gronwall_envelope(dom, r.records, none);
    REQUIRE(env.pass);
    const IdentityReport mean = check_mean_law(r.records);
    REQUIRE(mean.pass);
    REQUIRE(mean.lhs == 0.0);  // mean-free IC, no forcing: exact
  }
  SECTION("forced envelope includes the source budget") {
    SolverParams p;
    p.epsilon = 1e-2;
    p.dt = 2e-4;
    p.t_final = 0.1;
    p.forcing.kind = ForcingSpec::Kind::modal;
    p.forcing.modes.push_back({.k = 2, .n = 1, .m = 1, .amp = 0.3, .omega = 0.0});
    const IntegrationResult r = integrate(dom, u0, p, {.cadence = 1});
    const LinearSymbol sym = linear_symbol(dom, p);
    const ForcingEvaluator fe(dom, p.forcing, sym, p.dealias);
    REQUIRE(check_gronwall_envelope(dom, r.records, fe).pass);
    REQUIRE(check_l2_balance(dom, r.records, fe, 1e-5).pass);
  }
}

TEST_CASE("regularization sweep report", "[verifier]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  SpectralField u0 = make_spectral(dom);
  u0.c[dom.sidx(1, 0)] = cplx(0.05, 0.0);
  u0.c[dom.sidx(1, 1)] = cplx(0.0, 0.02);
  enforce_real_symmetry(dom, u0);
  SolverParams p;
  p.dt = 1e-3;
  p.t_final = 0.08;

  SECTION("members, bounds, and gap table") {
    std::mutex mu;
    std::vector<size_t> seen;
    const SweepReport rep =
        run_eps_sweep(dom, u0, p, {1e-2, 5e-3, 2.5e-3}, 2,
                      [&](size_t m, const SimState&, const DiagnosticsRecord&) {
                        const std::lock_guard<std::mutex> lock(mu);
                        seen.push_back(m);
                      });
    REQUIRE(rep.complete);
    REQUIRE(rep.table.size() == 3);
    REQUIRE(rep.pairwise_gaps.size() == 2);
    REQUIRE(rep.pairwise_gaps[0] > rep.pairwise_gaps[1]);
    for (const SweepMember& m : rep.table) {
      REQUIRE_FALSE(m.aborted);
      REQUIRE(m.sup_u_sq > 0.0);
      REQUIRE(m.eps_int_semi2 > 0.0);
      REQUIRE(m.eps_int_semi2 <= 0.5 * l2_sq(dom, u0) * (1 + 1e-9));
      REQUIRE(m.eps_int_grad_semi2 > 0.0);
    }
    REQUIRE(seen.size() == 3 * 41u);  // 40 steps at cadence 2 plus t = 0
  }
  SECTION("eps list must decrease") {
    REQUIRE_THROWS_WITH(run_eps_sweep(dom, u0, p, {1e-3, 1e-2}),
                        Catch::Matchers::ContainsSubstring("strictly decreasing"));
  }
  SECTION("a diverging member yields a partial report") {
    SpectralField big = make_spectral(dom);
    big.c[dom.sidx(1, 0)] = cplx(3e3, 0.0);
    enforce_real_symmetry(dom, big);
    SolverParams q = p;
    q.dt = 5e-2;
    q.t_final = 1.0;
    const SweepReport rep = run_eps_sweep(dom, big, q, {1e-2, 5e-3});
    REQUIRE_FALSE(rep.complete);
    REQUIRE(rep.pairwise_gaps.empty());
    REQUIRE((rep.table[0].aborted && rep.table[1].aborted));
  }
}

TEST_CASE("identity reports carry their normalization", "[verifier]") {
  const Domain dom = build_domain({1, 32, 16, 0, TransverseBc::dirichlet});
  std::mt19937_64 rng(5);
  const SpectralField u = random_field(dom, rng);
  const IdentityReport r = check_skew(dom, u, 2.0);
  REQUIRE(r.name == "skew");
  REQUIRE(r.scale > 0.0);
  REQUIRE(r.residual == std::fabs(r.lhs - r.rhs) / r.scale);
}
