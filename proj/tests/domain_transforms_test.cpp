#include "test_support.hpp"

using namespace zktest;

TEST_CASE("domain specs are validated", "[domain]") {
  REQUIRE_THROWS_WITH(build_domain({3, 16, 12, 0, TransverseBc::dirichlet}),
                      Catch::Matchers::ContainsSubstring("d must be 1 or 2"));
  REQUIRE_THROWS_WITH(build_domain({1, 16, 4, 0, TransverseBc::dirichlet}),
                      Catch::Matchers::ContainsSubstring(">= 8 per direction"));
  REQUIRE_THROWS_WITH(build_domain({1, 15, 12, 0, TransverseBc::dirichlet}),
                      Catch::Matchers::ContainsSubstring("nx must be even"));
  REQUIRE_THROWS_WITH(build_domain({2, 16, 12, 6, TransverseBc::periodic}),
                      Catch::Matchers::ContainsSubstring(">= 8 per direction"));
}

TEST_CASE("grid geometry and mode tables", "[domain]") {
  const Domain dom = build_domain({1, 16, 12, 0, TransverseBc::dirichlet});
  REQUIRE(dom.kx() == 9);
  REQUIRE(dom.xi()[1] == Catch::Approx(2.0 * pi));
  REQUIRE(dom.mu1()[0] == Catch::Approx(1.0));   // sine mode n = 1
  REQUIRE(dom.mu1()[11] == Catch::Approx(12.0));
  REQUIRE(dom.x_grid().front() == 0.0);
  // interior transverse nodes only; walls excluded
  REQUIRE(dom.y1_grid().front() > -pi / 2);
  REQUIRE(dom.y1_grid().back() < pi / 2);

  const Domain per = build_domain({1, 16, 12, 0, TransverseBc::periodic});
  REQUIRE(per.mu1()[0] == 0.0);
  REQUIRE(per.mu1()[1] == Catch::Approx(2.0));   // even wavenumbers
  REQUIRE(per.mu1()[11] == Catch::Approx(-2.0));  // FFT wrap order
}

TEST_CASE("forward/inverse round trip on grid noise", "[transforms]") {
  for (TransverseBc bc : {TransverseBc::dirichlet, TransverseBc::periodic}) {
    for (int d : {1, 2}) {
      const Domain dom = build_domain({d, 16, 12, 10, bc});
      std::mt19937_64 rng(7);
      PhysicalField u = make_physical(dom);
      for (double& v : u.v) v = zk::detail::unit_real(rng);
      const SpectralField uh = forward_transform(dom, u);
      const PhysicalField u2 = inverse_transform(dom, uh);
      INFO("bc " << (bc == TransverseBc::dirichlet ? "dirichlet" : "periodic")
                 << " d " << d);
      REQUIRE(max_grid_diff(u, u2) < 1e-13);
    }
  }
}

TEST_CASE("fast transforms match direct summation", "[transforms]") {
  for (TransverseBc bc : {TransverseBc::dirichlet, TransverseBc::periodic}) {
    for (int d : {1, 2}) {
      const Domain dom = build_domain({d, 16, 12, 10, bc});
      std::mt19937_64 rng(11);
      const SpectralField uh = random_field(dom, rng, {.dealiased = false});
      const PhysicalField fast = inverse_transform(dom, uh);
      const PhysicalField slow = zk::detail::inverse_direct(dom, uh);
      REQUIRE(max_grid_diff(fast, slow) < 1e-12);
    }
  }
}

TEST_CASE("discrete Parseval identity", "[transforms]") {
  for (TransverseBc bc : {TransverseBc::dirichlet, TransverseBc::periodic}) {
    const Domain dom = build_domain({2, 16, 12, 10, bc});
    std::mt19937_64 rng(3);
    const SpectralField uh = random_field(dom, rng, {.dealiased = false});
    const PhysicalField u = inverse_transform(dom, uh);
    double grid = 0.0;
    for (double v : u.v) grid += v * v;
    grid *= dom.quad_weight();
    REQUIRE(grid == Catch::Approx(l2_sq(dom, uh)).epsilon(1e-12));
  }
}

TEST_CASE("analytic sample: cos(2 pi x) cos(y)", "[transforms]") {
  const Domain dom = build_domain({1, 16, 12, 0, TransverseBc::dirichlet});
  PhysicalField u = make_physical(dom);
  for (int j = 0; j < dom.n1(); ++j)
    for (int i = 0; i < dom.nx(); ++i)
      u.v[dom.pidx(i, j)] =
          std::cos(2 * pi * dom.x_grid()[i]) * std::cos(dom.y1_grid()[j]);
  const SpectralField uh = forward_transform(dom, u);
  // cos(y) = sin(y + pi/2): single sine mode n = 1; cos(2 pi x) carries 1/2
  // on each of k = +-1, and the half-spectrum stores the + side.
  REQUIRE(uh.c[dom.sidx(1, 0)].real() == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(std::fabs(uh.c[dom.sidx(1, 0)].imag()) < 1e-14);
  double off = 0.0;
  for (int j = 0; j < dom.n1(); ++j)
    for (int k = 0; k < dom.kx(); ++k)
      if (!(k == 1 && j == 0)) off = std::max(off, std::abs(uh.c[dom.sidx(k, j)]));
  REQUIRE(off < 1e-14);
}

TEST_CASE("dealias projection", "[transforms]") {
  const Domain dom = build_domain({1, 32, 24, 0, TransverseBc::dirichlet});
  SECTION("removes exactly the modes beyond the cutoffs") {
    std::mt19937_64 rng(5);
    const SpectralField u = random_field(dom, rng, {.dealiased = false});
    const SpectralField p = project_dealias(dom, u);
    for (int j = 0; j < dom.n1(); ++j)
      for (int k = 0; k < dom.kx(); ++k) {
        const cplx v = p.c[dom.sidx(k, j)];
        if (k > dom.kcut() || !dom.keep1(j))
          REQUIRE(std::abs(v) == 0.0);
        else
          REQUIRE(v == u.c[dom.sidx(k, j)]);
      }
  }
  SECTION("is idempotent") {
    std::mt19937_64 rng(6);
    const SpectralField u = random_field(dom, rng, {.dealiased = false});
    const SpectralField p1 = project_dealias(dom, u);
    const SpectralField p2 = project_dealias(dom, p1);
    REQUIRE(max_coeff_diff(p1, p2) == 0.0);
  }
}

TEST_CASE("resample between resolutions", "[transforms]") {
  for (TransverseBc bc : {TransverseBc::dirichlet, TransverseBc::periodic}) {
    const DomainSpec cs{2, 16, 12, 10, bc};
    const Domain coarse = build_domain(cs);
    const Domain fine = build_domain({2, 32, 24, 20, bc});
    std::mt19937_64 rng(9);
    const SpectralField u = random_field(coarse, rng, {.dealiased = false});

    SECTION("refinement is exact and invertible") {
      const SpectralField up = resample(coarse, fine, u);
      const SpectralField back = resample(fine, coarse, up);
      REQUIRE(max_coeff_diff(u, back) < 1e-14);
    }
    SECTION("refinement preserves the L2 norm of Nyquist-free content") {
      // Self-conjugate (Nyquist) cos modes carry unit multiplicity on their
      // own grid but become interior mode pairs on the finer grid, where the
      // signal-preserving embedding halves them: their discrete energy drops
      // by half (the coarse quadrature aliases cos^2 at Nyquist onto the
      // mean).  The norm identity therefore holds on Nyquist-free content.
      SpectralField w = u;
      for (int l = 0; l < coarse.n2(); ++l)
        for (int j = 0; j < coarse.n1(); ++j)
          w.c[coarse.sidx(coarse.kx() - 1, j, l)] = cplx(0.0, 0.0);
      if (bc == TransverseBc::periodic)
        for (int l = 0; l < coarse.n2(); ++l)
          for (int j = 0; j < coarse.n1(); ++j)
            for (int k = 0; k < coarse.kx(); ++k)
              if (j == coarse.n1() / 2 || l == coarse.n2() / 2)
                w.c[coarse.sidx(k, j, l)] = cplx(0.0, 0.0);
      const SpectralField up = resample(coarse, fine, w);
      REQUIRE(l2_sq(fine, up) == Catch::Approx(l2_sq(coarse, w)).epsilon(1e-13));
    }
    SECTION("truncation is the orthogonal projection") {
      const SpectralField uf = [&] {
        std::mt19937_64 r2(10);
        return random_field(fine, r2, {.dealiased = false});
      }();
      const SpectralField down = resample(fine, coarse, uf);
      const SpectralField up = resample(coarse, fine, down);
      // projector: energy splits, down-up-down is stable
      const SpectralField down2 = resample(fine, coarse, up);
      REQUIRE(max_coeff_diff(down, down2) < 1e-14);
      REQUIRE(l2_sq(coarse, down) <= l2_sq(fine, uf) * (1 + 1e-13));
    }
    SECTION("same-spec resample is the identity") {
      const Domain twin = build_domain(cs);
      const SpectralField v = resample(coarse, twin, u);
      REQUIRE(max_coeff_diff(u, v) == 0.0);
    }
  }
}

TEST_CASE("real symmetry enforcement is a projection", "[transforms]") {
  const Domain dom = build_domain({1, 16, 12, 0, TransverseBc::periodic});
  std::mt19937_64 rng(13);
  SpectralField u = make_spectral(dom);
  for (cplx& z : u.c) z = cplx(zk::detail::unit_real(rng), zk::detail::unit_real(rng));
  enforce_real_symmetry(dom, u);
  SpectralField v = u;
  enforce_real_symmetry(dom, v);
  REQUIRE(max_coeff_diff(u, v) == 0.0);
  // the symmetrized field synthesizes and round-trips exactly
  const SpectralField w = forward_transform(dom, inverse_transform(dom, u));
  REQUIRE(max_coeff_diff(u, w) < 1e-13);
}

TEST_CASE("boundary traces", "[transforms]") {
  const Domain dom = build_domain({1, 16, 12, 0, TransverseBc::dirichlet});
  // u = cos(2 pi x) sin(s): coefficient 0.5 at (k = 1, n = 1)
  const SpectralField u = single_mode(dom, 1, 0, 0, cplx(0.5, 0.0));
  SECTION("field and second derivative vanish at the walls") {
    for (Face f : {Face::y_lo, Face::y_hi})
      for (int order : {0, 2}) {
        const Trace t = boundary_trace(dom, u, f, order);
        for (double v : t.values) REQUIRE(std::fabs(v) < 1e-13);
      }
  }
  SECTION("normal derivative matches the analytic trace") {
    // d/ds [cos(2 pi x) sin(s)] = cos(2 pi x) cos(s); at s = 0 this is cos(2 pi x)
    const Trace t = boundary_trace(dom, u, Face::y_lo, 1);
    for (int i = 0; i < dom.nx(); ++i)
      REQUIRE(t.values[static_cast<size_t>(i)] ==
              Catch::Approx(std::cos(2 * pi * dom.x_grid()[i])).margin(1e-13));
  }
  SECTION("x faces agree (periodicity)") {
    const Trace a = boundary_trace(dom, u, Face::x0, 0);
    const Trace b = boundary_trace(dom, u, Face::x1, 0);
    for (size_t i = 0; i < a.values.size(); ++i)
      REQUIRE(a.values[i] == Catch::Approx(b.values[i]).margin(1e-13));
  }
}
