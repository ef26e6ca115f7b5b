// Command-line driver: run | verify | sweep | mms | poincare.
//
//   run       integrate a configured problem, writing diagnostics/snapshots
//   verify    static identity certification on seeded random fields
//   sweep     regularization family: uniform bounds and adjacent gaps
//   mms       manufactured-solution convergence tables
//   poincare  modal inequality sampling
//
// Errors are one line on stderr ("error: ..."); exit status is 0 on success,
// 1 when a numerical check fails or a run blows up, 2 on bad input.  The
// ZK_THREADS environment variable caps sweep parallelism.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zk/zk.hpp"

namespace fs = std::filesystem;
using namespace zk;

namespace {

// Output paths from the config are taken relative to --out when it is given;
// an empty configured path gets a default name only under --out.
std::string resolve_out(const std::string& out_dir, const std::string& cfg_path,
                        const std::string& fallback) {
  if (out_dir.empty()) return cfg_path;  // may be empty: no file
  fs::create_directories(out_dir);
  const std::string name = cfg_path.empty() ? fallback : cfg_path;
  if (fs::path(name).is_absolute()) return name;
  return (fs::path(out_dir) / name).string();
}

SpectralField initial_state(const Domain& dom, const RunConfig& cfg) {
  if (cfg.ic.kind == IcSpec::Kind::snapshot)
    return read_snapshot(dom, cfg.ic.path);
  return build_modal_ic(dom, cfg.ic);
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const RunConfig cfg = parse_config_file(config_path);
  const Domain dom = build_domain(cfg.domain);
  const SpectralField u0 = initial_state(dom, cfg);

  const std::string diag_path =
      resolve_out(out_dir, cfg.output.diagnostics, "diagnostics.csv");
  const std::string snap_path =
      resolve_out(out_dir, cfg.output.snapshot, "final.snap");

  std::unique_ptr<DiagnosticsWriter> writer;
  if (!diag_path.empty()) writer = std::make_unique<DiagnosticsWriter>(diag_path);

  IntegrateOptions opts;
  opts.cadence = cfg.output.cadence;
  if (writer)
    opts.observer = [&](const SimState&, const DiagnosticsRecord& r) {
      writer->append(r);
    };
  const IntegrationResult res = integrate(dom, u0, cfg.params, opts);
  if (!snap_path.empty()) write_snapshot(snap_path, dom, res.state.u, res.state.t);

  const DiagnosticsRecord& last = res.records.back();
  std::printf("run: t = %g, steps = %lld, |u| = %.12e, balance residual = %.3e",
              res.state.t, std::llround(cfg.params.t_final / cfg.params.dt),
              last.l2, last.balance_residual);
  if (!diag_path.empty()) std::printf(", diagnostics = %s", diag_path.c_str());
  if (!snap_path.empty()) std::printf(", snapshot = %s", snap_path.c_str());
  std::printf("\n");
  return 0;
}

int cmd_verify(const std::string& config_path, uint64_t seed, int samples,
               double tol_identity, double tol_quintic) {
  DomainSpec spec{1, 64, 32, 0, TransverseBc::dirichlet};
  double c = 1.0;
  if (!config_path.empty()) {
    const RunConfig cfg = parse_config_file(config_path);
    spec = cfg.domain;
    c = cfg.params.c;
  }
  const Domain dom = build_domain(spec);

  double worst_skew = 0.0, worst_neutral = 0.0, worst_quintic = 0.0;
  bool ok = true;
  int basis = 0;

  const auto probe = [&](const SpectralField& u) {
    const IdentityReport s = check_skew(dom, u, c, tol_identity);
    const IdentityReport n = check_nonlinear_neutral(dom, u, tol_identity);
    worst_skew = std::max(worst_skew, s.residual);
    worst_neutral = std::max(worst_neutral, n.residual);
    ok = ok && s.pass && n.pass;
  };

  // every basis element, when the domain is small enough to afford it
  if (static_cast<long long>(dom.kx()) * dom.n1() * dom.n2() <= 4096) {
    for (int l = 0; l < dom.n2(); ++l)
      for (int j = 0; j < dom.n1(); ++j)
        for (int k = 0; k < dom.kx(); ++k) {
          SpectralField e = make_spectral(dom);
          e.c[dom.sidx(k, j, l)] =
              cplx(0.7, k == 0 || k == dom.kx() - 1 ? 0.0 : -0.4);
          enforce_real_symmetry(dom, e);
          probe(e);
          ++basis;
        }
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) probe(random_field(dom, rng));

  const Domain fine = zk::detail::refined_domain(dom, 4);
  const int quintic_samples = std::min(samples, 50);
  for (int s = 0; s < quintic_samples; ++s) {
    const IdentityReport r =
        check_52_identity(dom, random_field(dom, rng), fine, tol_quintic);
    worst_quintic = std::max(worst_quintic, r.residual);
    ok = ok && r.pass;
  }

  std::printf("%-24s %-12s %-15s %-10s %s\n", "check", "fields",
              "worst residual", "tol", "result");
  char fields[32];
  std::snprintf(fields, sizeof fields, "%d+%d", basis, samples);
  std::printf("%-24s %-12s %-15.2e %-10.1e %s\n", "skew-advection", fields,
              worst_skew, tol_identity,
              worst_skew <= tol_identity ? "pass" : "FAIL");
  std::printf("%-24s %-12s %-15.2e %-10.1e %s\n", "nonlinear-neutrality",
              fields, worst_neutral, tol_identity,
              worst_neutral <= tol_identity ? "pass" : "FAIL");
  std::printf("%-24s %-12d %-15.2e %-10.1e %s\n", "five-halves-identity",
              quintic_samples, worst_quintic, tol_quintic,
              worst_quintic <= tol_quintic ? "pass" : "FAIL");
  std::printf("verify: %s (seed %" PRIu64 ", %d samples)\n",
              ok ? "PASS" : "FAIL", seed, samples);
  return ok ? 0 : 1;
}

// "start:count" -> geometric ladder with ratio 1/2
std::vector<double> parse_eps_ladder(const std::string& s) {
  const size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("eps: expected start:count, got '" + s + "'");
  size_t used = 0;
  double start = 0.0;
  int count = 0;
  try {
    start = std::stod(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("");
    const std::string c = s.substr(colon + 1);
    count = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument("");
  } catch (...) {
    throw std::invalid_argument("eps: expected start:count, got '" + s + "'");
  }
  if (!(start > 0.0) || count < 2)
    throw std::invalid_argument("eps: need start > 0 and count >= 2");
  std::vector<double> eps(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) eps[static_cast<size_t>(i)] = start * std::pow(0.5, i);
  return eps;
}

int cmd_sweep(const std::string& config_path, const std::string& eps_arg,
              const std::string& out_dir) {
  RunConfig cfg;
  if (!config_path.empty()) {
    cfg = parse_config_file(config_path);
  } else {
    // built-in base: the moderate decaying pulse the certification gate uses
    cfg.domain = {1, 128, 64, 0, TransverseBc::dirichlet};
    cfg.params.dt = 1e-3;
    cfg.params.t_final = 0.08;
    cfg.ic.kind = IcSpec::Kind::modal;
    cfg.ic.modes = {{1, 1, 1, 0.08, 0.0}, {1, 2, 1, 0.0, 0.04}};
  }
  const Domain dom = build_domain(cfg.domain);
  const SpectralField u0 = initial_state(dom, cfg);
  const std::vector<double> eps = parse_eps_ladder(eps_arg);

  std::vector<std::unique_ptr<DiagnosticsWriter>> writers(eps.size());
  if (!out_dir.empty())
    for (size_t m = 0; m < eps.size(); ++m) {
      const fs::path dir = fs::path(out_dir) / ("member-" + std::to_string(m));
      fs::create_directories(dir);
      writers[m] =
          std::make_unique<DiagnosticsWriter>((dir / "diagnostics.csv").string());
    }
  // one file per member, touched only by that member's worker thread
  MemberObserver sink;
  if (!out_dir.empty())
    sink = [&](size_t m, const SimState&, const DiagnosticsRecord& r) {
      writers[m]->append(r);
    };

  const SweepReport rep =
      run_eps_sweep(dom, u0, cfg.params, eps, cfg.output.cadence, sink);

  std::printf("%-12s %-14s %-16s %-16s %s\n", "eps", "sup |u|^2",
              "sup |grad u|^2", "eps*int [u]_2^2", "gap to next");
  for (size_t m = 0; m < rep.table.size(); ++m) {
    const SweepMember& mem = rep.table[m];
    if (mem.aborted) {
      std::printf("%-12.4e aborted (blowup)\n", mem.epsilon);
      continue;
    }
    std::printf("%-12.4e %-14.6e %-16.6e %-16.6e ", mem.epsilon, mem.sup_u_sq,
                mem.sup_grad_sq, mem.eps_int_semi2);
    if (m + 1 < rep.table.size() && m < rep.pairwise_gaps.size())
      std::printf("%.6e\n", rep.pairwise_gaps[m]);
    else
      std::printf("-\n");
  }
  std::printf("sweep: %s (%zu members, cadence %d)\n",
              rep.complete ? "COMPLETE" : "INCOMPLETE", eps.size(),
              cfg.output.cadence);
  return rep.complete ? 0 : 1;
}

int cmd_mms(const std::string& case_id, const std::string& out_csv) {
  const std::vector<std::string> ids =
      case_id.empty()
          ? std::vector<std::string>{"linear-k1n1", "steady", "nonlinear-moderate"}
          : std::vector<std::string>{case_id};
  const std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};

  std::FILE* csv = nullptr;
  if (!out_csv.empty()) {
    csv = std::fopen(out_csv.c_str(), "w");
    if (csv == nullptr)
      throw std::runtime_error("mms: cannot open " + out_csv);
    std::fprintf(csv, "case,dt,error\n");
  }

  bool all_ok = true;
  std::printf("%-20s %-10s %s\n", "case", "dt", "error at t_final");
  for (const std::string& id : ids) {
    const ManufacturedCase mc = manufactured_case(id);
    const Domain dom = build_domain(mc.domain);
    const SpectralField u0 = mc.exact(dom, 0.0);
    const SpectralField ref = mc.exact(dom, mc.params.t_final);
    std::vector<double> errs;
    for (double dt : dts) {
      SolverParams p = mc.params;
      p.dt = dt;
      IntegrateOptions opts;
      opts.cadence = 1000000;  // endpoints only
      opts.record_cubic = false;
      const IntegrationResult r = integrate(dom, u0, p, opts);
      double acc = 0.0;
      for (int l = 0; l < dom.n2(); ++l)
        for (int j = 0; j < dom.n1(); ++j)
          for (int k = 0; k < dom.kx(); ++k) {
            const size_t i = dom.sidx(k, j, l);
            acc += dom.mult(k) * std::norm(r.state.u.c[i] - ref.c[i]);
          }
      errs.push_back(std::sqrt(acc * dom.modal_weight()));
      std::printf("%-20s %-10.1e %.6e\n", id.c_str(), dt, errs.back());
      if (csv != nullptr)
        std::fprintf(csv, "%s,%.17g,%.17g\n", id.c_str(), dt, errs.back());
    }
    double emax = 0.0;
    for (double e : errs) emax = std::max(emax, e);
    if (emax < 1e-11) {
      std::printf("%-20s exact to roundoff at every dt\n", id.c_str());
      continue;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < dts.size(); ++i) {
      const double x = std::log(dts[i]), y = std::log(errs[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(dts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::printf("%-20s observed temporal order %.3f\n", id.c_str(), slope);
    all_ok = all_ok && slope > 3.5 && slope < 4.5;
  }
  if (csv != nullptr) std::fclose(csv);
  return all_ok ? 0 : 1;
}

int cmd_poincare(const std::string& config_path, int samples, uint64_t seed) {
  DomainSpec spec{1, 64, 32, 0, TransverseBc::dirichlet};
  if (!config_path.empty()) spec = parse_config_file(config_path).domain;
  const Domain dom = build_domain(spec);
  const PoincareReport rep = check_poincare_suite(dom, samples, seed);
  std::printf("samples: %d (x-mean-free random fields, seed %" PRIu64 ")\n",
              rep.samples, seed);
  std::printf("max |u_x| / |u_xx|          = %.9f  (bound 1/(2 pi) = %.9f)\n",
              rep.max_ratio1, 1.0 / (2 * pi));
  std::printf("max |u_xy|^2 / [u]_2^2      = %.9f  (bound 1)\n", rep.max_ratio2);
  std::printf("max |u|_H2^2 / denominator  = %.9f  (modal ceiling %.9f)\n",
              rep.max_ratio3, rep.ratio3_ceiling);
  std::printf("poincare: %s\n", rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pseudo-spectral channel solver and certification toolkit.\n"
      "Parallelism of sweep members is capped by the ZK_THREADS variable."};
  app.require_subcommand(1);

  std::string config, out_dir, eps_arg = "1e-2:5", case_id, out_csv;
  uint64_t seed = 7;
  int samples = 1000;
  double tol_identity = 1e-10, tol_quintic = 1e-8;

  CLI::App* run = app.add_subcommand("run", "integrate a configured problem");
  run->add_option("--config", config, "run configuration file")->required();
  run->add_option("--out", out_dir, "directory for configured outputs");

  CLI::App* verify =
      app.add_subcommand("verify", "certify static identities on random fields");
  verify->add_option("--config", config, "take domain and advection speed from here");
  verify->add_option("--seed", seed, "random-field seed (default 7)");
  verify->add_option("--samples", samples, "number of random fields (default 1000)");
  verify->add_option("--tol-identity", tol_identity,
                     "residual bound for skew/neutrality (default 1e-10)");
  verify->add_option("--tol-quintic", tol_quintic,
                     "residual bound for the five-halves identity (default 1e-8)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "run a family of regularization strengths");
  sweep->add_option("--config", config,
                    "base run configuration (built-in decaying pulse if omitted)");
  sweep->add_option("--eps", eps_arg,
                    "start:count, geometric ladder with ratio 1/2 (default 1e-2:5)");
  sweep->add_option("--out", out_dir, "directory for per-member diagnostics");

  CLI::App* mms =
      app.add_subcommand("mms", "manufactured-solution convergence tables");
  mms->add_option("--case", case_id, "catalog id (default: all cases)");
  mms->add_option("--out", out_csv, "write the table as CSV");

  CLI::App* poincare =
      app.add_subcommand("poincare", "sample the modal inequality suite");
  poincare->add_option("--config", config, "take the domain from here");
  poincare->add_option("--samples", samples, "number of fields (default 1000)");
  poincare->add_option("--seed", seed, "random-field seed (default 7)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(config, out_dir);
    if (verify->parsed())
      return cmd_verify(config, seed, samples, tol_identity, tol_quintic);
    if (sweep->parsed()) return cmd_sweep(config, eps_arg, out_dir);
    if (mms->parsed()) return cmd_mms(case_id, out_csv);
    if (poincare->parsed()) return cmd_poincare(config, samples, seed);
  } catch (const BlowupError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
