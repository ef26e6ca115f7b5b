#pragma once
// Strict plain-text run configuration.  Grammar:
//
//   # comment                     (blank lines and leading/trailing space ok)
//   [section]                     sections: domain params ic forcing output run
//   key = value                   unknown sections/keys and duplicates rejected
//
//   [domain]  d, nx, nt1, nt2 (d = 2 only), bc = dirichlet | periodic
//   [params]  epsilon, c, dt, t_final, dealias = on | off
//   [ic]      kind = zero | modal | snapshot
//             mode = k,n[,m] : re [im]        (repeatable; modal only)
//             path = <file>                   (snapshot only)
//   [forcing] kind = zero | modal | manufactured
//             mode = k,n[,m] : amp [@ omega]  (repeatable; modal only)
//             case = <catalog id>             (manufactured only)
//   [output]  diagnostics = <csv path>, snapshot = <path>, cadence = <int>
//   [run]     seed = <uint64>
//
// Every parse error carries the 1-based line number.

#include <cstdint>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zk/manufactured.hpp"
#include "zk/params.hpp"

namespace zk {

struct IcMode {
  int k = 0;
  int n = 1;
  int m = 1;
  double re = 0.0;
  double im = 0.0;
};

struct IcSpec {
  enum class Kind { zero, modal, snapshot };
  Kind kind = Kind::zero;
  std::vector<IcMode> modes;
  std::string path;
};

struct OutputSpec {
  std::string diagnostics;  // CSV path; empty = no file
  std::string snapshot;     // final-state path; empty = no file
  int cadence = 1;
};

struct RunConfig {
  DomainSpec domain{1, 128, 64, 0, TransverseBc::dirichlet};
  SolverParams params;
  IcSpec ic;
  OutputSpec output;
  uint64_t seed = 0;
};

namespace detail {

[[noreturn]] inline void config_fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                              what);
}

inline std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[nodiscard]] inline double parse_double(const std::string& v, int line) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) config_fail(line, "invalid number '" + v + "'");
    return x;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  config_fail(line, "invalid number '" + v + "'");
}

[[nodiscard]] inline long long parse_int(const std::string& v, int line) {
  try {
    size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) config_fail(line, "invalid integer '" + v + "'");
    return x;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  config_fail(line, "invalid integer '" + v + "'");
}

[[nodiscard]] inline uint64_t parse_uint(const std::string& v, int line) {
  try {
    size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size() || v.find('-') != std::string::npos)
      config_fail(line, "invalid unsigned integer '" + v + "'");
    return x;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  config_fail(line, "invalid unsigned integer '" + v + "'");
}

[[nodiscard]] inline bool parse_switch(const std::string& v, int line) {
  if (v == "on" || v == "true") return true;
  if (v == "off" || v == "false") return false;
  config_fail(line, "expected on/off, got '" + v + "'");
}

// "k,n[,m]" index triple shared by ic and forcing mode entries
inline void parse_mode_indices(const std::string& s, int line, int& k, int& n,
                               int& m) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  if (parts.size() < 2 || parts.size() > 3)
    config_fail(line, "mode indices must be k,n or k,n,m");
  k = static_cast<int>(parse_int(parts[0], line));
  n = static_cast<int>(parse_int(parts[1], line));
  m = parts.size() == 3 ? static_cast<int>(parse_int(parts[2], line)) : 1;
}

[[nodiscard]] inline IcMode parse_ic_mode(const std::string& v, int line) {
  const size_t colon = v.find(':');
  if (colon == std::string::npos)
    config_fail(line, "mode entry must be 'k,n[,m] : re [im]'");
  IcMode mode;
  parse_mode_indices(trim(v.substr(0, colon)), line, mode.k, mode.n, mode.m);
  std::istringstream amp(trim(v.substr(colon + 1)));
  std::string re, im;
  amp >> re >> im;
  std::string rest;
  amp >> rest;
  if (re.empty() || !rest.empty())
    config_fail(line, "mode entry must be 'k,n[,m] : re [im]'");
  mode.re = parse_double(re, line);
  mode.im = im.empty() ? 0.0 : parse_double(im, line);
  return mode;
}

[[nodiscard]] inline ForcingSpec::Mode parse_forcing_mode(const std::string& v,
                                                          int line) {
  const size_t colon = v.find(':');
  if (colon == std::string::npos)
    config_fail(line, "mode entry must be 'k,n[,m] : amp [@ omega]'");
  ForcingSpec::Mode mode;
  parse_mode_indices(trim(v.substr(0, colon)), line, mode.k, mode.n, mode.m);
  std::string tail = trim(v.substr(colon + 1));
  const size_t at = tail.find('@');
  if (at != std::string::npos) {
    mode.omega = parse_double(trim(tail.substr(at + 1)), line);
    tail = trim(tail.substr(0, at));
  }
  if (tail.empty())
    config_fail(line, "mode entry must be 'k,n[,m] : amp [@ omega]'");
  mode.amp = parse_double(tail, line);
  return mode;
}

}  // namespace detail

[[nodiscard]] inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;  // "section.key" for duplicate detection
  std::string raw;
  int line = 0;
  bool d_set = false, nx_set = false, nt1_set = false, nt2_set = false;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']')
        detail::config_fail(line, "unterminated section header");
      section = detail::trim(s.substr(1, s.size() - 2));
      if (section != "domain" && section != "params" && section != "ic" &&
          section != "forcing" && section != "output" && section != "run")
        detail::config_fail(line, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      detail::config_fail(line, "expected 'key = value'");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string val = detail::trim(s.substr(eq + 1));
    if (section.empty())
      detail::config_fail(line, "key '" + key + "' outside any section");
    if (key.empty()) detail::config_fail(line, "empty key");
    if (val.empty()) detail::config_fail(line, "empty value for '" + key + "'");

    if (key != "mode" && !seen.insert(section + "." + key).second)
      detail::config_fail(line, "duplicate key '" + key + "' in [" + section + "]");

    if (section == "domain") {
      if (key == "d") {
        cfg.domain.d = static_cast<int>(detail::parse_int(val, line));
        d_set = true;
      } else if (key == "nx") {
        cfg.domain.nx = static_cast<int>(detail::parse_int(val, line));
        nx_set = true;
      } else if (key == "nt1") {
        cfg.domain.nt1 = static_cast<int>(detail::parse_int(val, line));
        nt1_set = true;
      } else if (key == "nt2") {
        cfg.domain.nt2 = static_cast<int>(detail::parse_int(val, line));
        nt2_set = true;
      } else if (key == "bc") {
        if (val == "dirichlet")
          cfg.domain.bc = TransverseBc::dirichlet;
        else if (val == "periodic")
          cfg.domain.bc = TransverseBc::periodic;
        else
          detail::config_fail(line, "bc must be dirichlet or periodic");
      } else {
        detail::config_fail(line, "unknown key '" + key + "' in [domain]");
      }
    } else if (section == "params") {
      if (key == "epsilon")
        cfg.params.epsilon = detail::parse_double(val, line);
      else if (key == "c")
        cfg.params.c = detail::parse_double(val, line);
      else if (key == "dt")
        cfg.params.dt = detail::parse_double(val, line);
      else if (key == "t_final")
        cfg.params.t_final = detail::parse_double(val, line);
      else if (key == "dealias")
        cfg.params.dealias = detail::parse_switch(val, line);
      else
        detail::config_fail(line, "unknown key '" + key + "' in [params]");
    } else if (section == "ic") {
      if (key == "kind") {
        if (val == "zero")
          cfg.ic.kind = IcSpec::Kind::zero;
        else if (val == "modal")
          cfg.ic.kind = IcSpec::Kind::modal;
        else if (val == "snapshot")
          cfg.ic.kind = IcSpec::Kind::snapshot;
        else
          detail::config_fail(line, "ic kind must be zero, modal, or snapshot");
      } else if (key == "mode") {
        cfg.ic.modes.push_back(detail::parse_ic_mode(val, line));
      } else if (key == "path") {
        cfg.ic.path = val;
      } else {
        detail::config_fail(line, "unknown key '" + key + "' in [ic]");
      }
    } else if (section == "forcing") {
      if (key == "kind") {
        if (val == "zero")
          cfg.params.forcing.kind = ForcingSpec::Kind::zero;
        else if (val == "modal")
          cfg.params.forcing.kind = ForcingSpec::Kind::modal;
        else if (val == "manufactured")
          cfg.params.forcing.kind = ForcingSpec::Kind::manufactured;
        else
          detail::config_fail(
              line, "forcing kind must be zero, modal, or manufactured");
      } else if (key == "mode") {
        cfg.params.forcing.modes.push_back(detail::parse_forcing_mode(val, line));
      } else if (key == "case") {
        cfg.params.forcing.manufactured_id = val;
      } else {
        detail::config_fail(line, "unknown key '" + key + "' in [forcing]");
      }
    } else if (section == "output") {
      if (key == "diagnostics")
        cfg.output.diagnostics = val;
      else if (key == "snapshot")
        cfg.output.snapshot = val;
      else if (key == "cadence")
        cfg.output.cadence = static_cast<int>(detail::parse_int(val, line));
      else
        detail::config_fail(line, "unknown key '" + key + "' in [output]");
    } else {  // run
      if (key == "seed")
        cfg.seed = detail::parse_uint(val, line);
      else
        detail::config_fail(line, "unknown key '" + key + "' in [run]");
    }
  }

  if (!d_set || !nx_set || !nt1_set)
    throw std::invalid_argument("config: [domain] requires d, nx, and nt1");
  if (cfg.domain.d == 2 && !nt2_set)
    throw std::invalid_argument("config: [domain] requires nt2 when d = 2");
  if (cfg.domain.d == 1 && nt2_set)
    throw std::invalid_argument("config: nt2 is only valid when d = 2");
  if (cfg.ic.kind == IcSpec::Kind::modal && cfg.ic.modes.empty())
    throw std::invalid_argument("config: ic kind 'modal' requires mode entries");
  if (cfg.ic.kind != IcSpec::Kind::modal && !cfg.ic.modes.empty())
    throw std::invalid_argument("config: mode entries require ic kind 'modal'");
  if (cfg.ic.kind == IcSpec::Kind::snapshot && cfg.ic.path.empty())
    throw std::invalid_argument("config: ic kind 'snapshot' requires path");
  if (cfg.ic.kind != IcSpec::Kind::snapshot && !cfg.ic.path.empty())
    throw std::invalid_argument("config: path requires ic kind 'snapshot'");
  const ForcingSpec& fs = cfg.params.forcing;
  if (fs.kind == ForcingSpec::Kind::modal && fs.modes.empty())
    throw std::invalid_argument(
        "config: forcing kind 'modal' requires mode entries");
  if (fs.kind != ForcingSpec::Kind::modal && !fs.modes.empty())
    throw std::invalid_argument(
        "config: mode entries require forcing kind 'modal'");
  if (fs.kind == ForcingSpec::Kind::manufactured && fs.manufactured_id.empty())
    throw std::invalid_argument(
        "config: forcing kind 'manufactured' requires case");
  if (fs.kind != ForcingSpec::Kind::manufactured && !fs.manufactured_id.empty())
    throw std::invalid_argument(
        "config: case requires forcing kind 'manufactured'");
  if (cfg.output.cadence < 1)
    throw std::invalid_argument("config: cadence must be >= 1");
  validate_params(cfg.params);
  return cfg;
}

[[nodiscard]] inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  return parse_config(in);
}

// Builds the initial state a config describes (snapshot loading lives with
// the snapshot reader; this covers zero and modal kinds).
[[nodiscard]] inline SpectralField build_modal_ic(const Domain& dom,
                                                  const IcSpec& ic) {
  SpectralField u = make_spectral(dom);
  if (ic.kind == IcSpec::Kind::zero) return u;
  if (ic.kind != IcSpec::Kind::modal)
    throw std::invalid_argument("ic: snapshot kind needs the snapshot reader");
  for (const IcMode& m : ic.modes) {
    if (m.k < 0 || m.k >= dom.kx())
      throw std::invalid_argument("ic: mode k out of range");
    const int j = transverse_index(dom, m.n, 1);
    const int l = dom.d() == 2 ? transverse_index(dom, m.m, 2) : 0;
    u.c[dom.sidx(m.k, j, l)] += cplx(m.re, m.im);
  }
  enforce_real_symmetry(dom, u);
  return u;
}

}  // namespace zk
