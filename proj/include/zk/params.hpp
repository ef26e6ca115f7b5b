#pragma once
// Run-level parameter records shared across the solver stack.

#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

// External forcing selector.  `modal` drives a fixed set of coefficients with
// amplitude amp*cos(omega*t); `manufactured` applies the residual forcing of a
// catalogued exact solution (see manufactured.hpp).
struct ForcingSpec {
  enum class Kind { zero, modal, manufactured };
  struct Mode {
    int k = 0;       // x harmonic
    int n = 1;       // first transverse mode (>= 1 for the sine basis)
    int m = 0;       // second transverse mode, ignored when d == 1
    double amp = 0.0;
    double omega = 0.0;
  };
  Kind kind = Kind::zero;
  std::vector<Mode> modes;      // modal only
  std::string manufactured_id;  // manufactured only
};

struct SolverParams {
  double epsilon = 0.0;  // strength of the fourth-order damping
  double c = 1.0;        // linear drift speed in x
  double dt = 1e-3;
  double t_final = 1.0;
  bool dealias = true;
  ForcingSpec forcing;
};

inline void validate_params(const SolverParams& p) {
  if (!(p.epsilon >= 0.0))
    throw std::invalid_argument("params: epsilon must be >= 0");
  if (!(p.c > 0.0)) throw std::invalid_argument("params: c must be > 0");
  if (!(p.dt > 0.0)) throw std::invalid_argument("params: dt must be > 0");
  if (!(p.t_final > p.dt))
    throw std::invalid_argument("params: t_final must exceed dt");
}

}  // namespace zk
