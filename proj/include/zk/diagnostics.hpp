#pragma once
// Fixed-layout CSV diagnostics.  One row per record tick; columns are stable
// so downstream tooling can parse positionally.

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace zk {

struct DiagnosticsRecord {
  double t = 0.0;
  double l2 = 0.0;             // |u|
  double grad_l2 = 0.0;        // |grad u|
  double semi2_sq = 0.0;       // [u]_2^2
  double cubic = 0.0;          // int u^3
  double e1 = 0.0;             // 1/2 |grad u|^2 - 1/6 int u^3
  double mean_residual = 0.0;  // defect of the x-mean law (cross-section L2)
  double diss_integral = 0.0;  // int_0^t 2 eps [u]_2^2 ds (trapezoid at ticks)
  double work_integral = 0.0;  // int_0^t 2 <f, u> ds (trapezoid at ticks)
  double balance_residual = 0.0;  // relative defect of the L2 balance
};

inline constexpr char kDiagnosticsHeader[] =
    "t,l2,grad_l2,semi2_sq,cubic,e1,mean_residual,diss_integral,"
    "work_integral,balance_residual";

[[nodiscard]] inline std::string to_csv_row(const DiagnosticsRecord& r) {
  const double cols[] = {r.t,           r.l2,           r.grad_l2,
                         r.semi2_sq,    r.cubic,        r.e1,
                         r.mean_residual, r.diss_integral, r.work_integral,
                         r.balance_residual};
  std::string row;
  char buf[32];
  for (double v : cols) {
    if (!row.empty()) row.push_back(',');
    std::snprintf(buf, sizeof buf, "%.17g", v);
    row += buf;
  }
  return row;
}

// Appends records to a CSV file, writing the header exactly once per file and
// refusing rows that do not advance time (including across reopenings).
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::string& path) {
    std::ifstream in(path);
    std::string line, last;
    bool any = false;
    if (in) {
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!any) {
          if (line != kDiagnosticsHeader)
            throw std::invalid_argument(
                "diagnostics: existing file has a different column layout");
          any = true;
          continue;
        }
        last = line;
      }
    }
    in.close();
    out_.open(path, std::ios::app);
    if (!out_) throw std::runtime_error("diagnostics: cannot open " + path);
    if (!any) {
      out_ << kDiagnosticsHeader << '\n';
    } else if (!last.empty()) {
      last_t_ = std::stod(last.substr(0, last.find(',')));
      have_last_ = true;
    }
  }

  void append(const DiagnosticsRecord& r) {
    if (have_last_ && !(r.t > last_t_))
      throw std::invalid_argument(
          "diagnostics: time must increase across appended rows");
    out_ << to_csv_row(r) << '\n';
    out_.flush();
    last_t_ = r.t;
    have_last_ = true;
  }

 private:
  std::ofstream out_;
  double last_t_ = 0.0;
  bool have_last_ = false;
};

}  // namespace zk
