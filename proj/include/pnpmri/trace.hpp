#pragma once

#include <string>
#include <vector>

namespace pnpmri {

// One record per completed iteration. CSV schemas (fixed column order):
//   pnp: iter,nmse_db,data_fidelity,ce_res_h,ce_res_f,seconds
//   red: iter,nmse_db,data_fidelity,ce_res_h,ce_res_f,red_residual_norm,seconds
//   amp: iter,empirical_eta,se_eta,nmse_db
// `include_timing=false` drops the seconds column so outputs are
// byte-reproducible (used by the experiment harness).

struct SolverTraceRow {
  int iter = 0;
  double nmse_db = 0.0;
  double data_fidelity = 0.0;
  double ce_res_h = 0.0;
  double ce_res_f = 0.0;
  double red_residual_norm = 0.0;
  double seconds = 0.0;
};

struct SolverTrace {
  bool has_red_residual = false;
  std::vector<SolverTraceRow> rows;

  std::string to_csv(bool include_timing = true) const;
  void write_csv(const std::string& path, bool include_timing = true) const;
};

struct AmpTraceRow {
  int iter = 0;
  double empirical_eta = 0.0;
  double se_eta = 0.0;
  double nmse_db = 0.0;
};

struct AmpTrace {
  std::vector<AmpTraceRow> rows;

  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

/// Fixed CSV number format shared by all writers ("%.12e"; inf/nan spelled out).
std::string csv_double(double v);

}  // namespace pnpmri
