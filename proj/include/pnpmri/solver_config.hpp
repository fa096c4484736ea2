#pragma once

#include <memory>
#include <nlohmann/json.hpp>
#include <string>

#include "pnpmri/pnp.hpp"
#include "pnpmri/red.hpp"

namespace pnpmri {

/// A solver selection parsed from JSON, owning its denoiser. The JSON mirrors
/// the config structs:
///   {"type":"pnp","algo":"admm","eta":1,"sigma2":1,"max_iters":100,
///    "inner":{"kind":"cg","iters":4},"init":"adjoint","denoiser":{...}}
///   {"type":"red","variant":"apg","eta":1,"sigma2":1,"L":1, ...}
/// "eta" and "sigma2" accept the string "auto": sigma2 becomes the model's
/// noise variance; eta becomes 0.9*sigma2/|A|^2 for fista/bfista and sigma2
/// otherwise. Denoisers:
///   {"kind":"identity"} | {"kind":"tdt_orth","tau":t,"levels":l}
///   {"kind":"tdt_uwt","tau":t,"levels":l}
///   {"kind":"linear_symmetric","kernel":[...],"gain":g}
///   {"kind":"mmse_kde","points_path":"pts.ct","eta":e}
///   {"kind":"external","command":"..."}
struct SolverSpec {
  enum class Kind { pnp, red };
  Kind kind = Kind::pnp;
  PnPConfig pnp;
  RedConfig red;
  std::shared_ptr<Denoiser> denoiser;  // null for bfista (built internally)

  /// Runs the configured solver; returns (xhat, trace, warnings).
  struct Output {
    ComplexTensor xhat;
    SolverTrace trace;
    std::vector<std::string> warnings;
  };
  Output run(const ComplexTensor& y, const ForwardModel& A,
             const ComplexTensor* reference) const;
};

SolverSpec parse_solver_config(const nlohmann::json& j, const ForwardModel& model,
                               const std::string& base_dir);

std::shared_ptr<Denoiser> parse_denoiser(const nlohmann::json& j, const ForwardModel& model,
                                         const std::string& base_dir);

InnerSpec parse_inner(const nlohmann::json& j);

}  // namespace pnpmri
