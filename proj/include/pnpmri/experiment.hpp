#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "pnpmri/phantom.hpp"
#include "pnpmri/solver_config.hpp"

namespace pnpmri {

/// Full synthetic-acquisition experiment: phantom, coil maps, per-frame
/// sampling at acceleration R, k-space noise at snr_db, then one
/// reconstruction per named solver config. The whole pipeline is a pure
/// function of the spec: repeated runs write byte-identical CSVs and images
/// (trace CSVs omit the wall-time column for that reason).
struct ExperimentSpec {
  PhantomSpec phantom;
  std::size_t coils = 4;
  double R = 4.0;
  double snr_db = 30.0;
  SamplingScheme scheme = SamplingScheme::variable_density;
  double density_exponent = 2.0;
  std::size_t acs_lines = 4;
  std::uint64_t coil_seed = 1, sampling_seed = 2, noise_seed = 3;

  struct Entry {
    std::string name;
    nlohmann::json config;
  };
  std::vector<Entry> solvers;

  nlohmann::json to_json() const;
  static ExperimentSpec from_json(const nlohmann::json& j);
};

struct ExperimentReport {
  struct Row {
    std::string name;
    double rsnr_db = 0.0;
    double nmse_db = 0.0;
  };
  Row adjoint;             // zero-filled A^H y baseline
  std::vector<Row> solvers;
  double sigma2_realized = 0.0;
  std::string out_dir;
};

/// Writes ground_truth.ct, y.ct, coils.ct, pattern.json, model.json,
/// summary.csv, reference/recovery/x6-error PGMs per frame, and per-solver
/// xhat.ct + trace.csv under out_dir/<name>/.
ExperimentReport run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

/// Rebuilds a ForwardModel from a model.json written by run_experiment
/// ({"sigma2":..., "pattern":{...}, "coils":"coils.ct"}, coil path relative
/// to the JSON's directory).
ForwardModel load_model(const std::string& model_json_path);

}  // namespace pnpmri
