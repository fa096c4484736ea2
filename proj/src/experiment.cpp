#include "pnpmri/experiment.hpp"

#include <filesystem>
#include <fstream>

#include "pnpmri/errors.hpp"
#include "pnpmri/image_io.hpp"
#include "pnpmri/metrics.hpp"
#include "pnpmri/tensor_io.hpp"
#include "pnpmri/trace.hpp"

namespace pnpmri {

namespace fs = std::filesystem;

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["phantom"] = {{"nx", phantom.nx},
                  {"ny", phantom.ny},
                  {"nt", phantom.nt},
                  {"edge", phantom.edge},
                  {"phase_ramp_x", phantom.phase_ramp_x},
                  {"phase_ramp_y", phantom.phase_ramp_y},
                  {"seed", phantom.seed}};
  auto& el = j["phantom"]["ellipses"];
  el = nlohmann::json::array();
  for (const Ellipse& e : phantom.ellipses)
    el.push_back({{"cx", e.cx},
                  {"cy", e.cy},
                  {"ax", e.ax},
                  {"ay", e.ay},
                  {"intensity", e.intensity},
                  {"mod_amp", e.mod_amp},
                  {"mod_phase", e.mod_phase}});
  j["coils"] = coils;
  j["R"] = R;
  j["snr_db"] = snr_db;
  j["scheme"] = scheme == SamplingScheme::uniform_random ? "uniform_random" : "variable_density";
  j["density_exponent"] = density_exponent;
  j["acs_lines"] = acs_lines;
  j["coil_seed"] = coil_seed;
  j["sampling_seed"] = sampling_seed;
  j["noise_seed"] = noise_seed;
  j["solvers"] = nlohmann::json::array();
  for (const Entry& e : solvers) j["solvers"].push_back({{"name", e.name}, {"config", e.config}});
  return j;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  const auto& p = j.at("phantom");
  s.phantom.nx = p.at("nx").get<std::size_t>();
  s.phantom.ny = p.at("ny").get<std::size_t>();
  s.phantom.nt = p.at("nt").get<std::size_t>();
  s.phantom.edge = p.value("edge", s.phantom.edge);
  s.phantom.phase_ramp_x = p.value("phase_ramp_x", s.phantom.phase_ramp_x);
  s.phantom.phase_ramp_y = p.value("phase_ramp_y", s.phantom.phase_ramp_y);
  s.phantom.seed = p.value("seed", std::uint64_t(0));
  if (p.contains("ellipses")) {
    for (const auto& ej : p.at("ellipses")) {
      Ellipse e;
      e.cx = ej.at("cx").get<double>();
      e.cy = ej.at("cy").get<double>();
      e.ax = ej.at("ax").get<double>();
      e.ay = ej.at("ay").get<double>();
      e.intensity = ej.value("intensity", 1.0);
      e.mod_amp = ej.value("mod_amp", 0.0);
      e.mod_phase = ej.value("mod_phase", 0.0);
      s.phantom.ellipses.push_back(e);
    }
  } else if (p.contains("random_ellipses")) {
    s.phantom = random_phantom_spec(s.phantom.nx, s.phantom.ny, s.phantom.nt,
                                    p.at("random_ellipses").get<std::size_t>(), s.phantom.seed);
    s.phantom.edge = p.value("edge", s.phantom.edge);
  }
  s.coils = j.value("coils", std::size_t(4));
  s.R = j.value("R", 4.0);
  s.snr_db = j.value("snr_db", 30.0);
  const std::string scheme = j.value("scheme", "variable_density");
  if (scheme == "uniform_random")
    s.scheme = SamplingScheme::uniform_random;
  else if (scheme == "variable_density")
    s.scheme = SamplingScheme::variable_density;
  else
    throw ConfigError("experiment: unknown sampling scheme '" + scheme + "'");
  s.density_exponent = j.value("density_exponent", 2.0);
  s.acs_lines = j.value("acs_lines", std::size_t(4));
  s.coil_seed = j.value("coil_seed", std::uint64_t(1));
  s.sampling_seed = j.value("sampling_seed", std::uint64_t(2));
  s.noise_seed = j.value("noise_seed", std::uint64_t(3));
  for (const auto& ej : j.value("solvers", nlohmann::json::array()))
    s.solvers.push_back({ej.at("name").get<std::string>(), ej.at("config")});
  return s;
}

ForwardModel load_model(const std::string& model_json_path) {
  std::ifstream f(model_json_path);
  if (!f) throw IoError("load_model: cannot open " + model_json_path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("load_model: bad JSON: ") + e.what());
  }
  const double sigma2 = j.at("sigma2").get<double>();
  const SamplingPattern pattern = SamplingPattern::from_json(j.at("pattern").dump());
  const std::string coils_rel = j.at("coils").get<std::string>();
  const fs::path coils_path =
      coils_rel.empty() || coils_rel.front() == '/'
          ? fs::path(coils_rel)
          : fs::path(model_json_path).parent_path() / coils_rel;
  const CoilMaps coils = CoilMaps::from_tensor(tensor_read(coils_path.string()));
  return ForwardModel(pattern, coils, sigma2);
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("experiment: cannot open " + path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("experiment: write failed for " + path);
}

void write_frames(const ComplexTensor& cine, double white, double gain, const std::string& stem) {
  char name[32];
  for (std::size_t t = 0; t < cine.dim(2); ++t) {
    std::snprintf(name, sizeof name, "_f%02zu.pgm", t);
    write_magnitude_pgm(cine, t, white, gain, stem + name);
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
  fs::create_directories(out_dir);

  const ComplexTensor truth = make_phantom(spec.phantom);
  const CoilMaps coils = make_coilmaps(spec.phantom.nx, spec.phantom.ny, spec.coils,
                                       spec.coil_seed);
  const SamplingPattern pattern =
      make_sampling(spec.phantom.nx, spec.phantom.ny, spec.phantom.nt, spec.R, spec.scheme,
                    spec.density_exponent, spec.acs_lines, spec.sampling_seed);

  ForwardModel clean_model(pattern, coils, 1.0);
  const ComplexTensor y_clean = clean_model.apply(truth);
  auto [y, sigma2] = add_noise(y_clean, spec.snr_db, spec.noise_seed);
  const double sigma2_eff = std::max(sigma2, 1e-12);
  ForwardModel model(pattern, coils, sigma2_eff);

  tensor_write(truth, out_dir + "/ground_truth.ct");
  tensor_write(y, out_dir + "/y.ct");
  tensor_write(coils.as_tensor(), out_dir + "/coils.ct");
  write_text(out_dir + "/pattern.json", pattern.to_json() + "\n");
  nlohmann::json model_json = {{"sigma2", sigma2_eff},
                               {"pattern", nlohmann::json::parse(pattern.to_json())},
                               {"coils", "coils.ct"}};
  write_text(out_dir + "/model.json", model_json.dump(2) + "\n");

  const double white = magnitude_percentile(truth, 99.0);
  write_frames(truth, white, 1.0, out_dir + "/reference");

  ExperimentReport report;
  report.out_dir = out_dir;
  report.sigma2_realized = sigma2;

  const ComplexTensor x_adj = model.apply_adjoint(y);
  {
    const Metrics m = rsnr(truth, x_adj);
    report.adjoint = {"adjoint", m.rsnr_db, m.nmse_db};
    const std::string dir = out_dir + "/adjoint";
    fs::create_directories(dir);
    tensor_write(x_adj, dir + "/xhat.ct");
    write_frames(x_adj, white, 1.0, dir + "/recon");
    write_frames(x_adj - truth, white, 6.0, dir + "/err6");
  }

  for (const ExperimentSpec::Entry& entry : spec.solvers) {
    SolverSpec solver = parse_solver_config(entry.config, model, out_dir);
    SolverSpec::Output out;
    try {
      out = solver.run(y, model, &truth);
    } catch (const Error& e) {
      throw NumericError("experiment: solver '" + entry.name + "' failed: " + e.what());
    }
    const Metrics m = rsnr(truth, out.xhat);
    report.solvers.push_back({entry.name, m.rsnr_db, m.nmse_db});

    const std::string dir = out_dir + "/" + entry.name;
    fs::create_directories(dir);
    tensor_write(out.xhat, dir + "/xhat.ct");
    out.trace.write_csv(dir + "/trace.csv", /*include_timing=*/false);
    write_frames(out.xhat, white, 1.0, dir + "/recon");
    write_frames(out.xhat - truth, white, 6.0, dir + "/err6");
  }

  std::string summary = "config,rsnr_db,nmse_db\n";
  summary += report.adjoint.name + "," + csv_double(report.adjoint.rsnr_db) + "," +
             csv_double(report.adjoint.nmse_db) + "\n";
  for (const auto& row : report.solvers)
    summary += row.name + "," + csv_double(row.rsnr_db) + "," + csv_double(row.nmse_db) + "\n";
  write_text(out_dir + "/summary.csv", summary);

  return report;
}

}  // namespace pnpmri
