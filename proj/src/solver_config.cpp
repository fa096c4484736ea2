#include "pnpmri/solver_config.hpp"

#include "pnpmri/errors.hpp"
#include "pnpmri/tensor_io.hpp"

namespace pnpmri {

namespace {

double auto_or_number(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "auto") return -1.0;  // sentinel resolved later
    throw ConfigError(std::string("solver config: ") + key + " must be a number or \"auto\"");
  }
  return v.get<double>();
}

std::string join_path(const std::string& base, const std::string& rel) {
  if (rel.empty() || rel.front() == '/') return rel;
  if (base.empty()) return rel;
  return base + "/" + rel;
}

}  // namespace

InnerSpec parse_inner(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "cg");
  if (kind == "exact") return InnerSpec::exact();
  const int iters = j.value("iters", 4);
  if (kind == "cg") return InnerSpec::cg(iters);
  if (kind == "gd") return InnerSpec::gd(iters, j.value("step", 0.0));
  throw ConfigError("solver config: unknown inner solver kind '" + kind + "'");
}

std::shared_ptr<Denoiser> parse_denoiser(const nlohmann::json& j, const ForwardModel& model,
                                         const std::string& base_dir) {
  const std::string kind = j.value("kind", "identity");
  if (kind == "identity") return std::make_shared<IdentityDenoiser>();
  if (kind == "tdt_orth" || kind == "tdt_uwt") {
    const double tau = j.value("tau", 0.0);
    const int levels = j.value("levels", 1);
    const auto tf = kind == "tdt_orth" ? TdtDenoiser::Transform::orth_haar
                                       : TdtDenoiser::Transform::uwt_haar;
    return std::make_shared<TdtDenoiser>(tf, tau, levels, model.exec());
  }
  if (kind == "linear_symmetric") {
    auto kernel = j.at("kernel").get<std::vector<double>>();
    const double gain = j.value("gain", 1.0);
    return std::make_shared<LinearSymmetricDenoiser>(std::move(kernel), model.image_shape(), gain);
  }
  if (kind == "mmse_kde") {
    const std::string path = join_path(base_dir, j.at("points_path").get<std::string>());
    const ComplexTensor pts = tensor_read(path);
    if (pts.ndim() != 2) throw ConfigError("mmse_kde: points tensor must be [T, dim]");
    TrainingSet ts;
    ts.eta = j.at("eta").get<double>();
    for (std::size_t t = 0; t < pts.dim(0); ++t) {
      std::vector<double> p(pts.dim(1));
      for (std::size_t i = 0; i < pts.dim(1); ++i) p[i] = pts.data[t * pts.dim(1) + i].real();
      ts.points.push_back(std::move(p));
    }
    return std::make_shared<MmseKdeDenoiser>(std::move(ts));
  }
  if (kind == "external") return std::make_shared<ExternalDenoiser>(j.at("command").get<std::string>());
  throw ConfigError("solver config: unknown denoiser kind '" + kind + "'");
}

SolverSpec parse_solver_config(const nlohmann::json& j, const ForwardModel& model,
                               const std::string& base_dir) {
  SolverSpec spec;
  const std::string type = j.value("type", "pnp");

  double sigma2 = auto_or_number(j, "sigma2", 1.0);
  if (sigma2 == -1.0) sigma2 = std::max(model.sigma2(), 1e-12);
  double eta = auto_or_number(j, "eta", 1.0);

  const std::string init = j.value("init", "adjoint");

  if (type == "pnp") {
    spec.kind = SolverSpec::Kind::pnp;
    PnPConfig& c = spec.pnp;
    const std::string algo = j.value("algo", "admm");
    if (algo == "admm")
      c.algo = PnPAlgo::admm;
    else if (algo == "fista")
      c.algo = PnPAlgo::fista;
    else if (algo == "pds")
      c.algo = PnPAlgo::pds;
    else if (algo == "bfista")
      c.algo = PnPAlgo::bfista;
    else
      throw ConfigError("solver config: unknown pnp algo '" + algo + "'");
    if (eta == -1.0) {
      const double an = model.op_norm();
      eta = (c.algo == PnPAlgo::fista || c.algo == PnPAlgo::bfista)
                ? 0.9 * sigma2 / (an * an)
                : sigma2;
    }
    c.eta = eta;
    c.sigma2 = sigma2;
    c.gamma = j.value("gamma", 0.0);
    c.lambda = j.value("lambda", 0.0);
    c.uwt_levels = j.value("uwt_levels", 1);
    c.max_iters = j.value("max_iters", 100);
    if (j.contains("inner")) c.inner = parse_inner(j.at("inner"));
    if (j.contains("init_path")) {
      c.init = InitKind::given;
      c.init_tensor = tensor_read(join_path(base_dir, j.at("init_path").get<std::string>()));
    } else if (init == "zero") {
      c.init = InitKind::zero;
    } else if (init == "adjoint") {
      c.init = InitKind::adjoint;
    } else {
      throw ConfigError("solver config: init must be 'zero', 'adjoint', or an init_path");
    }
    c.trace_ce = j.value("trace_ce", true);
    if (c.algo != PnPAlgo::bfista)
      spec.denoiser = parse_denoiser(j.value("denoiser", nlohmann::json{{"kind", "identity"}}),
                                     model, base_dir);
    return spec;
  }
  if (type == "red") {
    spec.kind = SolverSpec::Kind::red;
    RedConfig& c = spec.red;
    const std::string variant = j.value("variant", "apg");
    if (variant == "apg")
      c.variant = RedVariant::apg;
    else if (variant == "gd")
      c.variant = RedVariant::gd;
    else if (variant == "fp")
      c.variant = RedVariant::fp;
    else
      throw ConfigError("solver config: unknown red variant '" + variant + "'");
    if (eta == -1.0) eta = sigma2;
    c.eta = eta;
    c.sigma2 = sigma2;
    c.L = j.value("L", 1.0);
    c.max_iters = j.value("max_iters", 100);
    if (j.contains("inner")) c.inner = parse_inner(j.at("inner"));
    if (j.contains("init_path")) {
      c.init = RedInitKind::given;
      c.init_tensor = tensor_read(join_path(base_dir, j.at("init_path").get<std::string>()));
    } else if (init == "zero") {
      c.init = RedInitKind::zero;
    } else if (init == "adjoint") {
      c.init = RedInitKind::adjoint;
    } else {
      throw ConfigError("solver config: init must be 'zero', 'adjoint', or an init_path");
    }
    c.trace_ce = j.value("trace_ce", true);
    spec.denoiser = parse_denoiser(j.value("denoiser", nlohmann::json{{"kind", "identity"}}), model, base_dir);
    return spec;
  }
  throw ConfigError("solver config: unknown type '" + type + "'");
}

SolverSpec::Output SolverSpec::run(const ComplexTensor& y, const ForwardModel& A,
                                   const ComplexTensor* reference) const {
  Output out;
  if (kind == Kind::pnp) {
    PnPConfig cfg = pnp;
    cfg.reference = reference;
    PnPResult r;
    switch (cfg.algo) {
      case PnPAlgo::admm:
        r = pnp_admm(y, A, *denoiser, cfg);
        break;
      case PnPAlgo::fista:
        r = pnp_fista(y, A, *denoiser, cfg);
        break;
      case PnPAlgo::pds:
        r = pnp_pds(y, A, *denoiser, cfg);
        break;
      case PnPAlgo::bfista:
        r = bfista(y, A, cfg);
        break;
    }
    out.xhat = std::move(r.xhat);
    out.trace = std::move(r.trace);
    out.warnings = std::move(r.warnings);
  } else {
    RedConfig cfg = red;
    cfg.reference = reference;
    RedResult r = red_solve(y, A, *denoiser, cfg);
    out.xhat = std::move(r.xhat);
    out.trace = std::move(r.trace);
    out.warnings = std::move(r.warnings);
  }
  return out;
}

}  // namespace pnpmri
