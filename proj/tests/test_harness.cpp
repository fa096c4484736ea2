#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "pnpmri/experiment.hpp"
#include "pnpmri/image_io.hpp"
#include "pnpmri/metrics.hpp"
#include "pnpmri/phantom.hpp"
#include "pnpmri/rng.hpp"
#include "pnpmri/tensor_io.hpp"

using namespace pnpmri;

namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pnpmri_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("phantom generation") {
  SECTION("no ellipses gives a zero tensor") {
    PhantomSpec spec;
    spec.nx = spec.ny = 8;
    spec.nt = 2;
    CHECK(norm(make_phantom(spec)) == 0.0);
  }
  SECTION("a static ellipse repeats across frames") {
    PhantomSpec spec;
    spec.nx = spec.ny = 16;
    spec.nt = 4;
    spec.ellipses = {{0.5, 0.5, 0.25, 0.2, 0.9, 0.0, 0.0}};
    const ComplexTensor x = make_phantom(spec);
    for (std::size_t p = 0; p < 16 * 16; ++p)
      for (std::size_t t = 1; t < 4; ++t)
        REQUIRE(x.data[p * 4 + t] == x.data[p * 4]);
  }
  SECTION("bit-identical across runs, bounded magnitude") {
    const PhantomSpec spec = random_phantom_spec(16, 16, 4, 5, 99);
    const ComplexTensor a = make_phantom(spec);
    const ComplexTensor b = make_phantom(spec);
    REQUIRE(std::memcmp(a.data.data(), b.data.data(), a.size() * sizeof(cplx)) == 0);
    for (const cplx& v : a.data) REQUIRE(std::abs(v) <= 1.0 + 1e-12);
  }
  SECTION("degenerate axes are rejected") {
    PhantomSpec spec;
    spec.ellipses = {{0.5, 0.5, 0.0, 0.2, 1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(make_phantom(spec), ConfigError);
  }
}

TEST_CASE("coil map generation") {
  SECTION("a single coil normalizes to unit magnitude") {
    const CoilMaps cm = make_coilmaps(8, 8, 1, 7);
    for (const cplx& v : cm.maps) REQUIRE(std::abs(std::abs(v) - 1.0) < 1e-12);
  }
  SECTION("sum of squares holds for twelve coils") {
    const CoilMaps cm = make_coilmaps(8, 8, 12, 8);
    cm.validate(1e-12);
    SUCCEED();
  }
  SECTION("reproducible from the seed") {
    const CoilMaps a = make_coilmaps(8, 8, 4, 9);
    const CoilMaps b = make_coilmaps(8, 8, 4, 9);
    REQUIRE(std::memcmp(a.maps.data(), b.maps.data(), a.maps.size() * sizeof(cplx)) == 0);
  }
}

TEST_CASE("sampling pattern generation") {
  SECTION("unit acceleration samples every line") {
    const SamplingPattern p =
        make_sampling(8, 8, 3, 1.0, SamplingScheme::uniform_random, 2.0, 2, 10);
    for (const auto& f : p.frames) REQUIRE(f.size() == 8);
  }
  SECTION("line budget and wrapped-central calibration lines") {
    const SamplingPattern p =
        make_sampling(16, 144, 4, 10.0, SamplingScheme::variable_density, 2.0, 4, 11);
    for (const auto& f : p.frames) {
      REQUIRE((f.size() == 14 || f.size() == 15));
      // the four wrapped-central lines 0, 1, 143, 2
      for (std::uint32_t line : {0u, 1u, 143u, 2u})
        REQUIRE(std::find(f.begin(), f.end(), line) != f.end());
    }
  }
  SECTION("frames differ under a fixed master seed") {
    const SamplingPattern p =
        make_sampling(8, 32, 3, 4.0, SamplingScheme::variable_density, 2.0, 2, 12);
    CHECK(p.frames[0] != p.frames[1]);
    CHECK(p.frames[1] != p.frames[2]);
  }
  SECTION("infeasible calibration request is rejected") {
    CHECK_THROWS_AS(make_sampling(8, 32, 2, 16.0, SamplingScheme::uniform_random, 2.0, 4, 13),
                    ConfigError);
  }
  SECTION("round trip through JSON") {
    const SamplingPattern p =
        make_sampling(8, 16, 2, 2.0, SamplingScheme::variable_density, 2.0, 2, 14);
    const SamplingPattern q = SamplingPattern::from_json(p.to_json());
    CHECK(q.frames == p.frames);
    CHECK(q.nx == p.nx);
  }
}

TEST_CASE("measurement noise") {
  ForwardModel A = oracles::make_test_model(32, 32, 8, 4, 2.0, 1.0, 15);
  const ComplexTensor truth = oracles::random_tensor(A.image_shape(), 16);
  const ComplexTensor y = A.apply(truth);

  SECTION("infinite SNR is a sentinel pass-through") {
    const auto [noisy, sigma2] = add_noise(y, std::numeric_limits<double>::infinity(), 17);
    CHECK(sigma2 == 0.0);
    CHECK(norm(noisy - y) == 0.0);
  }
  SECTION("realized SNR lands within half a dB at large sample counts") {
    REQUIRE(y.size() >= 10000);
    const auto [noisy, sigma2] = add_noise(y, 20.0, 18);
    const double snr = 10.0 * std::log10(norm2(y) / norm2(noisy - y));
    CHECK(std::abs(snr - 20.0) < 0.5);
    CHECK(sigma2 > 0.0);
  }
  SECTION("reproducible from the seed") {
    const auto [n1, s1] = add_noise(y, 24.0, 19);
    const auto [n2, s2] = add_noise(y, 24.0, 19);
    CHECK(s1 == s2);
    CHECK(std::memcmp(n1.data.data(), n2.data.data(), n1.size() * sizeof(cplx)) == 0);
  }
  SECTION("empty input is rejected") {
    CHECK_THROWS_AS(add_noise(ComplexTensor{}, 20.0, 20), ConfigError);
  }
}

TEST_CASE("percentile and image export") {
  ComplexTensor t({4, 4, 1});
  for (std::size_t i = 0; i < 16; ++i) t.data[i] = cplx(double(i + 1), 0.0);
  CHECK(magnitude_percentile(t, 100.0) == 16.0);
  CHECK(magnitude_percentile(t, 50.0) == 8.0);

  const fs::path dir = fresh_dir("pgm");
  write_magnitude_pgm(t, 0, 16.0, 1.0, (dir / "a.pgm").string());
  const std::string bytes = read_bytes(dir / "a.pgm");
  CHECK(bytes.rfind("P5\n4 4\n255\n", 0) == 0);
  CHECK(bytes.size() == std::string("P5\n4 4\n255\n").size() + 16);
}

TEST_CASE("full-data identity experiment recovers the phantom") {
  ExperimentSpec spec;
  spec.phantom = random_phantom_spec(16, 16, 2, 3, 21);
  spec.coils = 2;
  spec.R = 1.0;
  spec.snr_db = std::numeric_limits<double>::infinity();
  spec.acs_lines = 2;
  spec.solvers.push_back(
      {"identity_fista",
       nlohmann::json{{"type", "pnp"},
                      {"algo", "fista"},
                      {"eta", "auto"},
                      {"sigma2", "auto"},
                      {"max_iters", 60},
                      {"denoiser", {{"kind", "identity"}}}}});
  const fs::path dir = fresh_dir("full");
  const ExperimentReport report = run_experiment(spec, dir.string());
  CHECK(report.adjoint.rsnr_db >= 120.0);  // adjoint is exact inversion at R=1
  CHECK(report.solvers.at(0).rsnr_db >= 120.0);
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "identity_fista" / "trace.csv"));
  CHECK(fs::exists(dir / "identity_fista" / "err6_f00.pgm"));
}

TEST_CASE("tight-frame thresholding beats the zero-filled baseline at R=4") {
  ExperimentSpec spec;
  spec.phantom = random_phantom_spec(32, 32, 4, 4, 31);
  spec.coils = 4;
  spec.R = 4.0;
  spec.snr_db = 30.0;
  spec.acs_lines = 3;
  spec.solvers.push_back({"bfista",
                          nlohmann::json{{"type", "pnp"},
                                         {"algo", "bfista"},
                                         {"eta", "auto"},
                                         {"sigma2", "auto"},
                                         {"lambda", 0.002},
                                         {"max_iters", 120},
                                         {"trace_ce", false}}});
  const fs::path dir = fresh_dir("margin32");
  const ExperimentReport report = run_experiment(spec, dir.string());
  CHECK(report.solvers.at(0).rsnr_db - report.adjoint.rsnr_db >= 3.0);
}

TEST_CASE("experiments are byte-reproducible") {
  ExperimentSpec spec;
  spec.phantom = random_phantom_spec(16, 16, 2, 3, 22);
  spec.coils = 2;
  spec.R = 2.0;
  spec.snr_db = 30.0;
  spec.acs_lines = 2;
  spec.solvers.push_back({"bfista",
                          nlohmann::json{{"type", "pnp"},
                                         {"algo", "bfista"},
                                         {"eta", "auto"},
                                         {"sigma2", "auto"},
                                         {"lambda", 0.002},
                                         {"max_iters", 25}}});
  const fs::path d1 = fresh_dir("det1");
  const fs::path d2 = fresh_dir("det2");
  run_experiment(spec, d1.string());
  run_experiment(spec, d2.string());
  for (const char* rel : {"summary.csv", "bfista/trace.csv", "bfista/xhat.ct", "y.ct",
                          "reference_f00.pgm", "bfista/err6_f01.pgm", "pattern.json"})
    REQUIRE(read_bytes(d1 / rel) == read_bytes(d2 / rel));
}

TEST_CASE("command-line round trip") {
  const fs::path dir = fresh_dir("cli");
  const std::string cli = PNPMRI_CLI_PATH;

  // simulate a small experiment
  {
    ExperimentSpec spec;
    spec.phantom = random_phantom_spec(16, 16, 2, 3, 23);
    spec.coils = 2;
    spec.R = 2.0;
    spec.snr_db = 30.0;
    spec.acs_lines = 2;
    std::ofstream f(dir / "spec.json");
    f << spec.to_json().dump(2);
  }
  REQUIRE(std::system((cli + " simulate --spec " + (dir / "spec.json").string() + " --out " +
                       (dir / "sim").string() + " > " + (dir / "sim.log").string())
                          .c_str()) == 0);

  // reconstruct from the simulated data with an external identity denoiser
  {
    std::ofstream f(dir / "cfg.json");
    f << R"({"type":"pnp","algo":"admm","eta":"auto","sigma2":"auto","max_iters":5,
            "inner":{"kind":"cg","iters":4},
            "denoiser":{"kind":"external","command":"cat"}})";
  }
  REQUIRE(std::system((cli + " recon --config " + (dir / "cfg.json").string() + " --y " +
                       (dir / "sim/y.ct").string() + " --model " +
                       (dir / "sim/model.json").string() + " --out " + (dir / "rec").string() +
                       " --ref " + (dir / "sim/ground_truth.ct").string() + " > " +
                       (dir / "rec.log").string())
                          .c_str()) == 0);
  REQUIRE(fs::exists(dir / "rec/xhat.ct"));

  // evaluate the estimate against the ground truth
  REQUIRE(std::system((cli + " evaluate --ref " + (dir / "sim/ground_truth.ct").string() +
                       " --est " + (dir / "rec/xhat.ct").string() + " > " +
                       (dir / "eval.log").string())
                          .c_str()) == 0);
  const std::string eval_out = read_bytes(dir / "eval.log");
  CHECK(eval_out.find("rsnr_db=") != std::string::npos);

  // bad usage exits with 1
  const int bad = std::system((cli + " evaluate --ref missing.ct 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(bad) == 1);

  // a failing external denoiser surfaces as a numerical failure (exit 2)
  {
    std::ofstream f(dir / "badcfg.json");
    f << R"({"type":"pnp","algo":"admm","eta":1.0,"sigma2":1.0,"max_iters":2,
            "denoiser":{"kind":"external","command":"false"}})";
  }
  const int numfail = std::system((cli + " recon --config " + (dir / "badcfg.json").string() +
                                   " --y " + (dir / "sim/y.ct").string() + " --model " +
                                   (dir / "sim/model.json").string() + " --out " +
                                   (dir / "rec2").string() + " 2> /dev/null")
                                      .c_str());
  CHECK(WEXITSTATUS(numfail) == 2);

  // a tiny ensemble benchmark
  {
    std::ofstream f(dir / "amp.json");
    f << R"({"M":50,"N":100,"rho":0.1,"sigma2":1e-4,"iters":4,"num_seeds":2,
            "mc_samples":20000})";
  }
  REQUIRE(std::system((cli + " amp-bench --spec " + (dir / "amp.json").string() + " --out " +
                       (dir / "amp").string() + " > " + (dir / "amp.log").string())
                          .c_str()) == 0);
  REQUIRE(fs::exists(dir / "amp/amp_seed1000.csv"));
}
