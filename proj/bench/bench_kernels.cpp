// Timing comparison of the serial reference kernels against the OpenMP paths:
// forward/adjoint model application, undecimated Haar analysis/synthesis, and
// the Monte-Carlo effective-noise expectation. Outputs one row per kernel.
#include <chrono>
#include <cstdio>
#include <functional>

#include "pnpmri/amp.hpp"
#include "pnpmri/exec.hpp"
#include "pnpmri/phantom.hpp"
#include "pnpmri/forward_model.hpp"
#include "pnpmri/transforms.hpp"

using namespace pnpmri;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-22s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", exec_thread_count());

  const std::size_t nx = 128, ny = 128, nt = 16, C = 8;
  const PhantomSpec pspec = random_phantom_spec(nx, ny, nt, 6, 1);
  const ComplexTensor x = make_phantom(pspec);
  const CoilMaps coils = make_coilmaps(nx, ny, C, 2);
  const SamplingPattern pattern =
      make_sampling(nx, ny, nt, 4.0, SamplingScheme::variable_density, 2.0, 4, 3);

  const ForwardModel serial_model(pattern, coils, 1.0, ExecPolicy::serial);
  const ForwardModel parallel_model(pattern, coils, 1.0, ExecPolicy::parallel);
  const ComplexTensor y = serial_model.apply(x);

  report("forward model",
         time_ms([&] { serial_model.apply(x); }, 5),
         time_ms([&] { parallel_model.apply(x); }, 5));
  report("adjoint model",
         time_ms([&] { serial_model.apply_adjoint(y); }, 5),
         time_ms([&] { parallel_model.apply_adjoint(y); }, 5));

  report("uwt analyze",
         time_ms([&] { uwt_analyze(x, 1, ExecPolicy::serial); }, 5),
         time_ms([&] { uwt_analyze(x, 1, ExecPolicy::parallel); }, 5));
  const ComplexTensor coeffs = uwt_analyze(x, 1, ExecPolicy::serial);
  report("uwt synthesize",
         time_ms([&] { uwt_synthesize(coeffs, 1, ExecPolicy::serial); }, 5),
         time_ms([&] { uwt_synthesize(coeffs, 1, ExecPolicy::parallel); }, 5));

  const SoftThreshAmpDenoiser f(1.14);
  report("state evolution MC",
         time_ms([&] { state_evolution({0.1}, f, 1e-4, 1000, 2000, 10, 400000, 9,
                                       ExecPolicy::serial); }, 2),
         time_ms([&] { state_evolution({0.1}, f, 1e-4, 1000, 2000, 10, 400000, 9,
                                       ExecPolicy::parallel); }, 2));
  return 0;
}
