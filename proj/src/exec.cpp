#include "pnpmri/exec.hpp"

#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pnpmri {

namespace {

ExecPolicy initial_policy() {
#ifdef _OPENMP
  const char* env = std::getenv("PNPMRI_EXEC");
  if (env && std::strcmp(env, "serial") == 0) return ExecPolicy::serial;
  return ExecPolicy::parallel;
#else
  return ExecPolicy::serial;
#endif
}

ExecPolicy& policy_slot() {
  static ExecPolicy p = initial_policy();
  return p;
}

}  // namespace

ExecPolicy default_exec() { return policy_slot(); }

void set_default_exec(ExecPolicy p) { policy_slot() = p; }

int exec_thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace pnpmri
