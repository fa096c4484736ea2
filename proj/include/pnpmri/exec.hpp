#pragma once

namespace pnpmri {

/// Execution policy for the data-parallel kernels (forward model application,
/// UWT subband filtering, Monte-Carlo state evolution). Both paths produce
/// bit-identical results: reductions use a fixed summation order, so the
/// policy is purely a performance choice.
enum class ExecPolicy { serial, parallel };

/// Process-wide default: parallel when built with OpenMP (override with the
/// environment variable PNPMRI_EXEC=serial), serial otherwise.
ExecPolicy default_exec();
void set_default_exec(ExecPolicy p);

int exec_thread_count();

}  // namespace pnpmri
