#pragma once

#include "pfl/config.hpp"

namespace pfl {

// Subcommand entry points; each writes its outputs plus the resolved config
// into config.output.directory and returns a process exit code.
int run_soliton(const RunConfig& cfg);
int run_audit(const RunConfig& cfg);
int run_simulate(const RunConfig& cfg);
int run_experiment(const RunConfig& cfg);
int run_convergence(const RunConfig& cfg);

int dispatch(const RunConfig& cfg);

}  // namespace pfl
