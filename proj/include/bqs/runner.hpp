#pragma once

#include <cstdint>
#include <iosfwd>

#include "bqs/elliptic.hpp"
#include "bqs/field.hpp"
#include "bqs/nonlinearity.hpp"
#include "bqs/operator_model.hpp"
#include "bqs/scenario_config.hpp"

namespace bqs {

enum class RunMode { Run, Linear, Check, Convergence };

/// A validated config materialized into solver inputs.
struct BuiltScenario {
  GridPtr grid;
  EllipticForm form;
  OperatorSpec op;
  NonlinearitySpec f;
  Field phi, psi;
  int components = 1;
};

BuiltScenario build_scenario(const ScenarioConfig& cfg);

/// Execute one scenario end to end (solve or analysis, file emission,
/// console summary).  Returns the process exit code: 0 completed, 2 blow-up
/// suspected, 3 iteration failure.  Config and I/O problems are thrown; the
/// CLI maps them to exit 4.
int run_scenario(const ScenarioConfig& cfg, RunMode mode, std::uint64_t seed, bool quiet,
                 std::ostream& out);

}  // namespace bqs
