#pragma once

// Local gradient flow dU/ds = U P[U^dagger rho0 U, rhoT], integrated with
// explicit steps retracted through the exact exponential, a backtracking
// line search, and Hessian-based classification of the endpoint.

#include "localflow/landscape.hpp"
#include "localflow/tensor.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace localflow {

struct FlowConfig {
  double step = 0.5;             // initial (and maximal) step size
  int max_steps = 20000;         // accepted + rejected step budget
  double grad_tol = 1e-10;       // convergence threshold on ||P G||_F
  double backtrack_factor = 0.5; // step shrink factor on a fidelity decrease
  double kick_amplitude = 1e-3;  // Frobenius norm of a saddle-escape kick
  std::uint64_t seed = 0;
  bool saddle_kicks = true;      // at most kMaxKicks kicks per run
  bool full_group = false;       // debug: use the unprojected gradient

  /// Throws std::invalid_argument on non-positive values or backtrack_factor >= 1.
  void validate() const;
};

inline constexpr int kMaxKicks = 5;
inline constexpr int kStallWindow = 200;
inline constexpr double kStallImprovement = 1e-14;

enum class FlowOutcome { converged_max, converged_saddle, stalled, max_steps };

std::string_view to_string(FlowOutcome o);

struct FlowSample {
  double s = 0.0;  // accumulated flow parameter
  double fidelity = 0.0;
  double grad_norm = 0.0;
};

struct FlowTrace {
  std::vector<FlowSample> samples;
  FlowOutcome outcome = FlowOutcome::max_steps;
  UnitaryOp final_unitary;
  int steps = 0;       // accepted steps
  int kicks_used = 0;
  HessianSpectrum endpoint_spectrum;  // set when a critical point was reached

  double final_fidelity() const { return samples.empty() ? 0.0 : samples.back().fidelity; }
};

struct FlowStepResult {
  UnitaryOp unitary;
  double fidelity = 0.0;
};

/// U exp(step * gradient_local). The caller decides whether to accept.
FlowStepResult flow_step(const UnitaryOp& u, const DensityMatrix& rho0, const DensityMatrix& rhoT,
                         double step);

/// How a critical point looks to the flow.
enum class EndpointKind {
  strict_maximum,      // maximum, flat only along directions that fix U^dagger rho0 U
  degenerate_maximum,  // maximum with extra flat directions that move the state
  saddle,
  minimum,
  degenerate,
};

std::string_view to_string(EndpointKind k);

struct EndpointClass {
  EndpointKind kind = EndpointKind::degenerate;
  HessianSpectrum spectrum;
  int hessian_nullity = 0;
  int stabilizer_dim = 0;
};

/// Zero-eigenvalue threshold for counting flat Hessian directions.
inline constexpr double kNullityTol = 1e-6;

EndpointClass classify_endpoint(const DensityMatrix& rho0, const UnitaryOp& u,
                                const DensityMatrix& rhoT);

/// Runs the flow from u0. converged_max is reported only for strict maxima;
/// saddles, minima and degenerate maxima (a continuum of maximizing states,
/// as for targets rho_S(0), rho_S(pi/2), rho_S(pi)) end as converged_saddle
/// once kicks are exhausted. Never throws for budget exhaustion.
FlowTrace run_flow(const DensityMatrix& rho0, const DensityMatrix& rhoT, const UnitaryOp& u0,
                   const FlowConfig& cfg);

/// U_c^dagger rho0 U_c for the trace's final unitary.
DensityMatrix limiting_state(const FlowTrace& trace, const DensityMatrix& rho0);

/// Header `s,fidelity,grad_norm`, one sample per line, 17 significant digits.
void write_trace_csv(std::ostream& os, const FlowTrace& trace);

}  // namespace localflow
