#pragma once

// Scripted worked examples with pinned seeds. Each scenario writes
// plot-ready files and returns named checks against reference values.

#include "localflow/flow.hpp"
#include "localflow/schmidt.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace localflow {

/// exp(i a sigma_0 x sigma_1)|up up> with a = 1/(4 pi).
PureState separable_example_state();

/// One reading of the construction exp(i a sigma_2 x sigma_0) exp(i b sigma_2 x sigma_2)|up up>.
struct AngleReading {
  std::string label;
  double local_angle = 0.0;
  double entangling_angle = 0.0;
  double sigma1_squared = 0.0;  // SVD-oracle dominant Schmidt weight
};

/// Candidate readings of the entangled example's exponents with their
/// oracle Schmidt weights.
std::vector<AngleReading> entangled_angle_candidates();
/// First candidate whose dominant Schmidt weight matches the reference
/// limiting-state corner 0.793893 within 1e-5.
AngleReading resolve_entangled_angles();
PureState entangled_example_state(const AngleReading& reading);

/// exp(i pi/4 sigma_2 x sigma_0) exp(i pi/4 sigma_0 x sigma_1)|psi_S(pi/4)>.
PureState extra_phase_example_state();

/// (0.3+0.1i, 0.2, 0.3, 0.3, 0.4, 0.2, 0.5, sqrt(1-0.77)).
PureState three_qubit_example_state();

struct ReproduceCheck {
  /// within: |value - expected| <= tolerance; below / above: strict bound on value.
  enum class Relation { within, below, above };
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Relation relation = Relation::within;
};

struct ReproduceReport {
  std::string scenario;
  std::vector<ReproduceCheck> checks;
  std::vector<std::string> notes;
  std::vector<std::filesystem::path> files;

  bool passed() const;
};

/// Scenarios: "fig1", "fig2", "example-2q-phase", "example-3q".
/// Throws std::invalid_argument for an unknown name.
ReproduceReport reproduce(std::string_view scenario, const std::filesystem::path& out_dir,
                          std::uint64_t seed = 0);

std::vector<std::string_view> reproduce_scenarios();

}  // namespace localflow
