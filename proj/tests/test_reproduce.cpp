#include "localflow/reproduce.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace localflow;
using std::numbers::pi;

namespace {

std::filesystem::path out_dir(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("localflow_reproduce_" + name);
}

}  // namespace

TEST(Reproduce, AngleResolution) {
  const auto candidates = entangled_angle_candidates();
  ASSERT_FALSE(candidates.empty());
  const AngleReading r = resolve_entangled_angles();
  EXPECT_NEAR(r.sigma1_squared, std::pow(std::cos(3 * pi / 20), 2), 1e-12);
  // none of the literal readings reproduces the reference corner
  EXPECT_GT(std::abs(candidates[0].sigma1_squared - 0.793893), 1e-3);
  EXPECT_GT(std::abs(candidates[1].sigma1_squared - 0.793893), 1e-3);
}

TEST(Reproduce, ExampleStates) {
  EXPECT_NEAR(separable_example_state().amplitudes().norm(), 1.0, 1e-14);
  const auto v = three_qubit_example_state();
  EXPECT_NEAR(v[7].real(), std::sqrt(0.23), 1e-15);
}

TEST(Reproduce, AllScenariosPass) {
  for (auto name : reproduce_scenarios()) {
    const auto dir = out_dir(std::string(name));
    const ReproduceReport rep = reproduce(name, dir);
    EXPECT_TRUE(rep.passed()) << name;
    for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << name << ": " << c.name << " = " << c.value;
    for (const auto& f : rep.files) EXPECT_TRUE(std::filesystem::exists(f)) << f;
    std::filesystem::remove_all(dir);
  }
}

TEST(Reproduce, UnknownScenarioThrows) {
  EXPECT_THROW(reproduce("fig3", out_dir("unknown")), std::invalid_argument);
}
