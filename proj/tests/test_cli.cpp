#include "localflow/random.hpp"
#include "localflow/reproduce.hpp"
#include "localflow/schmidt.hpp"
#include "localflow/state_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace localflow;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("localflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd =
        std::string(LOCALFLOW_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  std::string state_file(const std::string& name, const PureState& psi) const {
    const fs::path p = dir_ / name;
    write_state_file(p, psi);
    return p.string();
  }

  fs::path dir_;
};

std::string value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 3;
  return text.substr(start, text.find('\n', start) - start);
}

std::vector<double> numbers(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> v;
  double x = 0.0;
  while (in >> x) v.push_back(x);
  return v;
}

}  // namespace

TEST_F(Cli, FlowInitialEqualsTarget) {
  const std::string f = state_file("up.txt", PureState::all_up(2));
  const CliResult r = run("flow --initial " + f + " --target " + f + " --trace " + (dir_ / "t.csv").string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(value_of(r.out, "final_fidelity")), 1.0, 1e-12);
  const std::string trace = slurp(dir_ / "t.csv");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 2);
}

TEST_F(Cli, FlowSeparableExample) {
  const std::string f = state_file("sep.txt", separable_example_state());
  const CliResult r = run("flow --initial " + f + " --target-theta 0.78539816339744828 --trace " +
                    (dir_ / "t.csv").string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(value_of(r.out, "final_fidelity")), 0.853553, 1e-5);
  EXPECT_EQ(value_of(r.out, "outcome"), "converged_max");
  EXPECT_NE(r.out.find("limiting_state ="), std::string::npos);
}

TEST_F(Cli, FlowBellTargetFromEntangledState) {
  const std::string f = state_file("ent.txt", entangled_example_state(resolve_entangled_angles()));
  const CliResult r = run("flow --initial " + f + " --target-theta 1.5707963267948966");
  EXPECT_EQ(r.code, 2) << r.out << r.err;
  EXPECT_FALSE(value_of(r.out, "outcome").empty());
}

TEST_F(Cli, FlowMalformedState) {
  const fs::path p = dir_ / "bad.txt";
  std::ofstream(p) << "2\n1 0\n0 zero\n0 0\n0 0\n";
  const std::string good = state_file("up.txt", PureState::all_up(2));
  const CliResult r = run("flow --initial " + p.string() + " --target " + good);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.txt:3:"), std::string::npos) << r.err;
}

TEST_F(Cli, FlowMissingTargetAndBadArguments) {
  const std::string good = state_file("up.txt", PureState::all_up(2));
  EXPECT_EQ(run("flow --initial " + good).code, 1);
  EXPECT_EQ(run("flow --initial " + good + " --target " + good + " --target-theta 1").code, 1);
  EXPECT_EQ(run("flow --initial " + (dir_ / "missing.txt").string() + " --target " + good).code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST_F(Cli, FlowTraceIsDeterministic) {
  Rng rng(1);
  const std::string a = state_file("a.txt", random_pure_state(3, rng));
  const std::string b = state_file("b.txt", random_pure_state(3, rng));
  for (const char* t : {"t1.csv", "t2.csv"}) {
    run("flow --seed 5 --initial " + a + " --target " + b + " --trace " + (dir_ / t).string());
  }
  const std::string t1 = slurp(dir_ / "t1.csv");
  EXPECT_FALSE(t1.empty());
  EXPECT_EQ(t1, slurp(dir_ / "t2.csv"));
}

TEST_F(Cli, SchmidtThreeQubitExample) {
  const std::string f = state_file("psi.txt", three_qubit_example_state());
  const fs::path out = dir_ / "form.txt";
  const CliResult r = run("schmidt --state " + f + " --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.err;
  const auto lambdas = numbers(value_of(slurp(out), "lambdas"));
  const std::vector<double> expected = {0.986657, 0.128, 0.0347616, 0.085024, 0.0411138};
  ASSERT_EQ(lambdas.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(lambdas[i], expected[i], 1e-4);
}

TEST_F(Cli, SchmidtProductAndRandomTwoQubit) {
  Rng rng(2);
  const CliResult p = run("schmidt --state " + state_file("p.txt", random_product_state(2, rng)));
  EXPECT_EQ(p.code, 0) << p.err;
  EXPECT_NEAR(numbers(value_of(p.out, "lambdas"))[0], 1.0, 1e-9);
  EXPECT_NEAR(std::stod(value_of(p.out, "bures")), 0.0, 1e-8);

  const PureState psi = random_pure_state(2, rng);
  const CliResult r = run("schmidt --state " + state_file("r.txt", psi));
  EXPECT_EQ(r.code, 0) << r.err;
  const auto o = schmidt_oracle_2q(psi);
  const auto l = numbers(value_of(r.out, "lambdas"));
  EXPECT_NEAR(l[0], o.coefficients(0), 1e-6);
  EXPECT_NEAR(l[1], o.coefficients(1), 1e-6);
}

TEST_F(Cli, SchmidtFlowFailureWritesTrace) {
  const std::string f = state_file("psi.txt", three_qubit_example_state());
  const fs::path out = dir_ / "form.txt";
  const CliResult r = run("schmidt --max-steps 1 --state " + f + " --out " + out.string());
  EXPECT_EQ(r.code, 2);
  const std::string trace = out.string() + ".trace.csv";
  EXPECT_NE(r.err.find(trace), std::string::npos) << r.err;
  EXPECT_EQ(slurp(trace).rfind("s,fidelity,grad_norm\n", 0), 0u);
}

TEST_F(Cli, QubitCap) {
  const std::string f = state_file("big.txt", PureState::basis(4, 1));
  EXPECT_EQ(run("--max-qubits 3 schmidt --state " + f).code, 1);
}

TEST_F(Cli, ScanTable) {
  const fs::path out = dir_ / "scan.csv";
  const CliResult r = run("scan --theta-steps 3 --phi-steps 3 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "family,theta,param,h1,h2,h3,h4,h5,h6,signature");
  int pair_rows = 0;
  int sub_rows = 0;
  std::string at_quarter_quarter;
  std::string at_quarter_three_quarter;
  while (std::getline(in, line)) {
    if (line.rfind("pair,", 0) == 0) {
      if (pair_rows == 0) at_quarter_quarter = line;
      if (pair_rows == 2) at_quarter_three_quarter = line;
      ++pair_rows;
    } else if (line.rfind("submanifold,", 0) == 0) {
      ++sub_rows;
    }
  }
  EXPECT_EQ(pair_rows, 9);
  EXPECT_EQ(sub_rows, 9);
  EXPECT_EQ(at_quarter_quarter.substr(at_quarter_quarter.rfind(',') + 1), "maximum");
  EXPECT_EQ(at_quarter_three_quarter.substr(at_quarter_three_quarter.rfind(',') + 1), "saddle");
  EXPECT_EQ(run("scan --theta-steps 1 --phi-steps 3").code, 1);
}

TEST_F(Cli, ReproduceScenarios) {
  const CliResult r = run("reproduce example-3q --out-dir " + (dir_ / "rep").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS example-3q"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "example_3q.txt"));
  const CliResult f = run("reproduce fig1 --out-dir " + (dir_ / "rep").string());
  EXPECT_EQ(f.code, 0) << f.out;
  EXPECT_EQ(run("reproduce fig9").code, 1);
  const CliResult g = run("reproduce fig2 --out-dir " + (dir_ / "rep").string());
  EXPECT_EQ(g.code, 0) << g.out;
  EXPECT_NE(g.out.find("resolved angles"), std::string::npos);
}

TEST_F(Cli, StateFileRoundTripThroughSchmidt) {
  Rng rng(3);
  const PureState psi = random_pure_state(2, rng);
  const std::string f = state_file("s.txt", psi);
  const PureState back = read_state_file(f);
  EXPECT_EQ(back.amplitudes(), psi.amplitudes());
}
