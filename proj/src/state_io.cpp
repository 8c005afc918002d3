#include "localflow/state_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace localflow {

namespace {

constexpr double kRenormalizeTol = 1e-6;

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

void write_complex(std::ostream& out, Complex c) { out << c.real() << ' ' << c.imag(); }

}  // namespace

StateFileError::StateFileError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

PureState parse_state(std::istream& in, const std::string& source) {
  std::string raw;
  int line_no = 0;
  int n = -1;
  Index expected = 0;
  Vector amps;
  Index filled = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (is_blank(line)) continue;
    std::istringstream ss(line);
    if (n < 0) {
      if (!(ss >> n) || n < 1 || n > 16) {
        throw StateFileError(source, line_no, "expected a qubit count between 1 and 16");
      }
      std::string extra;
      if (ss >> extra) throw StateFileError(source, line_no, "unexpected text after qubit count");
      expected = Index{1} << n;
      amps = Vector::Zero(expected);
      continue;
    }
    double re = 0.0;
    double im = 0.0;
    if (!(ss >> re >> im)) throw StateFileError(source, line_no, "expected \"re im\"");
    std::string extra;
    if (ss >> extra) throw StateFileError(source, line_no, "unexpected text after amplitude");
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw StateFileError(source, line_no, "amplitude is not finite");
    }
    if (filled >= expected) {
      throw StateFileError(source, line_no,
                           "too many amplitudes (expected " + std::to_string(expected) + ")");
    }
    amps(filled++) = Complex(re, im);
  }
  if (n < 0) throw StateFileError(source, line_no, "missing qubit count");
  if (filled != expected) {
    throw StateFileError(source, line_no,
                         "expected " + std::to_string(expected) + " amplitudes, found " +
                             std::to_string(filled));
  }
  const double norm2 = amps.squaredNorm();
  if (std::abs(std::sqrt(norm2) - 1.0) > kRenormalizeTol) {
    throw StateFileError(source, line_no, "state norm deviates from 1 by more than 1e-6");
  }
  if (std::abs(norm2 - 1.0) > 1e-12) return PureState::normalized(std::move(amps));
  return PureState(trusted, std::move(amps));
}

PureState read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateFileError(path.string(), 0, "cannot open file");
  return parse_state(in, path.string());
}

void write_state(std::ostream& out, const PureState& psi) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << psi.qubits() << '\n' << std::setprecision(17);
  for (Index i = 0; i < psi.dim(); ++i) {
    write_complex(out, psi[i]);
    out << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

void write_state_file(const std::filesystem::path& path, const PureState& psi) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_state(out, psi);
}

void write_schmidt_form(std::ostream& out, const SchmidtForm& form) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17) << std::boolalpha;
  const BuresResult bures = bures_entanglement_nq(form);

  out << "n = " << form.n << '\n';
  out << "lambdas =";
  for (double l : form.lambdas) out << ' ' << l;
  out << '\n';
  if (form.n == 3) out << "phase_phi = " << form.phase_phi << '\n';
  out << "bures = " << bures.value << '\n';
  out << "bures_reliable = " << bures.reliable << '\n';
  out << "strictly_dominant = " << form.strictly_dominant << '\n';
  out << "max_fidelity = " << form.max_fidelity << '\n';
  out << "via_svd = " << form.via_svd << '\n';
  out << "verified = " << form.verified << '\n';
  out << "flow_runs = " << form.flow_runs << '\n';
  out << "global_phase = " << form.phase_corrections.global_phase << '\n';
  out << "qubit_phases =";
  for (double a : form.phase_corrections.qubit_phases) out << ' ' << a;
  out << '\n';
  for (Index i = 0; i < form.canonical_state.dim(); ++i) {
    out << "canonical[" << i << "] = ";
    write_complex(out, form.canonical_state[i]);
    out << '\n';
  }
  for (int k = 0; k < form.diagonalizer.qubits(); ++k) {
    const Matrix2& f = form.diagonalizer.factors()[static_cast<std::size_t>(k)];
    out << "diagonalizer[" << k << "] =";
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        out << ' ';
        write_complex(out, f(r, c));
      }
    }
    out << '\n';
  }
  for (const auto& w : form.warnings) out << "warning = " << w << '\n';
  out.flags(flags);
  out.precision(prec);
}

}  // namespace localflow
