#pragma once

// Text formats.
//
// State file: first non-comment line is the qubit count n, followed by 2^n
// lines "re im". '#' starts a comment that runs to the end of the line;
// blank lines are ignored. A state whose norm is within 1e-6 of one is
// renormalized, anything further off is rejected.
//
// Schmidt report: "key = value" lines, see write_schmidt_form.

#include "localflow/schmidt.hpp"
#include "localflow/tensor.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace localflow {

class StateFileError : public std::runtime_error {
 public:
  StateFileError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

PureState parse_state(std::istream& in, const std::string& source = "<stream>");
PureState read_state_file(const std::filesystem::path& path);

/// Amplitudes with 17 significant digits, so parse_state reproduces them exactly.
void write_state(std::ostream& out, const PureState& psi);
void write_state_file(const std::filesystem::path& path, const PureState& psi);

/// Key-value report of a canonical form and its Bures value.
void write_schmidt_form(std::ostream& out, const SchmidtForm& form);

}  // namespace localflow
