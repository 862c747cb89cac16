// Operation table shared by the manifest parser and the runner.
#pragma once

#include <string>
#include <vector>

namespace engelkit::detail {

struct OpSpec {
  std::string name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::vector<OpSpec>& op_specs();
const OpSpec* find_op(const std::string& name);

// Checks the syntax of one `expect` value; returns an error message or "".
std::string expectation_syntax_error(const std::string& text);

}  // namespace engelkit::detail
