#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace conicopf {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numeric tables of a MATPOWER case, exactly as written in the file.
/// Values keep the file's units (MW, MVAr, MVA, degrees); interpretation
/// happens in validate().
struct RawCase {
  std::string name;
  double base_mva = 0.0;
  std::vector<std::vector<double>> bus;
  std::vector<std::vector<double>> gen;
  std::vector<std::vector<double>> branch;
  std::vector<std::vector<double>> gencost;
};

/// Parse a MATPOWER .m case (subset: baseMVA, bus, gen, branch, gencost
/// matrices; '%' comments; ';'-terminated rows). Throws ParseError with a
/// line number on malformed rows and on missing required tables.
RawCase parse_case(std::istream& in);
RawCase parse_case_string(const std::string& text);
RawCase load_case(const std::string& path);

}  // namespace conicopf
