#include "conicopf/matpower.hpp"

#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace conicopf {

namespace {

// Minimum column counts per table. Extra trailing columns are kept.
constexpr std::size_t kBusCols = 13;
constexpr std::size_t kGenCols = 10;
constexpr std::size_t kBranchCols = 11;
constexpr std::size_t kGencostCols = 4;

std::string strip_comment(const std::string& line) {
  auto pos = line.find('%');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool parse_number(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct Cursor {
  std::istream& in;
  int line_no = 0;
  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  }
};

// Reads rows until the closing "];". A row ends at ';' or at end-of-line
// once at least one value was seen.
std::vector<std::vector<double>> read_matrix(Cursor& cur, std::string rest,
                                             const std::string& table,
                                             std::size_t min_cols) {
  std::vector<std::vector<double>> rows;
  std::vector<double> row;
  auto flush_row = [&](int line_no) {
    if (row.empty()) return;
    if (row.size() < min_cols) {
      throw ParseError("line " + std::to_string(line_no) + ": row " +
                       std::to_string(rows.size() + 1) + " of " + table +
                       " has " + std::to_string(row.size()) +
                       " columns, expected at least " +
                       std::to_string(min_cols));
    }
    rows.push_back(std::move(row));
    row.clear();
  };

  std::string line = std::move(rest);
  while (true) {
    std::string text = strip_comment(line);
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) {
      if (tok.front() == ']') {
        flush_row(cur.line_no);
        return rows;
      }
      bool row_end = false, matrix_end = false;
      if (tok.back() == ';') {
        tok.pop_back();
        row_end = true;
      }
      if (!tok.empty() && tok.back() == ']') {
        tok.pop_back();
        matrix_end = true;
      }
      if (!tok.empty()) {
        double v;
        if (!parse_number(tok, v)) {
          throw ParseError("line " + std::to_string(cur.line_no) +
                           ": expected a number in " + table + ", got '" +
                           tok + "'");
        }
        row.push_back(v);
      }
      if (matrix_end) {
        flush_row(cur.line_no);
        return rows;
      }
      if (row_end) flush_row(cur.line_no);
    }
    flush_row(cur.line_no);  // newline also terminates a row
    if (!cur.next(line)) throw ParseError(table + " not terminated by '];'");
  }
}

}  // namespace

RawCase parse_case(std::istream& in) {
  RawCase raw;
  Cursor cur{in};
  bool saw_base = false;
  std::string line;
  while (cur.next(line)) {
    std::string text = strip_comment(line);
    if (auto pos = text.find("function"); pos != std::string::npos &&
                                          raw.name.empty()) {
      auto eq = text.find('=', pos);
      if (eq != std::string::npos) {
        std::istringstream ss(text.substr(eq + 1));
        ss >> raw.name;
      }
      continue;
    }
    if (auto pos = text.find("mpc.baseMVA"); pos != std::string::npos) {
      auto eq = text.find('=', pos);
      if (eq == std::string::npos)
        throw ParseError("line " + std::to_string(cur.line_no) +
                         ": malformed baseMVA");
      std::string tok;
      std::istringstream ss(text.substr(eq + 1));
      ss >> tok;
      if (!tok.empty() && tok.back() == ';') tok.pop_back();
      double v;
      if (!parse_number(tok, v))
        throw ParseError("line " + std::to_string(cur.line_no) +
                         ": malformed baseMVA value '" + tok + "'");
      raw.base_mva = v;
      saw_base = true;
      continue;
    }
    struct TableKey {
      const char* key;
      std::vector<std::vector<double>> RawCase::* field;
      std::size_t min_cols;
    };
    static const TableKey tables[] = {
        {"mpc.gencost", &RawCase::gencost, kGencostCols},
        {"mpc.bus", &RawCase::bus, kBusCols},
        {"mpc.gen", &RawCase::gen, kGenCols},
        {"mpc.branch", &RawCase::branch, kBranchCols},
    };
    for (const auto& t : tables) {
      auto pos = text.find(t.key);
      if (pos == std::string::npos) continue;
      // Avoid matching "mpc.gen" inside "mpc.gencost".
      std::size_t end = pos + std::strlen(t.key);
      char after = end < text.size() ? text[end] : ' ';
      if (std::isalnum(static_cast<unsigned char>(after)) || after == '_')
        continue;
      auto open = text.find('[', pos);
      if (open == std::string::npos)
        throw ParseError("line " + std::to_string(cur.line_no) +
                         ": expected '[' after " + t.key);
      raw.*(t.field) =
          read_matrix(cur, text.substr(open + 1), t.key, t.min_cols);
      break;
    }
  }
  if (!saw_base) throw ParseError("missing mpc.baseMVA");
  if (raw.bus.empty()) throw ParseError("missing required table mpc.bus");
  if (raw.gen.empty()) throw ParseError("missing required table mpc.gen");
  if (raw.branch.empty()) throw ParseError("missing required table mpc.branch");
  if (raw.gencost.empty())
    throw ParseError("missing required table mpc.gencost");
  return raw;
}

RawCase parse_case_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_case(ss);
}

RawCase load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open case file: " + path);
  RawCase raw = parse_case(in);
  if (raw.name.empty()) {
    auto slash = path.find_last_of("/\\");
    auto base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.rfind('.');
    raw.name = dot == std::string::npos ? base : base.substr(0, dot);
  }
  return raw;
}

}  // namespace conicopf
