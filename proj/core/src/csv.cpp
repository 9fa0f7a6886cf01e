#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "tally/database.hpp"

namespace tally {
namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  if (delimiter == ' ' || delimiter == '\t') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_token(std::string_view token, std::size_t row) {
  std::int64_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw LoadError("row " + std::to_string(row) + ": token '" + std::string(token) +
                    "' is not an integer");
  }
  if (value < 0) {
    throw LoadError("row " + std::to_string(row) + ": negative state " + std::to_string(value));
  }
  return value;
}

}  // namespace

Database parse_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::vector<std::int64_t>> columns;
  std::optional<char> delimiter = options.delimiter;
  std::int64_t min_token = std::numeric_limits<std::int64_t>::max();
  std::size_t rows = 0;
  std::string line;

  while (std::getline(in, line)) {
    if (is_blank(line)) continue;
    ++rows;
    if (!delimiter) delimiter = line.find(',') != std::string::npos ? ',' : ' ';
    const auto tokens = split(line, *delimiter);
    if (rows == 1) {
      columns.resize(tokens.size());
    } else if (tokens.size() != columns.size()) {
      throw LoadError("row " + std::to_string(rows) + " has " + std::to_string(tokens.size()) +
                      " fields, expected " + std::to_string(columns.size()));
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto v = parse_token(tokens[i], rows);
      min_token = std::min(min_token, v);
      columns[i].push_back(v);
    }
  }
  if (rows == 0) throw LoadError("input contains no rows");

  std::int64_t offset = 0;
  switch (options.base) {
    case StateBase::kAuto: offset = min_token == 1 ? 1 : 0; break;
    case StateBase::kZero: offset = 0; break;
    case StateBase::kOne: offset = 1; break;
  }

  const std::size_t n = columns.size();
  if (options.declared_arities && options.declared_arities->size() != n) {
    throw LoadError("declared " + std::to_string(options.declared_arities->size()) +
                    " arities for " + std::to_string(n) + " columns");
  }

  std::vector<Arity> arities(n);
  std::vector<std::vector<State>> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t top = 0;
    states[i].reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto v = columns[i][r] - offset;
      if (v < 0) {
        throw LoadError("row " + std::to_string(r + 1) + ": token " +
                        std::to_string(columns[i][r]) + " is below the 1-based minimum");
      }
      if (v >= static_cast<std::int64_t>(kMaxArity)) {
        throw LoadError("row " + std::to_string(r + 1) + ": state " + std::to_string(v) +
                        " exceeds the supported arity");
      }
      if (options.declared_arities && v >= (*options.declared_arities)[i]) {
        throw LoadError("row " + std::to_string(r + 1) + ": token " +
                        std::to_string(columns[i][r]) + " exceeds declared arity " +
                        std::to_string((*options.declared_arities)[i]) + " of column " +
                        std::to_string(i));
      }
      top = std::max(top, v);
      states[i].push_back(static_cast<State>(v));
    }
    arities[i] = options.declared_arities ? (*options.declared_arities)[i]
                                          : static_cast<Arity>(top + 1);
  }
  return Database(std::move(arities), std::move(states));
}

Database load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  return parse_csv(in, options);
}

std::vector<Arity> load_arities(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  std::vector<Arity> out;
  std::string token;
  while (in >> token) {
    for (auto piece : split(token, ',')) {
      if (piece.empty()) continue;
      const auto v = parse_token(piece, out.size() + 1);
      if (v == 0 || v > static_cast<std::int64_t>(kMaxArity)) {
        throw LoadError("arity file entry " + std::to_string(out.size() + 1) + " is out of range");
      }
      out.push_back(static_cast<Arity>(v));
    }
  }
  if (out.empty()) throw LoadError("arity file " + path.string() + " is empty");
  return out;
}

void write_csv(const Database& db, std::ostream& out, char delimiter, bool one_based) {
  const std::size_t n = db.num_variables();
  const auto cells = db.row_major();
  const int shift = one_based ? 1 : 0;
  for (std::size_t r = 0; r < db.num_rows(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out << delimiter;
      out << cells[r * n + i] + shift;
    }
    out << '\n';
  }
}

}  // namespace tally
