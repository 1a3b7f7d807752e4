// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace poshrink::cli {

namespace {

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(strip(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::int64_t parse_count(const std::string& cell, const std::string& path,
                         std::size_t line_no, const char* column) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  const std::string where = path + ":" + std::to_string(line_no) + ": ";
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw CliError{exit_invalid, where + "column " + column + " is not an integer ('" + cell + "')"};
  }
  if (v < 0) {
    throw CliError{exit_invalid, where + "column " + column + " is negative"};
  }
  return v;
}

}  // namespace

CountTable ingest_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{exit_io, "cannot read '" + path + "'"};
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw CliError{exit_invalid, path + ": empty file"};
  ++line_no;
  const auto header = split_csv_line(line);
  const bool with_y = header.size() == 3 && header[2] == "y";
  if (header.size() < 2 || header[0] != "unit_id" || header[1] != "x" ||
      (header.size() == 3 && !with_y) || header.size() > 3) {
    throw CliError{exit_invalid, path + ":1: header must be unit_id,x or unit_id,x,y"};
  }
  CountTable table;
  if (with_y) table.y.emplace();
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw CliError{exit_invalid, path + ":" + std::to_string(line_no) + ": expected " +
                                       std::to_string(header.size()) + " fields, got " +
                                       std::to_string(cells.size())};
    }
    if (cells[1].empty()) {
      ++table.skipped_rows;
      continue;
    }
    table.ids.push_back(cells[0]);
    table.x.push_back(parse_count(cells[1], path, line_no, "x"));
    if (with_y) table.y->push_back(parse_count(cells[2], path, line_no, "y"));
  }
  if (table.x.empty()) throw CliError{exit_invalid, path + ": no data rows"};
  return table;
}

std::vector<double> parse_reals(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string s = strip(cell);
    double v = 0.0;
    const char* begin = s.data();
    if (!s.empty() && s[0] == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw CliError{exit_invalid, flag + ": '" + s + "' is not a number"};
    }
    out.push_back(v);
  }
  if (out.empty()) throw CliError{exit_invalid, flag + ": empty list"};
  return out;
}

}  // namespace poshrink::cli
