// SPDX-License-Identifier: Apache-2.0
#include "poshrink/prior_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace poshrink {

namespace {

struct Token {
  std::string text;
  std::size_t pos = 0;
};

struct Option {
  Token key;
  std::vector<Token> values;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_number(std::string_view text, double& out) {
  const std::string s = trim(text);
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t d) : text_(text), d_(d) {}

  PriorSpec parse_top() {
    skip_space();
    const std::size_t start = pos_;
    const std::string name = identifier();
    if (name == "jeffreys") {
      expect_end();
      return PowerPrior{std::vector<double>(d_, 0.5)};
    }
    if (name == "power" || name == "gamma") {
      expect(':');
      auto options = parse_options();
      expect_end();
      std::vector<double> beta = take_vector(options, "beta", start, false, 0.5);
      if (name == "power") {
        reject_unknown(options);
        return PowerPrior{beta};
      }
      std::vector<double> alpha = take_vector(options, "alpha", start, true, 0.0);
      reject_unknown(options);
      return GammaPrior{alpha, beta};
    }
    pos_ = start;
    FPrior prior = parse_family_prior();
    expect_end();
    return prior;
  }

  [[noreturn]] void error(std::size_t pos, const std::string& msg) const {
    fail(ErrorCode::parse, "prior \"" + std::string(text_) + "\" at position " +
                               std::to_string(pos) + ": " + msg);
  }

 private:
  FPrior parse_family_prior() {
    const std::size_t start = pos_;
    std::map<std::string, Option> options;
    Family family = parse_family(options);
    const std::vector<double> beta = take_vector(options, "beta", start, false, 0.5);
    double eps = 0.0;
    if (auto it = options.find("eps"); it != options.end()) {
      eps = scalar(it->second);
      options.erase(it);
    }
    reject_unknown(options);
    return FPrior(std::move(family), beta, eps);
  }

  // Parses one family; beta/eps options are left in `options` for the caller.
  Family parse_family(std::map<std::string, Option>& options) {
    skip_space();
    const std::size_t start = pos_;
    const std::string name = identifier();
    if (name == "sum") {
      expect(':');
      SumFamily sum;
      do {
        skip_space();
        expect('(');
        std::map<std::string, Option> inner;
        sum.parts.push_back(parse_family(inner));
        if (!inner.empty()) {
          error(inner.begin()->second.key.pos,
                "option '" + inner.begin()->first +
                    "' must be set on the sum, not on a part");
        }
        skip_space();
        expect(')');
        skip_space();
      } while (accept('+'));
      if (accept(',')) options = parse_options();
      return Family{std::move(sum)};
    }
    if (name == "constant") {
      if (accept(':')) options = parse_options();
      return Family{ConstantFamily{}};
    }
    if (name != "shift-point" && name != "sym-point" && name != "point" &&
        name != "sym-subspace" && name != "coord-subspace" &&
        name != "mix-coord-subspace") {
      error(start, "unknown prior '" + name + "'");
    }
    expect(':');
    options = parse_options();
    const double alpha = take_scalar(options, "alpha", start);

    if (name == "shift-point") {
      double eta = 0.0;
      if (options.contains("eta")) eta = take_scalar(options, "eta", start);
      return Family{ShiftPointFamily{alpha, eta}};
    }
    if (name == "sym-point" || name == "point") {
      std::vector<double> center = take_vector(options, "center", start, false, 0.0);
      if (name == "point") return Family{PointFamily{alpha, std::move(center)}};
      return Family{SymPointFamily{alpha, std::move(center)}};
    }
    if (name == "coord-subspace") {
      auto it = options.find("include");
      if (it == options.end()) error(start, "coord-subspace needs include=");
      std::vector<std::size_t> indices;
      for (const Token& t : it->second.values) {
        double v = 0.0;
        if (!parse_number(t.text, v) || v != static_cast<double>(static_cast<long>(v)) ||
            v < 1.0 || v > static_cast<double>(d_)) {
          error(t.pos, "include entries must be integers in 1.." + std::to_string(d_));
        }
        indices.push_back(static_cast<std::size_t>(v) - 1);
      }
      options.erase(it);
      return Family{CoordSubspaceFamily{alpha, std::move(indices)}};
    }
    if (name == "mix-coord-subspace") {
      if (d_ < 2) error(start, "mix-coord-subspace needs d >= 2");
      SumFamily sum;
      for (std::size_t drop = 0; drop < d_; ++drop) {
        CoordSubspaceFamily part{alpha, {}};
        for (std::size_t i = 0; i < d_; ++i) {
          if (i != drop) part.indices.push_back(i);
        }
        sum.parts.push_back(Family{std::move(part)});
      }
      return Family{std::move(sum)};
    }
    // sym-subspace
    const bool has_vperp = options.contains("vperp");
    const bool has_v = options.contains("v");
    if (has_vperp == has_v) error(start, "sym-subspace needs exactly one of vperp= or v=");
    Option opt = options.at(has_vperp ? "vperp" : "v");
    options.erase(has_vperp ? "vperp" : "v");
    std::vector<std::vector<double>> vectors = vector_list(opt);
    for (const auto& v : vectors) {
      if (v.size() != d_) {
        error(opt.key.pos, "basis vectors must have " + std::to_string(d_) + " entries");
      }
    }
    if (has_v) vectors = orthogonal_complement(vectors, d_);
    if (vectors.empty()) error(opt.key.pos, "V-perp is empty (V is all of R^d)");
    return Family{SymSubspaceFamily{alpha, std::move(vectors)}};
  }

  std::vector<std::vector<double>> vector_list(const Option& opt) {
    if (opt.values.size() == 1 && !opt.values[0].text.empty() &&
        opt.values[0].text[0] == '@') {
      return read_basis_file(opt.values[0].text.substr(1));
    }
    std::vector<std::vector<double>> out(1);
    for (const Token& t : opt.values) {
      std::size_t seg_start = 0;
      for (std::size_t k = 0; k <= t.text.size(); ++k) {
        if (k < t.text.size() && t.text[k] != '|') continue;
        const std::string piece = t.text.substr(seg_start, k - seg_start);
        if (seg_start > 0) out.emplace_back();
        if (!piece.empty()) {
          double v = 0.0;
          if (!parse_number(piece, v)) error(t.pos + seg_start, "expected a number");
          out.back().push_back(v);
        }
        seg_start = k + 1;
      }
    }
    return out;
  }

  std::map<std::string, Option> parse_options() {
    std::map<std::string, Option> options;
    std::string last;
    for (;;) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')' &&
             text_[pos_] != ';') {
        ++pos_;
      }
      const std::string token = trim(text_.substr(start, pos_ - start));
      if (token.empty()) error(start, "empty option");
      const auto eq = token.find('=');
      if (eq == std::string::npos) {
        if (last.empty()) error(start, "expected key=value");
        options[last].values.push_back({token, start});
      } else {
        const std::string key = trim(token.substr(0, eq));
        const std::string value = trim(token.substr(eq + 1));
        if (key.empty()) error(start, "missing option name");
        if (options.contains(key)) error(start, "duplicate option '" + key + "'");
        const std::size_t value_pos = start + token.find_first_not_of(" \t", eq + 1);
        if (value.empty()) error(start + eq + 1, "missing value for '" + key + "'");
        options[key] = Option{{key, start}, {{value, value_pos}}};
        last = key;
      }
      if (!accept(',')) break;
    }
    return options;
  }

  double scalar(const Option& opt) {
    if (opt.values.size() != 1) error(opt.key.pos, "'" + opt.key.text + "' takes one value");
    double v = 0.0;
    if (!parse_number(opt.values[0].text, v)) error(opt.values[0].pos, "expected a number");
    return v;
  }

  double take_scalar(std::map<std::string, Option>& options, const std::string& key,
                     std::size_t family_pos) {
    auto it = options.find(key);
    if (it == options.end()) error(family_pos, "missing " + key + "=");
    const double v = scalar(it->second);
    options.erase(it);
    return v;
  }

  std::vector<double> take_vector(std::map<std::string, Option>& options,
                                  const std::string& key, std::size_t family_pos,
                                  bool required, double fallback) {
    auto it = options.find(key);
    if (it == options.end()) {
      if (required) error(family_pos, "missing " + key + "=");
      return std::vector<double>(d_, fallback);
    }
    std::vector<double> values;
    for (const Token& t : it->second.values) {
      double v = 0.0;
      if (!parse_number(t.text, v)) error(t.pos, "expected a number");
      values.push_back(v);
    }
    if (values.size() == 1) values.assign(d_, values[0]);
    if (values.size() != d_) {
      error(it->second.key.pos, key + " needs 1 or " + std::to_string(d_) + " values, got " +
                                    std::to_string(values.size()));
    }
    options.erase(it);
    return values;
  }

  void reject_unknown(const std::map<std::string, Option>& options) {
    if (!options.empty()) {
      const auto& first = options.begin()->second;
      error(first.key.pos, "unknown option '" + first.key.text + "'");
    }
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::islower(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
      ++pos_;
    }
    if (pos_ == start) error(start, "expected a prior name");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(pos_, std::string("expected '") + c + "'");
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) error(pos_, "unexpected trailing text");
  }

  std::string_view text_;
  std::size_t d_;
  std::size_t pos_ = 0;
};

}  // namespace

PriorSpec parse_prior(std::string_view text, std::size_t d, bool check_hypotheses) {
  if (d == 0) fail(ErrorCode::invalid_argument, "dimension must be >= 1");
  Parser parser(text, d);
  PriorSpec prior = parser.parse_top();
  if (const auto* p = std::get_if<PowerPrior>(&prior)) {
    for (double b : p->beta) {
      if (!(b > 0.0)) parser.error(0, "beta must be positive");
    }
  }
  if (const auto* g = std::get_if<GammaPrior>(&prior)) {
    for (double b : g->beta) {
      if (!(b > 0.0)) parser.error(0, "beta must be positive");
    }
    for (double a : g->alpha) {
      if (!(a >= 0.0)) parser.error(0, "gamma alpha must be nonnegative");
    }
  }
  if (check_hypotheses) {
    if (const auto* f = std::get_if<FPrior>(&prior)) validate_hypotheses(*f);
  }
  return prior;
}

std::vector<std::string> split_prior_list(std::string_view text) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size()) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
      if (text[i] != ';' || depth != 0) continue;
    }
    const std::string item = trim(text.substr(start, i - start));
    if (!item.empty()) out.push_back(item);
    start = i + 1;
  }
  return out;
}

std::vector<std::vector<double>> read_basis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot read basis file '" + path + "'");
  std::vector<std::vector<double>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(content);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      if (!parse_number(cell, v)) {
        fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": expected a number");
      }
      row.push_back(v);
    }
    out.push_back(std::move(row));
  }
  if (out.empty()) fail(ErrorCode::parse, path + ": no basis vectors");
  return out;
}

}  // namespace poshrink
