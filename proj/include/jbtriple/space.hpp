#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "jbtriple/errors.hpp"

namespace jbt {

enum class FactorKind { kRect, kSym, kAntisym };

/// One matrix Cartan factor: all m x n complex matrices, or the symmetric /
/// antisymmetric n x n ones.
struct Factor {
  FactorKind kind = FactorKind::kRect;
  int rows = 1;
  int cols = 1;

  static Factor rect(int m, int n) {
    if (m <= 0 || n <= 0) throw DimensionError("rect factor needs positive dimensions");
    return {FactorKind::kRect, m, n};
  }
  static Factor sym(int n) {
    if (n <= 0) throw DimensionError("sym factor needs positive dimension");
    return {FactorKind::kSym, n, n};
  }
  static Factor antisym(int n) {
    if (n <= 0) throw DimensionError("antisym factor needs positive dimension");
    return {FactorKind::kAntisym, n, n};
  }

  bool is_square() const { return rows == cols; }

  int complex_dim() const {
    switch (kind) {
      case FactorKind::kRect:
        return rows * cols;
      case FactorKind::kSym:
        return rows * (rows + 1) / 2;
      case FactorKind::kAntisym:
        return rows * (rows - 1) / 2;
    }
    return 0;
  }
  int real_dim() const { return 2 * complex_dim(); }

  std::string describe() const {
    switch (kind) {
      case FactorKind::kRect:
        return "rect(" + std::to_string(rows) + "," + std::to_string(cols) + ")";
      case FactorKind::kSym:
        return "sym(" + std::to_string(rows) + ")";
      case FactorKind::kAntisym:
        return "antisym(" + std::to_string(rows) + ")";
    }
    return {};
  }

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// A finite-dimensional JB*-triple: a single matrix Cartan factor or a finite
/// l-infinity direct sum of them. Sums nest to depth one.
class TripleSpace {
 public:
  static TripleSpace rect(int m, int n) { return TripleSpace({Factor::rect(m, n)}, false); }
  static TripleSpace sym(int n) { return TripleSpace({Factor::sym(n)}, false); }
  static TripleSpace antisym(int n) { return TripleSpace({Factor::antisym(n)}, false); }
  static TripleSpace of(const Factor& f) { return TripleSpace({f}, false); }

  static TripleSpace sum(const std::vector<TripleSpace>& parts) {
    if (parts.empty()) throw DimensionError("sum space needs at least one part");
    std::vector<Factor> factors;
    for (const auto& p : parts) {
      if (p.is_sum()) throw DimensionError("sum parts must be single factors");
      factors.push_back(p.factor(0));
    }
    return TripleSpace(std::move(factors), true);
  }

  bool is_sum() const { return sum_; }
  int num_blocks() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int b) const { return factors_.at(static_cast<std::size_t>(b)); }
  const std::vector<Factor>& factors() const { return factors_; }

  /// The b-th summand as a standalone space.
  TripleSpace part(int b) const { return of(factor(b)); }

  int complex_dim() const {
    int d = 0;
    for (const auto& f : factors_) d += f.complex_dim();
    return d;
  }
  int real_dim() const { return 2 * complex_dim(); }

  /// True when every summand is a square rect or sym factor, so the identity
  /// is a unitary tripotent.
  bool is_unital() const {
    for (const auto& f : factors_) {
      if (f.kind == FactorKind::kAntisym || !f.is_square()) return false;
    }
    return true;
  }

  std::string describe() const {
    if (!sum_) return factors_.front().describe();
    std::string s = "sum(";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += ",";
      s += factors_[i].describe();
    }
    return s + ")";
  }

  /// Parses the grammar produced by describe(), e.g. "sum(rect(2,2),sym(3))".
  static TripleSpace parse(std::string_view text);

  friend bool operator==(const TripleSpace&, const TripleSpace&) = default;

 private:
  TripleSpace(std::vector<Factor> factors, bool sum) : factors_(std::move(factors)), sum_(sum) {}

  std::vector<Factor> factors_;
  bool sum_ = false;
};

namespace detail {

class SpecParser {
 public:
  explicit SpecParser(std::string_view s) : s_(s) {}

  TripleSpace parse_space() {
    std::string word = ident();
    if (word == "sum") {
      expect('(');
      std::vector<TripleSpace> parts{parse_space()};
      while (peek() == ',') {
        ++pos_;
        parts.push_back(parse_space());
      }
      expect(')');
      return TripleSpace::sum(parts);
    }
    expect('(');
    int a = integer();
    if (word == "rect") {
      expect(',');
      int b = integer();
      expect(')');
      return TripleSpace::rect(a, b);
    }
    expect(')');
    if (word == "sym") return TripleSpace::sym(a);
    if (word == "antisym") return TripleSpace::antisym(a);
    throw DimensionError("unknown factor kind '" + word + "'");
  }

  void finish() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DimensionError("bad space spec '" + std::string(s_) + "': " + what);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string ident() {
    skip_ws();
    std::string out;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) out += s_[pos_++];
    if (out.empty()) fail("expected a factor name");
    return out;
  }
  int integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline TripleSpace TripleSpace::parse(std::string_view text) {
  detail::SpecParser p(text);
  TripleSpace s = p.parse_space();
  p.finish();
  return s;
}

}  // namespace jbt
