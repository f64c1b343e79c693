#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace horsmc {

/// A ranked alphabet: an ordered list of (symbol name, arity) pairs.
/// Symbols are referred to by their index in declaration order.
class RankedAlphabet {
 public:
  int add_symbol(const std::string& name, int arity);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& name(int id) const { return symbols_[id].first; }
  int arity(int id) const { return symbols_[id].second; }
  int max_arity() const;

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  /// Index of a symbol, -1 if absent.
  int index_of(const std::string& name) const;
  /// Index of a symbol; throws Error if absent.
  int require(const std::string& name) const;

  /// Same symbols with the same arities in the same order.
  bool operator==(const RankedAlphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const RankedAlphabet& other) const { return !(*this == other); }

  /// All arities equal to one.
  bool is_word_alphabet() const;

  /// Parses the body of a `%terminals` line: whitespace-separated `name:arity` pairs.
  static RankedAlphabet parse_decl(const std::string& body, int line_no = 0);
  /// Renders the `%terminals` line, including the directive keyword.
  std::string to_decl() const;

 private:
  std::vector<std::pair<std::string, int>> symbols_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace horsmc
