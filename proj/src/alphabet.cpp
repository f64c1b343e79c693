#include "horsmc/alphabet.hpp"

#include <algorithm>
#include <sstream>

#include "horsmc/error.hpp"

namespace horsmc {

int RankedAlphabet::add_symbol(const std::string& name, int arity) {
  if (name.empty()) throw Error("empty symbol name");
  if (arity < 0) throw Error("negative arity for symbol '" + name + "'");
  if (has(name)) throw Error("duplicate symbol '" + name + "'");
  symbols_.emplace_back(name, arity);
  index_[name] = static_cast<int>(symbols_.size()) - 1;
  return index_[name];
}

int RankedAlphabet::max_arity() const {
  int m = 0;
  for (const auto& [name, ar] : symbols_) m = std::max(m, ar);
  return m;
}

int RankedAlphabet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int RankedAlphabet::require(const std::string& name) const {
  int id = index_of(name);
  if (id < 0) throw Error("unknown symbol '" + name + "'");
  return id;
}

bool RankedAlphabet::is_word_alphabet() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](const auto& s) { return s.second == 1; });
}

RankedAlphabet RankedAlphabet::parse_decl(const std::string& body, int line_no) {
  RankedAlphabet alpha;
  std::istringstream in(body);
  std::string item;
  while (in >> item) {
    auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
      throw ParseError(line_no, 1, "expected name:arity, got '" + item + "'");
    std::string name = item.substr(0, colon);
    std::string ar = item.substr(colon + 1);
    if (!std::all_of(ar.begin(), ar.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ParseError(line_no, 1, "bad arity in '" + item + "'");
    alpha.add_symbol(name, std::stoi(ar));
  }
  return alpha;
}

std::string RankedAlphabet::to_decl() const {
  std::string out = "%terminals";
  for (const auto& [name, ar] : symbols_) out += " " + name + ":" + std::to_string(ar);
  return out;
}

}  // namespace horsmc
