#include "horsmc/types.hpp"

#include <map>
#include <mutex>

#include "horsmc/error.hpp"

namespace horsmc::types {

namespace {

struct Store {
  std::mutex mu;
  std::vector<std::pair<TypeId, TypeId>> nodes{{-1, -1}};  // id 0 = base
  std::map<std::pair<TypeId, TypeId>, TypeId> index;
};

Store& store() {
  static Store s;
  return s;
}

}  // namespace

TypeId base() { return 0; }

TypeId arrow(TypeId arg, TypeId result) {
  Store& s = store();
  std::lock_guard<std::mutex> lock(s.mu);
  auto key = std::make_pair(arg, result);
  auto it = s.index.find(key);
  if (it != s.index.end()) return it->second;
  s.nodes.push_back(key);
  TypeId id = static_cast<TypeId>(s.nodes.size()) - 1;
  s.index[key] = id;
  return id;
}

bool is_base(TypeId t) { return t == 0; }

TypeId argument(TypeId t) {
  Store& s = store();
  std::lock_guard<std::mutex> lock(s.mu);
  return s.nodes[t].first;
}

TypeId result(TypeId t) {
  Store& s = store();
  std::lock_guard<std::mutex> lock(s.mu);
  return s.nodes[t].second;
}

int arity(TypeId t) {
  int n = 0;
  while (!is_base(t)) {
    t = result(t);
    ++n;
  }
  return n;
}

int order(TypeId t) {
  if (is_base(t)) return 0;
  int oa = order(argument(t));
  int ob = order(result(t));
  return std::max(oa + 1, ob);
}

std::vector<TypeId> argument_spine(TypeId t) {
  std::vector<TypeId> args;
  while (!is_base(t)) {
    args.push_back(argument(t));
    t = result(t);
  }
  return args;
}

std::string to_string(TypeId t) {
  if (is_base(t)) return "o";
  TypeId a = argument(t);
  std::string left = is_base(a) ? "o" : "(" + to_string(a) + ")";
  return left + "->" + to_string(result(t));
}

namespace {

TypeId parse_type(const std::string& s, size_t& i);

TypeId parse_atom(const std::string& s, size_t& i) {
  while (i < s.size() && isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i >= s.size()) throw Error("type syntax: unexpected end in '" + s + "'");
  if (s[i] == 'o') {
    ++i;
    return base();
  }
  if (s[i] == '(') {
    ++i;
    TypeId t = parse_type(s, i);
    while (i < s.size() && isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size() || s[i] != ')') throw Error("type syntax: missing ')' in '" + s + "'");
    ++i;
    return t;
  }
  throw Error("type syntax: unexpected '" + s.substr(i, 1) + "' in '" + s + "'");
}

TypeId parse_type(const std::string& s, size_t& i) {
  TypeId left = parse_atom(s, i);
  while (i < s.size() && isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i + 1 < s.size() && s[i] == '-' && s[i + 1] == '>') {
    i += 2;
    return arrow(left, parse_type(s, i));
  }
  return left;
}

}  // namespace

TypeId parse(const std::string& text) {
  size_t i = 0;
  TypeId t = parse_type(text, i);
  while (i < text.size() && isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) throw Error("type syntax: trailing '" + text.substr(i) + "'");
  return t;
}

}  // namespace horsmc::types
