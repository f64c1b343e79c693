#include "horsmc/semantics.hpp"

#include <algorithm>
#include <functional>

#include "horsmc/error.hpp"

namespace horsmc::sem {

namespace {

size_t mix(size_t a, size_t b) { return a * 1000003u ^ (b + 0x9e3779b9u + (a << 6) + (a >> 2)); }

ValuePtr make_base(uint64_t mask) {
  auto v = std::make_shared<SemValue>();
  v->type = types::base();
  v->mask = mask;
  v->hash = mix(0x5eed, static_cast<size_t>(mask));
  return v;
}

ValuePtr make_arrow(TypeId type, std::vector<std::pair<ValuePtr, ValuePtr>> steps) {
  auto v = std::make_shared<SemValue>();
  v->type = type;
  v->steps = std::move(steps);
  size_t h = mix(0xa110, static_cast<size_t>(type));
  for (const auto& [a, r] : v->steps) h = mix(mix(h, a->hash), r->hash);
  v->hash = h;
  return v;
}

}  // namespace

ValuePtr base_value(uint64_t mask) { return make_base(mask); }

ValuePtr bottom(TypeId type) {
  if (types::is_base(type)) return make_base(0);
  return make_arrow(type, {});
}

bool is_bottom(const ValuePtr& v) { return v->is_base() ? v->mask == 0 : v->steps.empty(); }

ValuePtr step_function(const ValuePtr& arg, const ValuePtr& result) {
  TypeId type = types::arrow(arg->type, result->type);
  if (is_bottom(result)) return make_arrow(type, {});
  return make_arrow(type, {{arg, result}});
}

ValuePtr step_function(const std::vector<ValuePtr>& args, const ValuePtr& result) {
  ValuePtr v = result;
  for (size_t i = args.size(); i-- > 0;) v = step_function(args[i], v);
  return v;
}

int compare(const ValuePtr& a, const ValuePtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->type != b->type) return a->type < b->type ? -1 : 1;
  if (a->is_base()) return a->mask == b->mask ? 0 : (a->mask < b->mask ? -1 : 1);
  size_t n = std::min(a->steps.size(), b->steps.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a->steps[i].first, b->steps[i].first);
    if (c) return c;
    c = compare(a->steps[i].second, b->steps[i].second);
    if (c) return c;
  }
  if (a->steps.size() != b->steps.size()) return a->steps.size() < b->steps.size() ? -1 : 1;
  return 0;
}

bool equal(const ValuePtr& a, const ValuePtr& b) { return compare(a, b) == 0; }

bool leq(const ValuePtr& a, const ValuePtr& b) {
  if (a->type != b->type) throw Error("leq: type mismatch");
  if (a->is_base()) return (a->mask & ~b->mask) == 0;
  // Arguments not listed in a map to bottom, which is below anything.
  for (const auto& [arg, res] : a->steps)
    if (!leq(res, apply(b, arg))) return false;
  return true;
}

ValuePtr join(const ValuePtr& a, const ValuePtr& b) {
  if (a->type != b->type) throw Error("join: type mismatch");
  if (a->is_base()) return make_base(a->mask | b->mask);
  std::vector<std::pair<ValuePtr, ValuePtr>> steps;
  size_t i = 0, j = 0;
  while (i < a->steps.size() || j < b->steps.size()) {
    if (i == a->steps.size()) {
      steps.push_back(b->steps[j++]);
    } else if (j == b->steps.size()) {
      steps.push_back(a->steps[i++]);
    } else {
      int c = compare(a->steps[i].first, b->steps[j].first);
      if (c < 0)
        steps.push_back(a->steps[i++]);
      else if (c > 0)
        steps.push_back(b->steps[j++]);
      else {
        steps.emplace_back(a->steps[i].first, join(a->steps[i].second, b->steps[j].second));
        ++i;
        ++j;
      }
    }
  }
  return make_arrow(a->type, std::move(steps));
}

ValuePtr apply(const ValuePtr& f, const ValuePtr& a) {
  if (f->is_base()) throw Error("apply: not a function value");
  if (a->type != types::argument(f->type)) throw Error("apply: argument type mismatch");
  ValuePtr out = bottom(types::result(f->type));
  for (const auto& [arg, res] : f->steps)
    if (compare(arg, a) == 0) out = join(out, res);
  return out;
}

DomainSize domain_size(TypeId type, int q, uint64_t cap) {
  if (types::is_base(type)) {
    if (q >= 63) return {true, 0};
    uint64_t n = uint64_t{1} << q;
    return {n > cap, n};
  }
  DomainSize dom = domain_size(types::argument(type), q, cap);
  DomainSize res = domain_size(types::result(type), q, cap);
  if (dom.too_large || res.too_large) return {true, 0};
  // res.n ^ dom.n, saturating just above the cap
  uint64_t n = 1;
  for (uint64_t i = 0; i < dom.n; ++i) {
    if (res.n != 0 && n > cap / res.n + 1) return {true, 0};
    n *= res.n;
    if (n > cap) return {true, 0};
  }
  return {n > cap, n};
}

std::vector<ValuePtr> enumerate_domain(TypeId type, int q, uint64_t cap) {
  DomainSize size = domain_size(type, q, cap);
  if (size.too_large)
    throw Error("domain of " + types::to_string(type) + " exceeds the cap (" +
                std::to_string(cap) + ")");
  if (types::is_base(type)) {
    std::vector<ValuePtr> out;
    out.reserve(size.n);
    for (uint64_t m = 0; m < size.n; ++m) out.push_back(make_base(m));
    return out;
  }
  std::vector<ValuePtr> args = enumerate_domain(types::argument(type), q, cap);
  std::vector<ValuePtr> results = enumerate_domain(types::result(type), q, cap);
  // odometer, first argument's image most significant
  std::vector<size_t> digits(args.size(), 0);
  std::vector<ValuePtr> out;
  out.reserve(size.n);
  while (true) {
    std::vector<std::pair<ValuePtr, ValuePtr>> steps;
    for (size_t i = 0; i < args.size(); ++i)
      if (!is_bottom(results[digits[i]])) steps.emplace_back(args[i], results[digits[i]]);
    std::sort(steps.begin(), steps.end(),
              [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
    out.push_back(make_arrow(type, std::move(steps)));
    size_t i = args.size();
    while (i-- > 0) {
      if (++digits[i] < results.size()) break;
      digits[i] = 0;
      if (i == 0) return out;
    }
    if (args.empty()) return out;
  }
}

namespace {

uint64_t lift_delay_mask(const TrivialAutomaton& a, int delay_symbol, uint64_t mask) {
  uint64_t out = 0;
  for (int q = 0; q < a.state_count(); ++q)
    for (const auto& tuple : a.tuples(q, delay_symbol))
      if (mask & (uint64_t{1} << tuple[0])) {
        out |= uint64_t{1} << q;
        break;
      }
  return out;
}

}  // namespace

ValuePtr lift_delay(const TrivialAutomaton& a, int delay_symbol, const ValuePtr& f) {
  if (delay_symbol < 0 || delay_symbol >= a.alphabet.size() || a.alphabet.arity(delay_symbol) != 1)
    throw Error("lift_delay: delay symbol must be unary");
  if (f->is_base()) return make_base(lift_delay_mask(a, delay_symbol, f->mask));
  std::vector<std::pair<ValuePtr, ValuePtr>> steps;
  for (const auto& [arg, res] : f->steps) {
    ValuePtr lifted = lift_delay(a, delay_symbol, res);
    if (!is_bottom(lifted)) steps.emplace_back(arg, lifted);
  }
  return make_arrow(f->type, std::move(steps));
}

uint64_t terminal_result_mask(const TrivialAutomaton& a, int symbol,
                              const std::vector<uint64_t>& args) {
  uint64_t out = 0;
  for (int q = 0; q < a.state_count(); ++q)
    for (const auto& tuple : a.tuples(q, symbol)) {
      bool inside = true;
      for (size_t i = 0; i < tuple.size() && inside; ++i)
        inside = (args[i] & (uint64_t{1} << tuple[i])) != 0;
      if (inside) {
        out |= uint64_t{1} << q;
        break;
      }
    }
  return out;
}

namespace {

ValuePtr terminal_table_rec(const TrivialAutomaton& a, int symbol, std::vector<uint64_t>& args,
                            int remaining, TypeId type, uint64_t domain) {
  if (remaining == 0) return base_value(terminal_result_mask(a, symbol, args));
  std::vector<std::pair<ValuePtr, ValuePtr>> steps;
  for (uint64_t m = 0; m < domain; ++m) {
    args.push_back(m);
    ValuePtr res = terminal_table_rec(a, symbol, args, remaining - 1, types::result(type), domain);
    args.pop_back();
    if (!is_bottom(res)) steps.emplace_back(base_value(m), res);
  }
  return make_arrow(type, std::move(steps));
}

}  // namespace

ValuePtr terminal_table(const TrivialAutomaton& a, int symbol, uint64_t cap) {
  int ar = a.alphabet.arity(symbol);
  if (a.state_count() >= 20) throw Error("terminal_table: too many states");
  uint64_t domain = uint64_t{1} << a.state_count();
  uint64_t total = 1;
  for (int i = 0; i < ar; ++i) {
    total *= domain;
    if (total > cap) throw Error("terminal_table: table exceeds the cap");
  }
  TypeId type = types::base();
  for (int i = 0; i < ar; ++i) type = types::arrow(types::base(), type);
  std::vector<uint64_t> args;
  return terminal_table_rec(a, symbol, args, ar, type, domain);
}

bool leq_terminal(const TrivialAutomaton& a, int symbol, const ValuePtr& v) {
  // Check v(args) <= result mask on every argument pattern of v; everything
  // else maps to bottom.
  std::vector<uint64_t> args;
  std::function<bool(const ValuePtr&)> walk = [&](const ValuePtr& cur) -> bool {
    if (cur->is_base())
      return (cur->mask & ~terminal_result_mask(a, symbol, args)) == 0;
    for (const auto& [arg, res] : cur->steps) {
      if (!arg->is_base()) throw Error("leq_terminal: non-base argument for a terminal");
      args.push_back(arg->mask);
      bool ok = walk(res);
      args.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  if (static_cast<int>(types::arity(v->type)) != a.alphabet.arity(symbol))
    throw Error("leq_terminal: value arity does not match the terminal");
  return walk(v);
}

namespace {

bool is_identity(const ValuePtr& v, int q) {
  // identity over [[o]]: every non-empty mask maps to itself
  if (q >= 20) return false;
  uint64_t domain = uint64_t{1} << q;
  if (v->steps.size() != domain - 1) return false;
  for (const auto& [arg, res] : v->steps)
    if (!arg->is_base() || !res->is_base() || arg->mask != res->mask) return false;
  return true;
}

bool is_swap(const ValuePtr& v, int q) {
  if (q != 2) return false;
  if (v->steps.size() != 3) return false;
  for (const auto& [arg, res] : v->steps) {
    if (!arg->is_base() || !res->is_base()) return false;
    uint64_t expect = arg->mask == 1 ? 2 : arg->mask == 2 ? 1 : arg->mask;
    if (res->mask != expect) return false;
  }
  return true;
}

TypeId oo() { return types::arrow(types::base(), types::base()); }

}  // namespace

std::string display(const ValuePtr& v, const std::vector<std::string>& states) {
  if (v->is_base()) {
    std::string out = "{";
    bool first = true;
    for (size_t q = 0; q < states.size(); ++q)
      if (v->mask & (uint64_t{1} << q)) {
        if (!first) out += ",";
        out += states[q];
        first = false;
      }
    return out + "}";
  }
  int q = static_cast<int>(states.size());
  if (v->type == oo()) {
    if (is_identity(v, q)) return "id";
    if (is_swap(v, q)) return "swap";
  }
  if (v->steps.empty()) return "bot";
  std::string out;
  for (size_t i = 0; i < v->steps.size(); ++i) {
    if (i) out += " \\/ ";
    out += "[" + display(v->steps[i].first, states) + " |-> " +
           display(v->steps[i].second, states) + "]";
  }
  return out;
}

namespace {

void skip_ws(const std::string& s, size_t& pos) {
  while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

bool eat(const std::string& s, size_t& pos, const std::string& token) {
  skip_ws(s, pos);
  if (s.compare(pos, token.size(), token) == 0) {
    pos += token.size();
    return true;
  }
  return false;
}

[[noreturn]] void value_fail(const std::string& s, size_t pos, const std::string& msg) {
  throw Error("value syntax at offset " + std::to_string(pos) + ": " + msg + " in '" + s + "'");
}

int state_index(const std::vector<std::string>& states, const std::string& name) {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  return -1;
}

ValuePtr parse_single(const std::string& s, size_t& pos, TypeId type,
                      const std::vector<std::string>& states) {
  skip_ws(s, pos);
  if (pos >= s.size()) value_fail(s, pos, "unexpected end");
  if (s[pos] == '{') {
    if (!types::is_base(type)) value_fail(s, pos, "base set where a function was expected");
    ++pos;
    uint64_t mask = 0;
    skip_ws(s, pos);
    while (pos < s.size() && s[pos] != '}') {
      size_t start = pos;
      while (pos < s.size() && s[pos] != ',' && s[pos] != '}' &&
             !isspace(static_cast<unsigned char>(s[pos])))
        ++pos;
      std::string name = s.substr(start, pos - start);
      int q = state_index(states, name);
      if (q < 0) value_fail(s, start, "unknown state '" + name + "'");
      mask |= uint64_t{1} << q;
      skip_ws(s, pos);
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        skip_ws(s, pos);
      }
    }
    if (pos >= s.size()) value_fail(s, pos, "missing '}'");
    ++pos;
    return base_value(mask);
  }
  if (s[pos] == '[') {
    if (types::is_base(type)) value_fail(s, pos, "step function where a base set was expected");
    ++pos;
    ValuePtr arg = parse_value_at(s, pos, types::argument(type), states);
    if (!eat(s, pos, "|->")) value_fail(s, pos, "expected '|->'");
    ValuePtr res = parse_value_at(s, pos, types::result(type), states);
    skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != ']') value_fail(s, pos, "missing ']'");
    ++pos;
    return step_function(arg, res);
  }
  if (eat(s, pos, "bot")) return bottom(type);
  if (eat(s, pos, "id")) {
    if (type != oo()) value_fail(s, pos, "'id' only denotes a value at type o->o");
    std::vector<std::pair<ValuePtr, ValuePtr>> steps;
    uint64_t domain = uint64_t{1} << states.size();
    for (uint64_t m = 1; m < domain; ++m) steps.emplace_back(base_value(m), base_value(m));
    return make_arrow(type, std::move(steps));
  }
  if (eat(s, pos, "swap")) {
    if (type != oo() || states.size() != 2) value_fail(s, pos, "'swap' needs two states at o->o");
    std::vector<std::pair<ValuePtr, ValuePtr>> steps{{base_value(1), base_value(2)},
                                                     {base_value(2), base_value(1)},
                                                     {base_value(3), base_value(3)}};
    return make_arrow(type, std::move(steps));
  }
  value_fail(s, pos, "expected a value");
}

}  // namespace

ValuePtr parse_value_at(const std::string& text, size_t& pos, TypeId type,
                        const std::vector<std::string>& states) {
  ValuePtr v = parse_single(text, pos, type, states);
  while (true) {
    size_t save = pos;
    if (!eat(text, pos, "\\/")) {
      pos = save;
      return v;
    }
    ValuePtr w = parse_single(text, pos, type, states);
    v = join(v, w);
  }
}

ValuePtr parse_value(const std::string& text, TypeId type, const std::vector<std::string>& states) {
  size_t pos = 0;
  ValuePtr v = parse_value_at(text, pos, type, states);
  skip_ws(text, pos);
  if (pos != text.size()) throw Error("value syntax: trailing '" + text.substr(pos) + "'");
  return v;
}

}  // namespace horsmc::sem
