#include "horsmc/automaton.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "horsmc/error.hpp"

namespace horsmc {

int TrivialAutomaton::state_index(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  return -1;
}

int TrivialAutomaton::require_state(const std::string& name) const {
  int q = state_index(name);
  if (q < 0) throw Error("unknown state '" + name + "'");
  return q;
}

bool TrivialAutomaton::is_initial(int q) const {
  return std::binary_search(initial.begin(), initial.end(), q);
}

void TrivialAutomaton::init_delta() {
  delta.assign(states.size(), std::vector<std::vector<std::vector<int>>>(alphabet.size()));
}

void TrivialAutomaton::add_transition(int q, int f, std::vector<int> tuple) {
  delta[q][f].push_back(std::move(tuple));
}

void TrivialAutomaton::normalize() {
  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
  for (auto& per_state : delta)
    for (auto& tuples : per_state) {
      std::sort(tuples.begin(), tuples.end());
      tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    }
}

std::vector<std::string> validate(const TrivialAutomaton& a) {
  std::vector<std::string> errors;
  std::set<std::string> seen;
  for (const auto& s : a.states)
    if (!seen.insert(s).second) errors.push_back("duplicate state '" + s + "'");
  for (int q : a.initial)
    if (q < 0 || q >= a.state_count())
      errors.push_back("initial state index " + std::to_string(q) + " out of range");
  if (static_cast<int>(a.delta.size()) != a.state_count()) {
    errors.push_back("transition table has wrong number of state rows");
    return errors;
  }
  for (int q = 0; q < a.state_count(); ++q) {
    if (static_cast<int>(a.delta[q].size()) != a.alphabet.size()) {
      errors.push_back("transition row of '" + a.states[q] + "' has wrong number of symbols");
      continue;
    }
    for (int f = 0; f < a.alphabet.size(); ++f)
      for (const auto& tuple : a.delta[q][f]) {
        if (static_cast<int>(tuple.size()) != a.alphabet.arity(f))
          errors.push_back("tuple for (" + a.states[q] + ", " + a.alphabet.name(f) +
                           ") has length " + std::to_string(tuple.size()) + ", arity is " +
                           std::to_string(a.alphabet.arity(f)));
        for (int p : tuple)
          if (p < 0 || p >= a.state_count())
            errors.push_back("tuple for (" + a.states[q] + ", " + a.alphabet.name(f) +
                             ") mentions an unknown state");
      }
  }
  return errors;
}

TrivialAutomaton parse_automaton(const std::string& text) {
  TrivialAutomaton a;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_terminals = false, have_states = false;
  std::vector<std::tuple<int, std::string, std::string, std::string>> transitions;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    auto pos = trimmed.find('#');
    if (pos != std::string::npos) trimmed.erase(pos);
    while (!trimmed.empty() && isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.pop_back();
    size_t start = 0;
    while (start < trimmed.size() && isspace(static_cast<unsigned char>(trimmed[start]))) ++start;
    trimmed = trimmed.substr(start);
    if (trimmed.empty()) continue;
    if (trimmed.rfind("%terminals", 0) == 0) {
      a.alphabet = RankedAlphabet::parse_decl(trimmed.substr(10), line_no);
      have_terminals = true;
    } else if (trimmed.rfind("%states", 0) == 0) {
      std::istringstream ss(trimmed.substr(7));
      std::string s;
      while (ss >> s) {
        if (a.state_index(s) >= 0) throw ParseError(line_no, 1, "duplicate state '" + s + "'");
        a.states.push_back(s);
      }
      have_states = true;
    } else if (trimmed.rfind("%initial", 0) == 0) {
      if (!have_states) throw ParseError(line_no, 1, "%initial before %states");
      std::istringstream ss(trimmed.substr(8));
      std::string s;
      while (ss >> s) a.initial.push_back(a.require_state(s));
    } else {
      // transition: state symbol -> (q1,q2)
      std::istringstream ss(trimmed);
      std::string st, sym, arrow, rest;
      if (!(ss >> st >> sym >> arrow) || arrow != "->")
        throw ParseError(line_no, 1, "expected 'state symbol -> (tuple)'");
      std::getline(ss, rest);
      transitions.emplace_back(line_no, st, sym, rest);
    }
  }
  if (!have_terminals) throw Error("automaton file: missing %terminals");
  if (!have_states) throw Error("automaton file: missing %states");
  a.init_delta();
  for (auto& [ln, st, sym, rest] : transitions) {
    int q = a.state_index(st);
    if (q < 0) throw ParseError(ln, 1, "unknown state '" + st + "'");
    int f = a.alphabet.index_of(sym);
    if (f < 0) throw ParseError(ln, 1, "unknown symbol '" + sym + "'");
    std::string body = rest;
    body.erase(std::remove_if(body.begin(), body.end(),
                              [](char c) { return isspace(static_cast<unsigned char>(c)); }),
               body.end());
    if (body.size() < 2 || body.front() != '(' || body.back() != ')')
      throw ParseError(ln, 1, "expected a parenthesized tuple");
    body = body.substr(1, body.size() - 2);
    std::vector<int> tuple;
    if (!body.empty()) {
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        int p = a.state_index(item);
        if (p < 0) throw ParseError(ln, 1, "unknown state '" + item + "' in tuple");
        tuple.push_back(p);
      }
    }
    if (static_cast<int>(tuple.size()) != a.alphabet.arity(f))
      throw ParseError(ln, 1, "tuple length " + std::to_string(tuple.size()) +
                                  " does not match arity of '" + sym + "'");
    a.add_transition(q, f, std::move(tuple));
  }
  a.normalize();
  return a;
}

std::string to_text(const TrivialAutomaton& a) {
  std::ostringstream out;
  out << a.alphabet.to_decl() << "\n";
  out << "%states";
  for (const auto& s : a.states) out << " " << s;
  out << "\n%initial";
  for (int q : a.initial) out << " " << a.states[q];
  out << "\n";
  for (int q = 0; q < a.state_count(); ++q)
    for (int f = 0; f < a.alphabet.size(); ++f)
      for (const auto& tuple : a.delta[q][f]) {
        out << a.states[q] << " " << a.alphabet.name(f) << " -> (";
        for (size_t i = 0; i < tuple.size(); ++i) {
          if (i) out << ",";
          out << a.states[tuple[i]];
        }
        out << ")\n";
      }
  return out.str();
}

namespace {

struct RunKey {
  const TermSource* node;
  int q;
  int depth;
  bool operator<(const RunKey& o) const {
    return std::tie(node, q, depth) < std::tie(o.node, o.q, o.depth);
  }
};

class RunSearch {
 public:
  RunSearch(const TrivialAutomaton& a, int level) : a_(a), level_(level) {}

  bool can(const SourcePtr& s, int q, int depth) {
    if (depth == level_) return true;
    RunKey key{s.get(), q, depth};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool ok = false;
    int f = s->label();
    for (const auto& tuple : a_.tuples(q, f)) {
      bool all = true;
      for (size_t i = 0; i < tuple.size() && all; ++i)
        all = can(s->child(static_cast<int>(i)), tuple[i], depth + 1);
      if (all) {
        ok = true;
        break;
      }
    }
    memo_[key] = ok;
    return ok;
  }

  // Rebuilds one witness labeling; only called after can() succeeded.
  void label(const SourcePtr& s, int q, int depth, PrefixTree& tree, std::vector<int>& state,
             int node_id) {
    state[node_id] = q;
    if (depth == level_) return;
    int f = s->label();
    for (const auto& tuple : a_.tuples(q, f)) {
      bool all = true;
      for (size_t i = 0; i < tuple.size() && all; ++i)
        all = can(s->child(static_cast<int>(i)), tuple[i], depth + 1);
      if (all) {
        const auto& children = tree.nodes[node_id].children;
        for (size_t i = 0; i < tuple.size(); ++i)
          label(s->child(static_cast<int>(i)), tuple[i], depth + 1, tree, state, children[i]);
        return;
      }
    }
    throw std::logic_error("run labeling reconstruction diverged from search");
  }

 private:
  const TrivialAutomaton& a_;
  int level_;
  std::map<RunKey, bool> memo_;
};

}  // namespace

bool has_run_up_to(const TrivialAutomaton& a, const SourcePtr& t, int n, int q) {
  RunSearch search(a, n);
  return search.can(t, q, 0);
}

std::optional<RunLabeling> run_up_to(const TrivialAutomaton& a, const SourcePtr& t, int n, int q) {
  RunSearch search(a, n);
  if (!search.can(t, q, 0)) return std::nullopt;
  RunLabeling run;
  run.tree = expand_prefix(t, n);
  run.state.assign(run.tree.nodes.size(), -1);
  // Parallel walk: prefix node ids were assigned breadth-first, redo the
  // traversal depth-first using the recorded child ids.
  search.label(t, q, 0, run.tree, run.state, run.tree.root());
  return run;
}

bool accepts_up_to(const TrivialAutomaton& a, const SourcePtr& t, int n) {
  for (int q : a.initial)
    if (has_run_up_to(a, t, n, q)) return true;
  return false;
}

namespace {

bool complete_run_rec(const TrivialAutomaton& a, const PrefixTree& t, int node, int q,
                      std::vector<std::vector<int8_t>>& memo) {
  int8_t& slot = memo[node][q];
  if (slot != -1) return slot == 1;
  slot = 0;
  bool ok = false;
  int f = t.nodes[node].label;
  for (const auto& tuple : a.tuples(q, f)) {
    bool all = true;
    for (size_t i = 0; i < tuple.size() && all; ++i)
      all = complete_run_rec(a, t, t.nodes[node].children[i], tuple[i], memo);
    if (all) {
      ok = true;
      break;
    }
  }
  slot = ok ? 1 : 0;
  return ok;
}

}  // namespace

bool has_complete_run(const TrivialAutomaton& a, const PrefixTree& t, int q) {
  if (!t.fully_expanded()) throw Error("complete run requires a fully expanded tree");
  std::vector<std::vector<int8_t>> memo(t.nodes.size(),
                                        std::vector<int8_t>(a.state_count(), -1));
  return complete_run_rec(a, t, t.root(), q, memo);
}

bool accepts_complete(const TrivialAutomaton& a, const PrefixTree& t) {
  for (int q : a.initial)
    if (has_complete_run(a, t, q)) return true;
  return false;
}

namespace {

std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
  return base;
}

std::vector<std::vector<int>> all_tuples(int arity, int domain) {
  if (arity == 0) return {{}};
  if (domain == 0) return {};
  std::vector<std::vector<int>> out;
  std::vector<int> cur(arity, 0);
  while (true) {
    out.push_back(cur);
    int i = arity - 1;
    while (i >= 0 && ++cur[i] == domain) cur[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

TrivialAutomaton letter_automaton(const RankedAlphabet& alpha, int f) {
  if (f < 0 || f >= alpha.size()) throw Error("letter_automaton: unknown symbol");
  TrivialAutomaton a;
  a.alphabet = alpha;
  a.states = {"q0", "q1"};
  a.initial = {0};
  a.init_delta();
  for (int g = 0; g < alpha.size(); ++g) {
    a.add_transition(1, g, std::vector<int>(alpha.arity(g), 1));
    if (g == f) a.add_transition(0, g, std::vector<int>(alpha.arity(g), 1));
  }
  a.normalize();
  return a;
}

TrivialAutomaton union_automaton(const TrivialAutomaton& a0, const TrivialAutomaton& a1) {
  if (a0.alphabet != a1.alphabet) throw Error("union: operand alphabets differ");
  TrivialAutomaton a;
  a.alphabet = a0.alphabet;
  for (const auto& s : a0.states) a.states.push_back("0." + s);
  for (const auto& s : a1.states) a.states.push_back("1." + s);
  int off = a0.state_count();
  for (int q : a0.initial) a.initial.push_back(q);
  for (int q : a1.initial) a.initial.push_back(q + off);
  a.init_delta();
  for (int q = 0; q < a0.state_count(); ++q)
    for (int f = 0; f < a.alphabet.size(); ++f)
      for (const auto& tuple : a0.delta[q][f]) a.add_transition(q, f, tuple);
  for (int q = 0; q < a1.state_count(); ++q)
    for (int f = 0; f < a.alphabet.size(); ++f)
      for (auto tuple : a1.delta[q][f]) {
        for (int& p : tuple) p += off;
        a.add_transition(q + off, f, std::move(tuple));
      }
  a.normalize();
  return a;
}

TrivialAutomaton intersection_automaton(const TrivialAutomaton& a0, const TrivialAutomaton& a1) {
  if (a0.alphabet != a1.alphabet) throw Error("intersection: operand alphabets differ");
  TrivialAutomaton a;
  a.alphabet = a0.alphabet;
  int n1 = a1.state_count();
  auto pair_id = [n1](int p, int q) { return p * n1 + q; };
  for (int p = 0; p < a0.state_count(); ++p)
    for (int q = 0; q < n1; ++q) a.states.push_back(a0.states[p] + "*" + a1.states[q]);
  for (int p : a0.initial)
    for (int q : a1.initial) a.initial.push_back(pair_id(p, q));
  a.init_delta();
  for (int p = 0; p < a0.state_count(); ++p)
    for (int q = 0; q < n1; ++q)
      for (int f = 0; f < a.alphabet.size(); ++f)
        for (const auto& t0 : a0.delta[p][f])
          for (const auto& t1 : a1.delta[q][f]) {
            std::vector<int> tuple(t0.size());
            for (size_t i = 0; i < t0.size(); ++i) tuple[i] = pair_id(t0[i], t1[i]);
            a.add_transition(pair_id(p, q), f, std::move(tuple));
          }
  a.normalize();
  return a;
}

TrivialAutomaton project_automaton(const TrivialAutomaton& a, const Projection& pi) {
  if (a.alphabet != pi.from) throw Error("project: projection domain differs from automaton alphabet");
  TrivialAutomaton out;
  out.alphabet = pi.to;
  out.states = a.states;
  out.initial = a.initial;
  out.init_delta();
  for (int q = 0; q < a.state_count(); ++q)
    for (int f = 0; f < pi.from.size(); ++f)
      for (const auto& tuple : a.delta[q][f]) out.add_transition(q, pi.map[f], tuple);
  out.normalize();
  return out;
}

TrivialAutomaton lift_ax(const TrivialAutomaton& a) {
  TrivialAutomaton out = a;
  int q0 = out.state_count();
  out.states.push_back(fresh_name(out.states, "q0"));
  out.initial = {q0};
  out.init_delta();
  for (int q = 0; q < a.state_count(); ++q)
    for (int f = 0; f < a.alphabet.size(); ++f) out.delta[q][f] = a.delta[q][f];
  for (int f = 0; f < out.alphabet.size(); ++f) {
    int ar = out.alphabet.arity(f);
    // every tuple of initial states of a
    std::vector<std::vector<int>> tuples;
    if (a.initial.empty()) {
      if (ar == 0) tuples.push_back({});
    } else {
      for (const auto& combo : all_tuples(ar, static_cast<int>(a.initial.size()))) {
        std::vector<int> t(ar);
        for (int i = 0; i < ar; ++i) t[i] = a.initial[combo[i]];
        tuples.push_back(std::move(t));
      }
    }
    for (auto& t : tuples) out.add_transition(q0, f, std::move(t));
  }
  out.normalize();
  return out;
}

TrivialAutomaton lift_ex(const TrivialAutomaton& a) {
  TrivialAutomaton out = a;
  int q0 = out.state_count();
  out.states.push_back(fresh_name(out.states, "q0"));
  int qf = out.state_count();
  out.states.push_back(fresh_name(out.states, "qf"));
  out.initial = {q0};
  out.init_delta();
  for (int q = 0; q < a.state_count(); ++q)
    for (int f = 0; f < a.alphabet.size(); ++f) out.delta[q][f] = a.delta[q][f];
  for (int f = 0; f < out.alphabet.size(); ++f) {
    int ar = out.alphabet.arity(f);
    out.add_transition(qf, f, std::vector<int>(ar, qf));
    for (int i = 0; i < ar; ++i)
      for (int qi : a.initial) {
        std::vector<int> t(ar, qf);
        t[i] = qi;
        out.add_transition(q0, f, std::move(t));
      }
  }
  out.normalize();
  return out;
}

namespace {

std::string mask_name(const TrivialAutomaton& a, unsigned mask) {
  std::string s = "{";
  bool first = true;
  for (int q = 0; q < a.state_count(); ++q)
    if (mask & (1u << q)) {
      if (!first) s += "+";
      s += a.states[q];
      first = false;
    }
  return s + "}";
}

// Whether every q in mask can take a transition on f whose components land
// in the child masks.
bool mask_transition_ok(const TrivialAutomaton& a, unsigned mask, int f,
                        const std::vector<unsigned>& child_masks) {
  for (int q = 0; q < a.state_count(); ++q) {
    if (!(mask & (1u << q))) continue;
    bool found = false;
    for (const auto& tuple : a.tuples(q, f)) {
      bool inside = true;
      for (size_t i = 0; i < tuple.size() && inside; ++i)
        inside = (child_masks[i] & (1u << tuple[i])) != 0;
      if (inside) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

unsigned initial_mask(const TrivialAutomaton& a) {
  unsigned m = 0;
  for (int q : a.initial) m |= 1u << q;
  return m;
}

}  // namespace

TrivialAutomaton lift_ag(const TrivialAutomaton& a) {
  int n = a.state_count();
  if (n > 20) throw Error("lift_ag: too many states for the powerset construction");
  unsigned count = 1u << n;
  unsigned imask = initial_mask(a);
  TrivialAutomaton out;
  out.alphabet = a.alphabet;
  for (unsigned m = 0; m < count; ++m) out.states.push_back(mask_name(a, m));
  for (unsigned m = 0; m < count; ++m)
    if (m & imask) out.initial.push_back(static_cast<int>(m));
  out.init_delta();
  for (unsigned m = 0; m < count; ++m)
    for (int f = 0; f < a.alphabet.size(); ++f) {
      int ar = a.alphabet.arity(f);
      for (const auto& combo : all_tuples(ar, static_cast<int>(count))) {
        std::vector<unsigned> child_masks(combo.begin(), combo.end());
        bool reseeded = true;
        for (unsigned cm : child_masks)
          if (!(cm & imask)) reseeded = false;
        if (!reseeded) continue;
        if (!mask_transition_ok(a, m, f, child_masks)) continue;
        out.add_transition(static_cast<int>(m), f, std::vector<int>(combo.begin(), combo.end()));
      }
    }
  out.normalize();
  return out;
}

TrivialAutomaton lift_eg(const TrivialAutomaton& a) {
  int n = a.state_count();
  if (n > 16) throw Error("lift_eg: too many states for the powerset construction");
  unsigned count = 1u << n;
  unsigned imask = initial_mask(a);
  TrivialAutomaton out;
  out.alphabet = a.alphabet;
  // states: first all on-path sets, then all released sets
  auto path_id = [](unsigned m) { return static_cast<int>(m); };
  auto rel_id = [count](unsigned m) { return static_cast<int>(count + m); };
  for (unsigned m = 0; m < count; ++m) out.states.push_back(mask_name(a, m) + "!");
  for (unsigned m = 0; m < count; ++m) out.states.push_back(mask_name(a, m));
  for (unsigned m = 0; m < count; ++m)
    if (m & imask) out.initial.push_back(path_id(m));
  out.init_delta();
  for (unsigned m = 0; m < count; ++m)
    for (int f = 0; f < a.alphabet.size(); ++f) {
      int ar = a.alphabet.arity(f);
      if (ar == 0) {
        // The path ends here; all carried obligations must close.
        if (mask_transition_ok(a, m, f, {})) {
          out.add_transition(path_id(m), f, {});
          out.add_transition(rel_id(m), f, {});
        }
        continue;
      }
      for (const auto& combo : all_tuples(ar, static_cast<int>(count))) {
        std::vector<unsigned> child_masks(combo.begin(), combo.end());
        if (!mask_transition_ok(a, m, f, child_masks)) continue;
        // released: all children released, no reseeding
        std::vector<int> rel_tuple(ar);
        for (int i = 0; i < ar; ++i) rel_tuple[i] = rel_id(child_masks[i]);
        out.add_transition(rel_id(m), f, rel_tuple);
        // on-path: exactly one child continues the path, reseeded
        for (int i = 0; i < ar; ++i) {
          if (!(child_masks[i] & imask)) continue;
          std::vector<int> tuple = rel_tuple;
          tuple[i] = path_id(child_masks[i]);
          out.add_transition(path_id(m), f, std::move(tuple));
        }
      }
    }
  out.normalize();
  return out;
}

TrivialAutomaton lift_delays(const TrivialAutomaton& a) {
  if (a.alphabet.has("R") || a.alphabet.has("b"))
    throw Error("lift_delays: alphabet already contains R or b");
  TrivialAutomaton out = a;
  int r = out.alphabet.add_symbol("R", 1);
  int b = out.alphabet.add_symbol("b", 1);
  out.init_delta();
  for (int q = 0; q < a.state_count(); ++q) {
    for (int f = 0; f < a.alphabet.size(); ++f) out.delta[q][f] = a.delta[q][f];
    out.add_transition(q, r, {q});
    out.add_transition(q, b, {q});
  }
  out.normalize();
  return out;
}

namespace {

void require_word(const TrivialAutomaton& a) {
  if (!a.alphabet.is_word_alphabet()) throw Error("expected a word alphabet (all arities 1)");
}

}  // namespace

bool lasso_accepts(const TrivialAutomaton& a, const std::vector<int>& u,
                   const std::vector<int>& v) {
  require_word(a);
  if (v.empty()) throw Error("lasso_accepts: empty cycle");
  int len = static_cast<int>(u.size() + v.size());
  auto letter = [&](int i) { return i < static_cast<int>(u.size()) ? u[i] : v[i - u.size()]; };
  auto next = [&](int i) { return i + 1 < len ? i + 1 : static_cast<int>(u.size()); };
  // A node (i, q) survives while some successor survives; the greatest fixed
  // point is exactly the set of nodes with an infinite run.
  std::vector<std::vector<bool>> alive(len, std::vector<bool>(a.state_count(), true));
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < len; ++i)
      for (int q = 0; q < a.state_count(); ++q) {
        if (!alive[i][q]) continue;
        bool ok = false;
        for (const auto& tuple : a.tuples(q, letter(i)))
          if (alive[next(i)][tuple[0]]) {
            ok = true;
            break;
          }
        if (!ok) {
          alive[i][q] = false;
          changed = true;
        }
      }
  }
  for (int q : a.initial)
    if (alive[0][q]) return true;
  return false;
}

namespace {

// One run labeling q_0..q_n on the first n letters of w, q_0 initial.
bool word_run(const TrivialAutomaton& a, const std::vector<int>& letters, size_t pos, int q,
              std::vector<int>& states) {
  states.push_back(q);
  if (pos == letters.size()) return true;
  for (const auto& tuple : a.tuples(q, letters[pos]))
    if (word_run(a, letters, pos + 1, tuple[0], states)) return true;
  states.pop_back();
  return false;
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> pump(const TrivialAutomaton& a, const SourcePtr& w) {
  require_word(a);
  int n = a.state_count() + 1;
  std::vector<int> letters;
  SourcePtr cur = w;
  for (int i = 0; i < n; ++i) {
    letters.push_back(cur->label());
    cur = cur->child(0);
  }
  std::vector<int> states;
  bool found = false;
  for (int q : a.initial) {
    states.clear();
    if (word_run(a, letters, 0, q, states)) {
      found = true;
      break;
    }
  }
  if (!found) throw Error("pump: no run up to level " + std::to_string(n));
  // |Q| = n-1, so among states q_0..q_{n-1} two coincide.
  int i = -1, j = -1;
  for (int x = 0; x < n && i < 0; ++x)
    for (int y = x + 1; y < n; ++y)
      if (states[x] == states[y]) {
        i = x;
        j = y;
        break;
      }
  std::vector<int> u(letters.begin(), letters.begin() + i);
  std::vector<int> v(letters.begin() + i, letters.begin() + j);
  return {u, v};
}

}  // namespace horsmc
