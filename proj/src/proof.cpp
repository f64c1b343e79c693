#include "horsmc/proof.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <set>

namespace horsmc {

namespace {

std::pair<int, int> delay_symbols(const TrivialAutomaton& a) {
  int r = a.alphabet.index_of("R");
  int b = a.alphabet.index_of("b");
  if (r < 0 || b < 0 || a.alphabet.arity(r) != 1 || a.alphabet.arity(b) != 1)
    throw Error("automaton has no unary delay symbols R and b; apply lift-delays first");
  return {r, b};
}

int fv_position(const std::vector<int>& fv, int k) {
  auto it = std::lower_bound(fv.begin(), fv.end(), k);
  if (it == fv.end() || *it != k) return -1;
  return static_cast<int>(it - fv.begin());
}

// Context of an App child, restricted from the parent's context.
std::vector<ValuePtr> child_ctx(const LambdaGraph& g, int parent,
                                const std::vector<ValuePtr>& pctx, int child) {
  std::vector<ValuePtr> out;
  const auto& pfv = g.free_vars[parent];
  for (int k : g.free_vars[child]) {
    int pos = fv_position(pfv, k);
    if (pos < 0) throw std::logic_error("child free variable missing from parent context");
    out.push_back(pctx[pos]);
  }
  return out;
}

// Context of an Abs body when the binder takes value `a`.
std::vector<ValuePtr> body_ctx(const LambdaGraph& g, int abs_node,
                               const std::vector<ValuePtr>& pctx, const ValuePtr& a) {
  std::vector<ValuePtr> out;
  const auto& pfv = g.free_vars[abs_node];
  int body = g.nodes[abs_node].a;
  for (int k : g.free_vars[body]) {
    if (k == 0) {
      out.push_back(a);
      continue;
    }
    int pos = fv_position(pfv, k - 1);
    if (pos < 0) throw std::logic_error("body free variable missing from context");
    out.push_back(pctx[pos]);
  }
  return out;
}

bool ctx_less(const std::vector<ValuePtr>& x, const std::vector<ValuePtr>& y) {
  size_t n = std::min(x.size(), y.size());
  for (size_t i = 0; i < n; ++i) {
    int c = sem::compare(x[i], y[i]);
    if (c) return c < 0;
  }
  return x.size() < y.size();
}

struct KeyLess {
  bool operator()(const Judgment& x, const Judgment& y) const {
    if (x.node != y.node) return x.node < y.node;
    if (ctx_less(x.ctx, y.ctx)) return true;
    if (ctx_less(y.ctx, x.ctx)) return false;
    return sem::compare(x.value, y.value) < 0;
  }
};

// Partial application of a terminal's largest semantic value to a prefix of
// base arguments; the result is a full table over the remaining positions.
ValuePtr terminal_partial(const TrivialAutomaton& a, int symbol, std::vector<uint64_t>& prefix,
                          int remaining, TypeId type) {
  if (remaining == 0) return sem::base_value(sem::terminal_result_mask(a, symbol, prefix));
  uint64_t domain = uint64_t{1} << a.state_count();
  ValuePtr out = sem::bottom(type);
  for (uint64_t m = 0; m < domain; ++m) {
    prefix.push_back(m);
    ValuePtr res = terminal_partial(a, symbol, prefix, remaining - 1, types::result(type));
    prefix.pop_back();
    if (!sem::is_bottom(res))
      out = sem::join(out, sem::step_function(sem::base_value(m), res));
  }
  return out;
}

// Candidate w with target <= lift(w), assuming state-preserving-ish deltas:
// collect every one-step successor of each state in the target sets.
ValuePtr delay_preimage(const TrivialAutomaton& a, int delay, const ValuePtr& target) {
  if (target->is_base()) {
    uint64_t mask = 0;
    for (int q = 0; q < a.state_count(); ++q)
      if (target->mask & (uint64_t{1} << q))
        for (const auto& tuple : a.tuples(q, delay)) mask |= uint64_t{1} << tuple[0];
    return sem::base_value(mask);
  }
  ValuePtr out = sem::bottom(target->type);
  for (const auto& [arg, res] : target->steps) {
    ValuePtr pre = delay_preimage(a, delay, res);
    if (!sem::is_bottom(pre)) out = sem::join(out, sem::step_function(arg, pre));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// certificate verification

std::vector<std::string> verify_certificate(const LambdaGraph& g, const TrivialAutomaton& a,
                                            const Certificate& cert) {
  std::vector<std::string> violations;
  if (!g.analyzed) {
    violations.push_back("graph is not analyzed");
    return violations;
  }
  int delay_r, delay_b;
  try {
    std::tie(delay_r, delay_b) = delay_symbols(a);
  } catch (const Error& e) {
    violations.push_back(e.what());
    return violations;
  }
  if (cert.state < 0 || cert.state >= a.state_count()) {
    violations.push_back("claimed state out of range");
    return violations;
  }

  std::map<Judgment, const CertEntry*, KeyLess> index;
  for (const auto& e : cert.entries) {
    if (e.node < 0 || e.node >= static_cast<int>(g.nodes.size())) {
      violations.push_back("entry with node id out of range");
      continue;
    }
    index[{e.node, e.ctx, e.value}] = &e;
  }
  auto present = [&](int node, const std::vector<ValuePtr>& ctx, const ValuePtr& value) {
    return index.count({node, ctx, value}) != 0;
  };

  // root claim
  {
    Judgment root{g.root, {}, sem::base_value(uint64_t{1} << cert.state)};
    if (!index.count(root))
      violations.push_back("missing root entry for state " + a.states[cert.state]);
  }

  int entry_no = 0;
  for (const auto& e : cert.entries) {
    ++entry_no;
    std::string where = "entry " + std::to_string(entry_no) + " (node " + std::to_string(e.node) + ")";
    if (e.node < 0 || e.node >= static_cast<int>(g.nodes.size())) continue;
    const auto& node = g.nodes[e.node];
    const auto& fv = g.free_vars[e.node];
    if (e.ctx.size() != fv.size()) {
      violations.push_back(where + ": context arity mismatch");
      continue;
    }
    bool ctx_ok = true;
    for (size_t i = 0; i < fv.size(); ++i)
      if (e.ctx[i]->type != g.free_var_types[e.node][i]) {
        violations.push_back(where + ": context value type mismatch");
        ctx_ok = false;
      }
    if (!ctx_ok) continue;
    if (!e.value || e.value->type != node.type) {
      violations.push_back(where + ": value type mismatch");
      continue;
    }
    switch (node.kind) {
      case LambdaGraph::NodeKind::Var: {
        if (!sem::leq(e.value, e.ctx[0]))
          violations.push_back(where + ": variable clause fails (value not below the context)");
        break;
      }
      case LambdaGraph::NodeKind::Term: {
        if (!sem::leq_terminal(a, node.a, e.value))
          violations.push_back(where + ": terminal clause fails");
        break;
      }
      case LambdaGraph::NodeKind::App: {
        if (!e.app_f || !e.app_u) {
          violations.push_back(where + ": application entry lacks witnesses");
          break;
        }
        ValuePtr applied;
        try {
          applied = sem::apply(e.app_f, e.app_u);
        } catch (const Error&) {
          violations.push_back(where + ": witness types do not fit the application");
          break;
        }
        if (!sem::leq(e.value, sem::lift_delay(a, delay_r, applied)))
          violations.push_back(where + ": value not below R(f u)");
        if (!present(node.a, child_ctx(g, e.node, e.ctx, node.a), e.app_f))
          violations.push_back(where + ": missing premise for the function side");
        if (!present(node.b, child_ctx(g, e.node, e.ctx, node.b), e.app_u))
          violations.push_back(where + ": missing premise for the argument side");
        break;
      }
      case LambdaGraph::NodeKind::Abs: {
        int body = node.a;
        for (const auto& [arg, res] : e.family) {
          if (arg->type != g.binder_type(e.node)) {
            violations.push_back(where + ": family argument type mismatch");
            continue;
          }
          ValuePtr va = sem::apply(e.value, arg);
          if (!sem::leq(va, sem::lift_delay(a, delay_b, res)))
            violations.push_back(where + ": family result not above f(a) under b-lifting");
          if (!present(body, body_ctx(g, e.node, e.ctx, arg), res))
            violations.push_back(where + ": missing premise for family argument");
        }
        // default rule: arguments outside the family must map to bottom
        for (const auto& [arg, res] : e.value->steps) {
          bool covered = false;
          for (const auto& [farg, fres] : e.family)
            if (sem::equal(arg, farg)) {
              covered = true;
              break;
            }
          if (!covered)
            violations.push_back(where + ": argument with non-bottom image missing from family");
        }
        break;
      }
    }
  }
  return violations;
}

// ---------------------------------------------------------------------------
// exact engine

struct GfpResult::Impl {
  LambdaGraph g;
  TrivialAutomaton a;
  int delay_r = -1, delay_b = -1;

  struct ValueOrder {
    bool operator()(const ValuePtr& x, const ValuePtr& y) const { return sem::compare(x, y) < 0; }
  };

  struct NodeSpace {
    bool symbolic = false;
    std::vector<ValuePtr> values;
    std::map<ValuePtr, int, ValueOrder> value_index;
    std::vector<std::vector<ValuePtr>> ctx_domains;
    std::vector<std::map<ValuePtr, int, ValueOrder>> ctx_index;
    std::vector<uint64_t> stride;
    uint64_t ctx_count = 1;
    std::vector<char> alive;

    bool get(uint64_t ctx, int value) const { return alive[ctx * values.size() + value] != 0; }
    void set(uint64_t ctx, int value, bool on) { alive[ctx * values.size() + value] = on ? 1 : 0; }
  };
  std::vector<NodeSpace> spaces;
  std::map<std::pair<int, int>, ValuePtr> partial_memo;  // (term node, arg value id)
  std::map<TypeId, std::vector<ValuePtr>> binder_domains;  // unused-binder enumeration

  std::vector<ValuePtr> decode_ctx(int node, uint64_t ctx) const {
    const NodeSpace& s = spaces[node];
    std::vector<ValuePtr> out(s.ctx_domains.size());
    for (size_t i = 0; i < s.ctx_domains.size(); ++i)
      out[i] = s.ctx_domains[i][(ctx / s.stride[i]) % s.ctx_domains[i].size()];
    return out;
  }

  std::optional<uint64_t> encode_ctx(int node, const std::vector<ValuePtr>& ctx) const {
    const NodeSpace& s = spaces[node];
    if (ctx.size() != s.ctx_domains.size()) return std::nullopt;
    uint64_t id = 0;
    for (size_t i = 0; i < ctx.size(); ++i) {
      auto it = s.ctx_index[i].find(ctx[i]);
      if (it == s.ctx_index[i].end()) return std::nullopt;
      id += s.stride[i] * static_cast<uint64_t>(it->second);
    }
    return id;
  }

  std::optional<int> encode_value(int node, const ValuePtr& v) const {
    const NodeSpace& s = spaces[node];
    auto it = s.value_index.find(v);
    if (it == s.value_index.end()) return std::nullopt;
    return it->second;
  }

  uint64_t map_child_ctx(int parent, uint64_t pctx, int child) const {
    // App children: free variables are a subset of the parent's.
    const NodeSpace& ps = spaces[parent];
    const NodeSpace& cs = spaces[child];
    const auto& pfv = g.free_vars[parent];
    const auto& cfv = g.free_vars[child];
    uint64_t id = 0;
    for (size_t i = 0; i < cfv.size(); ++i) {
      int pos = fv_position(pfv, cfv[i]);
      uint64_t digit = (pctx / ps.stride[pos]) % ps.ctx_domains[pos].size();
      id += cs.stride[i] * digit;
    }
    return id;
  }

  uint64_t map_body_ctx(int abs_node, uint64_t pctx, int a_digit) const {
    const NodeSpace& ps = spaces[abs_node];
    int body = g.nodes[abs_node].a;
    const NodeSpace& bs = spaces[body];
    const auto& pfv = g.free_vars[abs_node];
    const auto& bfv = g.free_vars[body];
    uint64_t id = 0;
    for (size_t i = 0; i < bfv.size(); ++i) {
      uint64_t digit;
      if (bfv[i] == 0) {
        digit = static_cast<uint64_t>(a_digit);
      } else {
        int pos = fv_position(pfv, bfv[i] - 1);
        digit = (pctx / ps.stride[pos]) % ps.ctx_domains[pos].size();
      }
      id += bs.stride[i] * digit;
    }
    return id;
  }

  ValuePtr partial_for(int term_node, int arg_value_digit, const ValuePtr& arg) {
    auto key = std::make_pair(term_node, arg_value_digit);
    auto it = partial_memo.find(key);
    if (it != partial_memo.end()) return it->second;
    int symbol = g.nodes[term_node].a;
    std::vector<uint64_t> prefix{arg->mask};
    ValuePtr v = terminal_partial(a, symbol, prefix, a.alphabet.arity(symbol) - 1,
                                  types::result(g.nodes[term_node].type));
    partial_memo[key] = v;
    return v;
  }

  bool clause_holds(int n, uint64_t ctx, int vid);
  void run(const EngineLimits& limits);
};

namespace {

// Binder domains that the Abs clause enumerates.
void require_abs_domains(const LambdaGraph& g, int q, const EngineLimits& limits) {
  for (const auto& node : g.nodes)
    if (node.kind == LambdaGraph::NodeKind::Abs) {
      auto size = sem::domain_size(types::argument(node.type), q, limits.domain_cap);
      if (size.too_large)
        throw CapExceeded("binder domain of " + types::to_string(types::argument(node.type)) +
                          " exceeds the cap");
    }
}

}  // namespace

void GfpResult::Impl::run(const EngineLimits& limits) {
  std::tie(delay_r, delay_b) = delay_symbols(a);
  int q = a.state_count();
  require_abs_domains(g, q, limits);
  spaces.resize(g.nodes.size());
  uint64_t total = 0;
  for (size_t n = 0; n < g.nodes.size(); ++n) {
    NodeSpace& s = spaces[n];
    const auto& node = g.nodes[n];
    auto size = sem::domain_size(node.type, q, limits.domain_cap);
    if (size.too_large) {
      if (node.kind == LambdaGraph::NodeKind::Term) {
        s.symbolic = true;
        continue;
      }
      throw CapExceeded("domain of " + types::to_string(node.type) + " exceeds the cap");
    }
    s.values = sem::enumerate_domain(node.type, q, limits.domain_cap);
    for (size_t i = 0; i < s.values.size(); ++i) s.value_index.emplace(s.values[i], static_cast<int>(i));
    for (TypeId t : g.free_var_types[n]) {
      auto dsize = sem::domain_size(t, q, limits.domain_cap);
      if (dsize.too_large)
        throw CapExceeded("context domain of " + types::to_string(t) + " exceeds the cap");
      s.ctx_domains.push_back(sem::enumerate_domain(t, q, limits.domain_cap));
      s.ctx_index.emplace_back();
      for (size_t i = 0; i < s.ctx_domains.back().size(); ++i)
        s.ctx_index.back().emplace(s.ctx_domains.back()[i], static_cast<int>(i));
    }
    s.stride.assign(s.ctx_domains.size(), 1);
    for (size_t i = s.ctx_domains.size(); i-- > 0;) {
      if (i + 1 < s.ctx_domains.size())
        s.stride[i] = s.stride[i + 1] * s.ctx_domains[i + 1].size();
    }
    s.ctx_count = s.ctx_domains.empty() ? 1 : s.stride[0] * s.ctx_domains[0].size();
    total += s.ctx_count * s.values.size();
    if (total > limits.judgment_cap) throw CapExceeded("judgment space exceeds the cap");
    s.alive.assign(s.ctx_count * s.values.size(), 1);
  }
  // symbolic terminals may appear in function position only
  for (size_t n = 0; n < g.nodes.size(); ++n) {
    const auto& node = g.nodes[n];
    if (node.kind == LambdaGraph::NodeKind::App && spaces[node.b].symbolic)
      throw CapExceeded("argument node's domain exceeds the cap");
    if (node.kind == LambdaGraph::NodeKind::Abs && spaces[node.a].symbolic)
      throw CapExceeded("abstraction body's domain exceeds the cap");
  }
  if (spaces[g.root].symbolic) throw CapExceeded("root domain exceeds the cap");

  // static clauses
  for (size_t n = 0; n < g.nodes.size(); ++n) {
    NodeSpace& s = spaces[n];
    if (s.symbolic) continue;
    const auto& node = g.nodes[n];
    if (node.kind == LambdaGraph::NodeKind::Var) {
      for (uint64_t c = 0; c < s.ctx_count; ++c) {
        ValuePtr bound = s.ctx_domains[0][(c / s.stride[0]) % s.ctx_domains[0].size()];
        for (size_t v = 0; v < s.values.size(); ++v)
          s.set(c, static_cast<int>(v), sem::leq(s.values[v], bound));
      }
    } else if (node.kind == LambdaGraph::NodeKind::Term) {
      for (size_t v = 0; v < s.values.size(); ++v) {
        bool ok = sem::leq_terminal(a, node.a, s.values[v]);
        for (uint64_t c = 0; c < s.ctx_count; ++c) s.set(c, static_cast<int>(v), ok);
      }
    }
  }
  // iterated removal
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t n = 0; n < g.nodes.size(); ++n) {
      NodeSpace& s = spaces[n];
      if (s.symbolic) continue;
      const auto& node = g.nodes[n];
      if (node.kind == LambdaGraph::NodeKind::Var || node.kind == LambdaGraph::NodeKind::Term)
        continue;
      for (uint64_t c = 0; c < s.ctx_count; ++c)
        for (size_t v = 0; v < s.values.size(); ++v) {
          if (!s.get(c, static_cast<int>(v))) continue;
          if (!clause_holds(static_cast<int>(n), c, static_cast<int>(v))) {
            s.set(c, static_cast<int>(v), false);
            changed = true;
          }
        }
    }
  }
}

bool GfpResult::Impl::clause_holds(int n, uint64_t ctx, int vid) {
  const auto& node = g.nodes[n];
  NodeSpace& s = spaces[n];
  const ValuePtr& value = s.values[vid];
  if (node.kind == LambdaGraph::NodeKind::App) {
    int fun = node.a, arg = node.b;
    NodeSpace& as = spaces[arg];
    uint64_t actx = map_child_ctx(n, ctx, arg);
    if (spaces[fun].symbolic) {
      for (size_t u = 0; u < as.values.size(); ++u) {
        if (!as.get(actx, static_cast<int>(u))) continue;
        ValuePtr w = partial_for(fun, static_cast<int>(u), as.values[u]);
        if (sem::leq(value, sem::lift_delay(a, delay_r, w))) return true;
      }
      return false;
    }
    NodeSpace& fs = spaces[fun];
    uint64_t fctx = map_child_ctx(n, ctx, fun);
    for (size_t u = 0; u < as.values.size(); ++u) {
      if (!as.get(actx, static_cast<int>(u))) continue;
      for (size_t f = 0; f < fs.values.size(); ++f) {
        if (!fs.get(fctx, static_cast<int>(f))) continue;
        ValuePtr applied = sem::apply(fs.values[f], as.values[u]);
        if (sem::leq(value, sem::lift_delay(a, delay_r, applied))) return true;
      }
    }
    return false;
  }
  if (node.kind == LambdaGraph::NodeKind::Abs) {
    int body = node.a;
    NodeSpace& bs = spaces[body];
    TypeId binder = types::argument(node.type);
    // the binder domain doubles as the digit order of the body context
    const std::vector<ValuePtr>* domain = nullptr;
    int body_pos = fv_position(g.free_vars[body], 0);
    if (body_pos >= 0) {
      domain = &bs.ctx_domains[body_pos];
    } else {
      auto it = binder_domains.find(binder);
      if (it == binder_domains.end())
        it = binder_domains
                 .emplace(binder, sem::enumerate_domain(binder, a.state_count(), UINT64_MAX >> 1))
                 .first;
      domain = &it->second;
    }
    for (size_t ai = 0; ai < domain->size(); ++ai) {
      ValuePtr va = sem::apply(value, (*domain)[ai]);
      uint64_t bctx = map_body_ctx(n, ctx, static_cast<int>(ai));
      bool found = false;
      for (size_t b = 0; b < bs.values.size() && !found; ++b) {
        if (!bs.get(bctx, static_cast<int>(b))) continue;
        if (sem::leq(va, sem::lift_delay(a, delay_b, bs.values[b]))) found = true;
      }
      if (!found) return false;
    }
    return true;
  }
  throw std::logic_error("clause_holds: static node kind");
}

GfpResult gfp_exact(const LambdaGraph& g, const TrivialAutomaton& a, const EngineLimits& limits) {
  if (!g.analyzed) throw Error("gfp_exact: graph not analyzed");
  GfpResult result;
  result.impl = std::make_shared<GfpResult::Impl>();
  result.impl->g = g;
  result.impl->a = a;
  result.impl->run(limits);
  return result;
}

bool GfpResult::contains(int node, const std::vector<ValuePtr>& ctx, const ValuePtr& value) const {
  const auto& s = impl->spaces[node];
  if (s.symbolic) return sem::leq_terminal(impl->a, impl->g.nodes[node].a, value);
  auto c = impl->encode_ctx(node, ctx);
  auto v = impl->encode_value(node, value);
  if (!c || !v) return false;
  return s.get(*c, *v);
}

bool GfpResult::holds_root(int q0) const {
  return contains(impl->g.root, {}, sem::base_value(uint64_t{1} << q0));
}

Certificate GfpResult::extract_certificate(int q0) const {
  Impl& im = *impl;
  const LambdaGraph& g = im.g;
  if (!holds_root(q0)) throw Error("extract_certificate: judgment not in the greatest fixed point");
  Certificate cert;
  cert.state = q0;
  std::set<Judgment, KeyLess> visited;
  std::vector<std::tuple<int, uint64_t, int>> queue;
  auto push = [&](int node, uint64_t ctx, int vid) {
    Judgment j{node, im.decode_ctx(node, ctx), im.spaces[node].values[vid]};
    if (visited.count(j)) return;
    visited.insert(j);
    queue.emplace_back(node, ctx, vid);
  };
  auto push_symbolic = [&](int node, const ValuePtr& value) {
    Judgment j{node, {}, value};
    if (visited.count(j)) return;
    visited.insert(j);
    CertEntry e;
    e.node = node;
    e.value = value;
    cert.entries.push_back(std::move(e));
  };
  {
    auto v = im.encode_value(g.root, sem::base_value(uint64_t{1} << q0));
    push(g.root, 0, *v);
  }
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    auto [n, ctx, vid] = queue[qi];
    const auto& node = g.nodes[n];
    auto& s = im.spaces[n];
    CertEntry e;
    e.node = n;
    e.ctx = im.decode_ctx(n, ctx);
    e.value = s.values[vid];
    if (node.kind == LambdaGraph::NodeKind::App) {
      int fun = node.a, arg = node.b;
      auto& as = im.spaces[arg];
      uint64_t actx = im.map_child_ctx(n, ctx, arg);
      bool done = false;
      if (im.spaces[fun].symbolic) {
        for (size_t u = 0; u < as.values.size() && !done; ++u) {
          if (!as.get(actx, static_cast<int>(u))) continue;
          ValuePtr w = im.partial_for(fun, static_cast<int>(u), as.values[u]);
          if (sem::leq(e.value, sem::lift_delay(im.a, im.delay_r, w))) {
            e.app_u = as.values[u];
            e.app_f = sem::step_function(as.values[u], w);
            push_symbolic(fun, e.app_f);
            push(arg, actx, static_cast<int>(u));
            done = true;
          }
        }
      } else {
        auto& fs = im.spaces[fun];
        uint64_t fctx = im.map_child_ctx(n, ctx, fun);
        for (size_t u = 0; u < as.values.size() && !done; ++u) {
          if (!as.get(actx, static_cast<int>(u))) continue;
          for (size_t f = 0; f < fs.values.size() && !done; ++f) {
            if (!fs.get(fctx, static_cast<int>(f))) continue;
            ValuePtr applied = sem::apply(fs.values[f], as.values[u]);
            if (sem::leq(e.value, sem::lift_delay(im.a, im.delay_r, applied))) {
              e.app_f = fs.values[f];
              e.app_u = as.values[u];
              push(fun, fctx, static_cast<int>(f));
              push(arg, actx, static_cast<int>(u));
              done = true;
            }
          }
        }
      }
      if (!done) throw std::logic_error("certificate extraction lost an application witness");
    } else if (node.kind == LambdaGraph::NodeKind::Abs) {
      int body = node.a;
      auto& bs = im.spaces[body];
      int body_pos = fv_position(g.free_vars[body], 0);
      std::vector<ValuePtr> domain =
          body_pos >= 0 ? bs.ctx_domains[body_pos]
                        : sem::enumerate_domain(types::argument(node.type), im.a.state_count(),
                                                UINT64_MAX >> 1);
      for (size_t ai = 0; ai < domain.size(); ++ai) {
        ValuePtr va = sem::apply(e.value, domain[ai]);
        if (sem::is_bottom(va)) continue;  // default rule
        uint64_t bctx = im.map_body_ctx(n, ctx, static_cast<int>(ai));
        bool found = false;
        for (size_t b = 0; b < bs.values.size() && !found; ++b) {
          if (!bs.get(bctx, static_cast<int>(b))) continue;
          if (sem::leq(va, sem::lift_delay(im.a, im.delay_b, bs.values[b]))) {
            e.family.emplace_back(domain[ai], bs.values[b]);
            push(body, bctx, static_cast<int>(b));
            found = true;
          }
        }
        if (!found) throw std::logic_error("certificate extraction lost an abstraction witness");
      }
    }
    cert.entries.push_back(std::move(e));
  }
  std::sort(cert.entries.begin(), cert.entries.end(), [](const CertEntry& x, const CertEntry& y) {
    if (x.node != y.node) return x.node < y.node;
    if (ctx_less(x.ctx, y.ctx)) return true;
    if (ctx_less(y.ctx, x.ctx)) return false;
    return sem::compare(x.value, y.value) < 0;
  });
  return cert;
}

// ---------------------------------------------------------------------------
// goal-directed engine

namespace {

class GoalEngine {
 public:
  GoalEngine(const LambdaGraph& g, const TrivialAutomaton& a, const GoalOptions& opts)
      : g_(g), a_(a), opts_(opts) {
    std::tie(delay_r_, delay_b_) = delay_symbols(a);
  }

  GoalOutcome run(int q0) {
    Judgment root{g_.root, {}, sem::base_value(uint64_t{1} << q0)};
    for (round_ = 1; round_ <= opts_.max_rounds; ++round_) {
      record_.clear();
      proven_.clear();
      failed_.clear();
      stack_.clear();
      on_stack_.clear();
      auto res = search(root);
      if (budget_exceeded_) break;
      if (res) {
        GoalOutcome out;
        out.certificate = assemble(root);
        return out;
      }
    }
    GoalOutcome out;
    out.failures = var_failures_;
    return out;
  }

 private:
  static constexpr int kNoDeps = INT_MAX;

  // Returns the minimal stack index among surviving cycle assumptions, or
  // kNoDeps; nullopt on failure. Optimistic failures are cached per round;
  // successes are cached only once unconditional.
  std::optional<int> search(const Judgment& j) {
    if (budget_exceeded_ || ++steps_ > opts_.step_budget) {
      budget_exceeded_ = true;
      return std::nullopt;
    }
    if (proven_.count(j)) return kNoDeps;
    if (failed_.count(j)) return std::nullopt;
    auto it = on_stack_.find(j);
    if (it != on_stack_.end()) return it->second;
    int my_index = static_cast<int>(stack_.size());
    stack_.push_back(j);
    on_stack_.emplace(j, my_index);
    std::optional<int> low = attempt(j);
    stack_.pop_back();
    on_stack_.erase(j);
    if (!low) {
      if (!budget_exceeded_) failed_.insert(j);
      return std::nullopt;
    }
    int discharged = *low == my_index ? kNoDeps : *low;
    if (discharged == kNoDeps) proven_.insert(j);
    return discharged;
  }

  std::optional<int> attempt(const Judgment& j) {
    const auto& node = g_.nodes[j.node];
    switch (node.kind) {
      case LambdaGraph::NodeKind::Var: {
        if (sem::leq(j.value, j.ctx[0])) {
          record(j, CertEntry{j.node, j.ctx, j.value, nullptr, nullptr, {}});
          return kNoDeps;
        }
        note_var_failure(j.node, j.value, j.ctx[0]);
        return std::nullopt;
      }
      case LambdaGraph::NodeKind::Term: {
        if (sem::leq_terminal(a_, node.a, j.value)) {
          record(j, CertEntry{j.node, j.ctx, j.value, nullptr, nullptr, {}});
          return kNoDeps;
        }
        return std::nullopt;
      }
      case LambdaGraph::NodeKind::App:
        return attempt_app(j);
      case LambdaGraph::NodeKind::Abs:
        return attempt_abs(j);
    }
    return std::nullopt;
  }

  std::optional<int> attempt_app(const Judgment& j) {
    const auto& node = g_.nodes[j.node];
    int fun = node.a, arg = node.b;
    std::vector<ValuePtr> fctx = child_ctx(g_, j.node, j.ctx, fun);
    std::vector<ValuePtr> actx = child_ctx(g_, j.node, j.ctx, arg);
    for (const ValuePtr& w : delay_targets(j.value, delay_r_)) {
      for (const ValuePtr& u : argument_candidates(arg, actx)) {
        if (budget_exceeded_) return std::nullopt;
        ValuePtr f = sem::step_function(u, w);
        std::optional<int> low1 = search({fun, fctx, f});
        if (!low1) continue;
        std::optional<int> low2 = search({arg, actx, u});
        if (!low2) continue;
        record(j, CertEntry{j.node, j.ctx, j.value, f, u, {}});
        return std::min(*low1, *low2);
      }
    }
    return std::nullopt;
  }

  std::optional<int> attempt_abs(const Judgment& j) {
    const auto& node = g_.nodes[j.node];
    int body = node.a;
    CertEntry entry{j.node, j.ctx, j.value, nullptr, nullptr, {}};
    int low = kNoDeps;
    for (const auto& [arg, res] : j.value->steps) {
      std::vector<ValuePtr> bctx = body_ctx(g_, j.node, j.ctx, arg);
      bool found = false;
      for (const ValuePtr& b : delay_targets(res, delay_b_)) {
        if (budget_exceeded_) return std::nullopt;
        std::optional<int> sub = search({body, bctx, b});
        if (sub) {
          entry.family.emplace_back(arg, b);
          low = std::min(low, *sub);
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }
    record(j, std::move(entry));
    return low;
  }

  // Candidates w with target <= lift(w) on the given delay symbol.
  std::vector<ValuePtr> delay_targets(const ValuePtr& target, int delay) {
    std::vector<ValuePtr> out;
    auto add = [&](const ValuePtr& w) {
      if (!sem::leq(target, sem::lift_delay(a_, delay, w))) return;
      for (const auto& seen : out)
        if (sem::equal(seen, w)) return;
      out.push_back(w);
    };
    add(target);
    add(delay_preimage(a_, delay, target));
    for (const ValuePtr& w : pool(target->type, round_)) add(w);
    return out;
  }

  std::vector<ValuePtr> argument_candidates(int arg_node, const std::vector<ValuePtr>& actx) {
    std::vector<ValuePtr> out;
    auto add = [&](const ValuePtr& u) {
      for (const auto& seen : out)
        if (sem::equal(seen, u)) return;
      out.push_back(u);
    };
    const auto& node = g_.nodes[arg_node];
    if (node.kind == LambdaGraph::NodeKind::Term) {
      auto size = sem::domain_size(node.type, a_.state_count(), opts_.table_cap);
      if (!size.too_large) add(sem::terminal_table(a_, node.a, opts_.table_cap));
    }
    if (node.kind == LambdaGraph::NodeKind::Var) add(actx[0]);
    for (const ValuePtr& u : pool(node.type, round_)) add(u);
    if (round_ == opts_.max_rounds) {
      auto size = sem::domain_size(node.type, a_.state_count(), opts_.full_pool_cap);
      if (!size.too_large)
        for (const ValuePtr& u : sem::enumerate_domain(node.type, a_.state_count(),
                                                       opts_.full_pool_cap))
          add(u);
    }
    return out;
  }

  // Deterministic candidate pool per type and depth.
  const std::vector<ValuePtr>& pool(TypeId type, int depth) {
    auto key = std::make_pair(type, depth);
    auto it = pools_.find(key);
    if (it != pools_.end()) return it->second;
    std::vector<ValuePtr> out;
    auto add = [&](const ValuePtr& v) {
      for (const auto& seen : out)
        if (sem::equal(seen, v)) return;
      out.push_back(v);
    };
    if (types::is_base(type)) {
      int q = a_.state_count();
      add(sem::base_value(0));
      for (int i = 0; i < q; ++i) add(sem::base_value(uint64_t{1} << i));
      add(sem::base_value((uint64_t{1} << q) - 1));
    } else {
      add(sem::bottom(type));
      TypeId dom = types::argument(type), cod = types::result(type);
      if (dom == cod) {
        auto size = sem::domain_size(dom, a_.state_count(), opts_.table_cap);
        if (!size.too_large) {
          ValuePtr idv = sem::bottom(type);
          for (const ValuePtr& x : sem::enumerate_domain(dom, a_.state_count(), opts_.table_cap))
            if (!sem::is_bottom(x)) idv = sem::join(idv, sem::step_function(x, x));
          add(idv);
        }
      }
      if (depth >= 1)
        for (const ValuePtr& x : pool(dom, depth - 1))
          for (const ValuePtr& y : pool(cod, depth - 1)) add(sem::step_function(x, y));
    }
    return pools_.emplace(key, std::move(out)).first->second;
  }

  void record(const Judgment& j, CertEntry entry) { record_[j] = std::move(entry); }

  void note_var_failure(int node, const ValuePtr& wanted, const ValuePtr& had) {
    for (const auto& f : var_failures_)
      if (f.node == node && sem::equal(f.wanted, wanted) && sem::equal(f.had, had)) return;
    var_failures_.push_back({node, wanted, had});
  }

  Certificate assemble(const Judgment& root) {
    Certificate cert;
    cert.state = 0;
    while (!(root.value->mask & (uint64_t{1} << cert.state))) ++cert.state;
    std::set<Judgment, KeyLess> visited;
    std::vector<Judgment> queue{root};
    visited.insert(root);
    while (!queue.empty()) {
      Judgment j = queue.back();
      queue.pop_back();
      auto it = record_.find(j);
      if (it == record_.end()) throw std::logic_error("goal search lost a recorded judgment");
      const CertEntry& e = it->second;
      cert.entries.push_back(e);
      auto enqueue = [&](Judgment next) {
        if (visited.count(next)) return;
        visited.insert(next);
        queue.push_back(std::move(next));
      };
      const auto& node = g_.nodes[j.node];
      if (node.kind == LambdaGraph::NodeKind::App) {
        enqueue({node.a, child_ctx(g_, j.node, j.ctx, node.a), e.app_f});
        enqueue({node.b, child_ctx(g_, j.node, j.ctx, node.b), e.app_u});
      } else if (node.kind == LambdaGraph::NodeKind::Abs) {
        for (const auto& [arg, res] : e.family)
          enqueue({node.a, body_ctx(g_, j.node, j.ctx, arg), res});
      }
    }
    std::sort(cert.entries.begin(), cert.entries.end(),
              [](const CertEntry& x, const CertEntry& y) {
                if (x.node != y.node) return x.node < y.node;
                if (ctx_less(x.ctx, y.ctx)) return true;
                if (ctx_less(y.ctx, x.ctx)) return false;
                return sem::compare(x.value, y.value) < 0;
              });
    return cert;
  }

  const LambdaGraph& g_;
  const TrivialAutomaton& a_;
  GoalOptions opts_;
  int delay_r_, delay_b_;
  int round_ = 1;
  long long steps_ = 0;
  bool budget_exceeded_ = false;
  std::map<Judgment, CertEntry, KeyLess> record_;
  std::set<Judgment, KeyLess> proven_;
  std::set<Judgment, KeyLess> failed_;
  std::vector<Judgment> stack_;
  std::map<Judgment, int, KeyLess> on_stack_;
  std::map<std::pair<TypeId, int>, std::vector<ValuePtr>> pools_;
  std::vector<VarFailure> var_failures_;
};

}  // namespace

GoalOutcome goal_search(const LambdaGraph& g, const TrivialAutomaton& a, int q0,
                        const GoalOptions& opts) {
  if (!g.analyzed) throw Error("goal_search: graph not analyzed");
  if (q0 < 0 || q0 >= a.state_count()) throw Error("goal_search: state out of range");
  GoalEngine engine(g, a, opts);
  return engine.run(q0);
}

// ---------------------------------------------------------------------------
// refuter and decision procedure

std::optional<int> refute_by_depth(const TrivialAutomaton& a, const SourcePtr& t, int q0,
                                   int max_n) {
  for (int n = 0; n <= max_n; ++n)
    if (!has_run_up_to(a, t, n, q0)) return n;
  return std::nullopt;
}

Verdict decide(const LambdaGraph& g, const TrivialAutomaton& a, int q0, CnMachine& machine,
               const DecideOptions& opts) {
  auto verified = [&](Certificate cert) {
    auto violations = verify_certificate(g, a, cert);
    if (!violations.empty())
      throw std::logic_error("engine produced an invalid certificate: " + violations.front());
    return cert;
  };
  if (opts.mode != EngineMode::Goal) {
    bool ran = false;
    GfpResult gfp;
    try {
      gfp = gfp_exact(g, a, opts.limits);
      ran = true;
    } catch (const CapExceeded&) {
      if (opts.mode == EngineMode::Exact) throw;
    }
    if (ran) {
      Verdict v;
      v.exact_engine = true;
      if (gfp.holds_root(q0)) {
        v.kind = Verdict::Kind::Yes;
        v.certificate = verified(gfp.extract_certificate(q0));
      } else {
        v.kind = Verdict::Kind::No;
      }
      return v;
    }
  }
  GoalOutcome outcome = goal_search(g, a, q0, opts.goal);
  Verdict v;
  if (outcome.certificate) {
    v.kind = Verdict::Kind::Yes;
    v.certificate = verified(*outcome.certificate);
    return v;
  }
  v.failures = outcome.failures;
  auto level = refute_by_depth(a, machine.normal_form(), q0, opts.refute_fuel);
  if (level) {
    v.kind = Verdict::Kind::No;
    v.refutation_level = level;
  } else {
    v.kind = Verdict::Kind::Inconclusive;
  }
  return v;
}

}  // namespace horsmc
