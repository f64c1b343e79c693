#include "horsmc/cn.hpp"

#include <functional>

#include "horsmc/error.hpp"

namespace horsmc {

CnMachine::CnMachine(const LambdaGraph& g) : graph_(g) {
  if (!graph_.analyzed) analyze(graph_);
  if (!is_closed(graph_)) throw Error("continuous normalization requires a closed graph");
  if (!types::is_base(graph_.nodes[graph_.root].type))
    throw Error("continuous normalization requires a ground-typed root");
  if (graph_.alphabet.has("R") || graph_.alphabet.has("b"))
    throw Error("terminal alphabet already contains R or b");
  sigma_ = graph_.alphabet;
  r_ = sigma_.add_symbol("R", 1);
  b_ = sigma_.add_symbol("b", 1);
}

int CnMachine::intern_closure(int node, int env) {
  auto key = std::make_pair(node, env);
  auto it = closure_ids_.find(key);
  if (it != closure_ids_.end()) return it->second;
  closures_.push_back(key);
  int id = static_cast<int>(closures_.size()) - 1;
  closure_ids_[key] = id;
  return id;
}

int CnMachine::intern_env(int closure, int parent) {
  auto key = std::make_pair(closure, parent);
  auto it = env_ids_.find(key);
  if (it != env_ids_.end()) return it->second;
  envs_.push_back(key);
  int id = static_cast<int>(envs_.size()) - 1;
  env_ids_[key] = id;
  return id;
}

int CnMachine::intern_stack(int closure, int parent) {
  auto key = std::make_pair(closure, parent);
  auto it = stack_ids_.find(key);
  if (it != stack_ids_.end()) return it->second;
  stacks_.push_back(key);
  int id = static_cast<int>(stacks_.size()) - 1;
  stack_ids_[key] = id;
  return id;
}

int CnMachine::env_lookup(int env, int index) const {
  while (index > 0) {
    env = envs_[env].second;
    --index;
  }
  return envs_[env].first;
}

CnMachine::Config CnMachine::initial_config() {
  std::lock_guard<std::mutex> lock(mu_);
  return {intern_closure(graph_.root, -1), -1};
}

CnMachine::Step CnMachine::head_step(Config c) {
  std::lock_guard<std::mutex> lock(mu_);
  int closure = c.closure;
  // Dereference variables; each binding was made strictly earlier, so the
  // chain is finite.
  while (true) {
    auto [node, env] = closures_[closure];
    const auto& nd = graph_.nodes[node];
    if (nd.kind != LambdaGraph::NodeKind::Var) break;
    closure = env_lookup(env, nd.a);
  }
  auto [node, env] = closures_[closure];
  const auto& nd = graph_.nodes[node];
  Step step;
  switch (nd.kind) {
    case LambdaGraph::NodeKind::App: {
      int arg_cl = intern_closure(nd.b, env);
      int fun_cl = intern_closure(nd.a, env);
      step.emitted = r_;
      step.next = Config{fun_cl, intern_stack(arg_cl, c.stack)};
      return step;
    }
    case LambdaGraph::NodeKind::Abs: {
      if (c.stack < 0)
        throw std::logic_error("abstraction with no collected argument at ground type");
      auto [top, rest] = stacks_[c.stack];
      int env2 = intern_env(top, env);
      step.emitted = b_;
      step.next = Config{intern_closure(nd.a, env2), rest};
      return step;
    }
    case LambdaGraph::NodeKind::Term: {
      step.emitted = nd.a;
      int st = c.stack;
      while (st >= 0) {
        step.children.push_back(Config{stacks_[st].first, -1});
        st = stacks_[st].second;
      }
      if (static_cast<int>(step.children.size()) != graph_.alphabet.arity(nd.a))
        throw std::logic_error("collected arguments do not match terminal arity");
      return step;
    }
    case LambdaGraph::NodeKind::Var:
      break;
  }
  throw std::logic_error("unreachable head kind");
}

SourcePtr CnMachine::normal_form() { return source_for(initial_config()); }

SourcePtr CnMachine::source_for(Config c) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sources_.find(c);
    if (it != sources_.end()) return it->second;
  }
  CnMachine* self = this;
  SourcePtr src = TermSource::make([self, c]() {
    Step step = self->head_step(c);
    TermSource::Expansion e;
    e.label = step.emitted;
    if (step.next) {
      e.children.push_back(self->source_for(*step.next));
    } else {
      for (Config child : step.children) e.children.push_back(self->source_for(child));
    }
    return e;
  });
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = sources_.emplace(c, src);
  return it->second;
}

EraseResult erase_delays(int delay_r, int delay_b, const SourcePtr& source, int depth, int fuel) {
  EraseResult result;
  std::function<bool(const SourcePtr&, int, int, std::vector<int>&)> go =
      [&](const SourcePtr& src, int parent, int d, std::vector<int>& path) -> bool {
    SourcePtr cur = src;
    int skipped = 0;
    while (cur->label() == delay_r || cur->label() == delay_b) {
      if (++skipped > fuel) {
        result.stuck_path = path;
        return false;
      }
      cur = cur->child(0);
    }
    int id = static_cast<int>(result.prefix.nodes.size());
    result.prefix.nodes.push_back({cur->label(), d, false, {}});
    if (parent >= 0) result.prefix.nodes[parent].children.push_back(id);
    if (d == depth) return true;
    result.prefix.nodes[id].expanded = true;
    int ar = cur->arity();
    for (int i = 0; i < ar; ++i) {
      path.push_back(i);
      bool ok = go(cur->child(i), id, d + 1, path);
      path.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  std::vector<int> path;
  result.ok = go(source, -1, 0, path);
  if (!result.ok) result.prefix.nodes.clear();
  return result;
}

namespace {

struct ErasedShared {
  int r, b, fuel;
  std::map<const TermSource*, SourcePtr> wrappers;
  std::mutex mu;
};

SourcePtr erased_wrap(const std::shared_ptr<ErasedShared>& shared, const SourcePtr& inner,
                      std::vector<int> path);

TermSource::Expansion erased_expand(const std::shared_ptr<ErasedShared>& shared,
                                    const SourcePtr& inner, const std::vector<int>& path) {
  SourcePtr cur = inner;
  int skipped = 0;
  while (cur->label() == shared->r || cur->label() == shared->b) {
    if (++skipped > shared->fuel) throw ErasureTimeout(path);
    cur = cur->child(0);
  }
  TermSource::Expansion e;
  e.label = cur->label();
  int ar = cur->arity();
  for (int i = 0; i < ar; ++i) {
    std::vector<int> child_path = path;
    child_path.push_back(i);
    e.children.push_back(erased_wrap(shared, cur->child(i), std::move(child_path)));
  }
  return e;
}

SourcePtr erased_wrap(const std::shared_ptr<ErasedShared>& shared, const SourcePtr& inner,
                      std::vector<int> path) {
  {
    std::lock_guard<std::mutex> lock(shared->mu);
    auto it = shared->wrappers.find(inner.get());
    if (it != shared->wrappers.end()) return it->second;
  }
  auto src = TermSource::make(
      [shared, inner, path]() { return erased_expand(shared, inner, path); });
  std::lock_guard<std::mutex> lock(shared->mu);
  auto [it, inserted] = shared->wrappers.emplace(inner.get(), src);
  return it->second;
}

}  // namespace

SourcePtr erase_delays_source(int delay_r, int delay_b, const SourcePtr& source, int fuel) {
  auto shared = std::make_shared<ErasedShared>();
  shared->r = delay_r;
  shared->b = delay_b;
  shared->fuel = fuel;
  return erased_wrap(shared, source, {});
}

std::optional<JustificationViolation> justification_check(const RankedAlphabet& sigma, int delay_r,
                                                          int delay_b, const PrefixTree& prefix,
                                                          int k0) {
  // (node, collected, r-count, b-count): counts along the current delay chain
  std::vector<std::tuple<int, int, int, int>> work{{prefix.root(), k0, 0, 0}};
  while (!work.empty()) {
    auto [id, k, rc, bc] = work.back();
    work.pop_back();
    const PrefixTree::Node& n = prefix.nodes[id];
    if (n.label == delay_r || n.label == delay_b) {
      if (!n.expanded) continue;  // chain leaves the prefix: no obligation
      work.emplace_back(n.children[0], k, rc + (n.label == delay_r ? 1 : 0),
                        bc + (n.label == delay_b ? 1 : 0));
      continue;
    }
    int ar = sigma.arity(n.label);
    if (k + rc != bc + ar) return JustificationViolation{id, k, rc, bc, ar};
    if (n.expanded)
      for (int child : n.children) work.emplace_back(child, 0, 0, 0);
  }
  return std::nullopt;
}

}  // namespace horsmc
