#include "horsmc/lambda.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "horsmc/error.hpp"

namespace horsmc {

namespace {

void check_refs(const LambdaGraph& g) {
  int n = static_cast<int>(g.nodes.size());
  if (g.root < 0 || g.root >= n) throw Error("lambda graph: root out of range");
  for (int i = 0; i < n; ++i) {
    const auto& node = g.nodes[i];
    switch (node.kind) {
      case LambdaGraph::NodeKind::App:
        if (node.a < 0 || node.a >= n || node.b < 0 || node.b >= n)
          throw Error("lambda graph: dangling reference at node " + std::to_string(i));
        break;
      case LambdaGraph::NodeKind::Abs:
        if (node.a < 0 || node.a >= n)
          throw Error("lambda graph: dangling reference at node " + std::to_string(i));
        break;
      case LambdaGraph::NodeKind::Var:
        if (node.a < 0) throw Error("lambda graph: negative variable index at node " + std::to_string(i));
        break;
      case LambdaGraph::NodeKind::Term:
        if (node.a < 0 || node.a >= g.alphabet.size())
          throw Error("lambda graph: unknown terminal at node " + std::to_string(i));
        break;
    }
  }
}

TypeId terminal_type(const RankedAlphabet& alpha, int symbol) {
  TypeId t = types::base();
  for (int i = 0; i < alpha.arity(symbol); ++i) t = types::arrow(types::base(), t);
  return t;
}

// Free-variable maps (index -> type) for every node, by least fixpoint.
// A merge conflict means some variable is used at two types.
std::vector<std::map<int, TypeId>> fv_maps(const LambdaGraph& g, std::vector<std::string>* errors) {
  std::vector<std::map<int, TypeId>> fv(g.nodes.size());
  auto merge_into = [&](std::map<int, TypeId>& dst, int idx, TypeId type, int where) {
    auto it = dst.find(idx);
    if (it == dst.end()) {
      dst[idx] = type;
      return true;
    }
    if (it->second != type && errors) {
      errors->push_back("node " + std::to_string(where) + ": variable " + std::to_string(idx) +
                        " used at both " + types::to_string(it->second) + " and " +
                        types::to_string(type));
      // keep the first type to avoid cascading reports
    }
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      const auto& node = g.nodes[i];
      switch (node.kind) {
        case LambdaGraph::NodeKind::Var:
          changed |= merge_into(fv[i], node.a, node.type, static_cast<int>(i));
          break;
        case LambdaGraph::NodeKind::Term:
          break;
        case LambdaGraph::NodeKind::App:
          for (const auto& [k, t] : fv[node.a]) changed |= merge_into(fv[i], k, t, static_cast<int>(i));
          for (const auto& [k, t] : fv[node.b]) changed |= merge_into(fv[i], k, t, static_cast<int>(i));
          break;
        case LambdaGraph::NodeKind::Abs:
          for (const auto& [k, t] : fv[node.a])
            if (k >= 1) changed |= merge_into(fv[i], k - 1, t, static_cast<int>(i));
          break;
      }
    }
  }
  return fv;
}

}  // namespace

std::vector<std::string> type_errors(const LambdaGraph& g) {
  check_refs(g);
  std::vector<std::string> errors;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& node = g.nodes[i];
    switch (node.kind) {
      case LambdaGraph::NodeKind::App: {
        TypeId ft = g.nodes[node.a].type;
        TypeId at = g.nodes[node.b].type;
        if (types::is_base(ft))
          errors.push_back("node " + std::to_string(i) + ": applying a value of base type");
        else if (types::argument(ft) != at)
          errors.push_back("node " + std::to_string(i) + ": argument type " +
                           types::to_string(at) + " does not match expected " +
                           types::to_string(types::argument(ft)));
        else if (types::result(ft) != node.type)
          errors.push_back("node " + std::to_string(i) + ": application typed " +
                           types::to_string(node.type) + ", function yields " +
                           types::to_string(types::result(ft)));
        break;
      }
      case LambdaGraph::NodeKind::Abs: {
        if (types::is_base(node.type)) {
          errors.push_back("node " + std::to_string(i) + ": abstraction of base type");
          break;
        }
        if (types::result(node.type) != g.nodes[node.a].type)
          errors.push_back("node " + std::to_string(i) + ": body typed " +
                           types::to_string(g.nodes[node.a].type) + ", abstraction expects " +
                           types::to_string(types::result(node.type)));
        break;
      }
      case LambdaGraph::NodeKind::Var:
        break;
      case LambdaGraph::NodeKind::Term:
        if (node.type != terminal_type(g.alphabet, node.a))
          errors.push_back("node " + std::to_string(i) + ": terminal '" +
                           g.alphabet.name(node.a) + "' typed " + types::to_string(node.type));
        break;
    }
  }
  // Variable/binder consistency across paths.
  auto fv = fv_maps(g, &errors);
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& node = g.nodes[i];
    if (node.kind != LambdaGraph::NodeKind::Abs) continue;
    auto it = fv[node.a].find(0);
    if (it != fv[node.a].end() && it->second != types::argument(node.type))
      errors.push_back("node " + std::to_string(i) + ": bound variable used at " +
                       types::to_string(it->second) + ", binder has " +
                       types::to_string(types::argument(node.type)));
  }
  return errors;
}

TypeId check_types(const LambdaGraph& g) {
  auto errors = type_errors(g);
  if (!errors.empty()) {
    std::string msg = "type errors:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(msg);
  }
  return g.nodes[g.root].type;
}

void analyze(LambdaGraph& g) {
  check_types(g);
  auto fv = fv_maps(g, nullptr);
  size_t n = g.nodes.size();
  g.free_vars.assign(n, {});
  g.free_var_types.assign(n, {});
  g.free_var_names.assign(n, {});
  std::vector<std::map<int, std::string>> names(n);
  // Binder names flow from each Abs down into its body.
  bool changed = true;
  while (changed) {
    changed = false;
    auto push = [&](int node, int idx, const std::string& name) {
      if (name.empty() || !fv[node].count(idx)) return;
      auto it = names[node].find(idx);
      if (it == names[node].end()) {
        names[node][idx] = name;
        changed = true;
      }
    };
    for (size_t i = 0; i < n; ++i) {
      const auto& node = g.nodes[i];
      if (node.kind == LambdaGraph::NodeKind::Abs) {
        push(node.a, 0, node.name);
        for (const auto& [k, nm] : names[i]) push(node.a, k + 1, nm);
      } else if (node.kind == LambdaGraph::NodeKind::App) {
        for (const auto& [k, nm] : names[i]) {
          push(node.a, k, nm);
          push(node.b, k, nm);
        }
      }
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (const auto& [k, t] : fv[i]) {
      g.free_vars[i].push_back(k);
      g.free_var_types[i].push_back(t);
      auto it = names[i].find(k);
      g.free_var_names[i].push_back(it == names[i].end() ? "v" + std::to_string(k) : it->second);
    }
  }
  g.analyzed = true;
}

const std::vector<int>& free_variables(const LambdaGraph& g, int node) {
  if (!g.analyzed) throw Error("free_variables: graph not analyzed");
  return g.free_vars[node];
}

bool is_closed(const LambdaGraph& g) {
  if (!g.analyzed) throw Error("is_closed: graph not analyzed");
  return g.free_vars[g.root].empty();
}

LambdaGraph intern(const LambdaGraph& g, std::vector<int>* mapping) {
  check_refs(g);
  size_t n = g.nodes.size();
  // Initial partition by local label, ignoring binder names.
  std::map<std::tuple<int, TypeId, int>, int> label_class;
  std::vector<int> cls(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& node = g.nodes[i];
    int extra = (node.kind == LambdaGraph::NodeKind::Var ||
                 node.kind == LambdaGraph::NodeKind::Term)
                    ? node.a
                    : -1;
    auto key = std::make_tuple(static_cast<int>(node.kind), node.type, extra);
    auto it = label_class.find(key);
    if (it == label_class.end()) it = label_class.emplace(key, static_cast<int>(label_class.size())).first;
    cls[i] = it->second;
  }
  // Refine by child classes until stable.
  while (true) {
    std::map<std::tuple<int, int, int>, int> sig_class;
    std::vector<int> next(n);
    for (size_t i = 0; i < n; ++i) {
      const auto& node = g.nodes[i];
      int ca = -1, cb = -1;
      if (node.kind == LambdaGraph::NodeKind::App) {
        ca = cls[node.a];
        cb = cls[node.b];
      } else if (node.kind == LambdaGraph::NodeKind::Abs) {
        ca = cls[node.a];
      }
      auto key = std::make_tuple(cls[i], ca, cb);
      auto it = sig_class.find(key);
      if (it == sig_class.end()) it = sig_class.emplace(key, static_cast<int>(sig_class.size())).first;
      next[i] = it->second;
    }
    bool same = true;
    std::map<int, int> rename;
    for (size_t i = 0; i < n && same; ++i) {
      auto it = rename.find(cls[i]);
      if (it == rename.end())
        rename[cls[i]] = next[i];
      else if (it->second != next[i])
        same = false;
    }
    cls = std::move(next);
    if (same) break;
  }
  // Renumber classes in DFS preorder from the root; drop unreachable ones.
  std::vector<int> class_rep;  // representative old node per new id
  std::map<int, int> new_id;
  {
    // deterministic DFS over classes using the representative's children
    std::vector<int> work{g.root};
    while (!work.empty()) {
      int node = work.back();
      work.pop_back();
      int c = cls[node];
      if (new_id.count(c)) continue;
      int id = static_cast<int>(class_rep.size());
      new_id[c] = id;
      class_rep.push_back(node);
      const auto& nd = g.nodes[node];
      if (nd.kind == LambdaGraph::NodeKind::App) {
        work.push_back(nd.b);
        work.push_back(nd.a);
      } else if (nd.kind == LambdaGraph::NodeKind::Abs) {
        work.push_back(nd.a);
      }
    }
  }
  // Pick the first nonempty binder name in each class (lowest old id).
  std::vector<std::string> best_name(class_rep.size());
  for (size_t i = 0; i < n; ++i) {
    auto it = new_id.find(cls[i]);
    if (it == new_id.end()) continue;
    if (!g.nodes[i].name.empty() && best_name[it->second].empty())
      best_name[it->second] = g.nodes[i].name;
  }
  LambdaGraph out;
  out.alphabet = g.alphabet;
  for (size_t id = 0; id < class_rep.size(); ++id) {
    const auto& nd = g.nodes[class_rep[id]];
    LambdaGraph::Node copy = nd;
    copy.name = best_name[id];
    if (nd.kind == LambdaGraph::NodeKind::App) {
      copy.a = new_id.at(cls[nd.a]);
      copy.b = new_id.at(cls[nd.b]);
    } else if (nd.kind == LambdaGraph::NodeKind::Abs) {
      copy.a = new_id.at(cls[nd.a]);
    }
    out.nodes.push_back(std::move(copy));
  }
  out.root = new_id.at(cls[g.root]);
  if (mapping) {
    mapping->assign(n, -1);
    for (size_t i = 0; i < n; ++i) {
      auto it = new_id.find(cls[i]);
      if (it != new_id.end()) (*mapping)[i] = it->second;
    }
  }
  return out;
}

std::string dump(const LambdaGraph& g) {
  std::ostringstream out;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& node = g.nodes[i];
    out << i << ": ";
    switch (node.kind) {
      case LambdaGraph::NodeKind::App:
        out << "App(" << node.a << "," << node.b << ")";
        break;
      case LambdaGraph::NodeKind::Abs:
        out << "Abs(" << node.a << ")";
        break;
      case LambdaGraph::NodeKind::Var:
        out << "Var(" << node.a << ")";
        break;
      case LambdaGraph::NodeKind::Term:
        out << "Term(" << g.alphabet.name(node.a) << ")";
        break;
    }
    out << " : " << types::to_string(node.type) << "\n";
  }
  return out.str();
}

}  // namespace horsmc
