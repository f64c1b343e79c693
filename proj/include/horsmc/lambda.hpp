#pragma once

#include <string>
#include <vector>

#include "horsmc/alphabet.hpp"
#include "horsmc/types.hpp"

namespace horsmc {

/// A regular infinitary lambda tree as a finite cyclic term graph.
/// Variables are de Bruijn indices (0 = innermost enclosing binder);
/// binder names are kept for display only.
struct LambdaGraph {
  enum class NodeKind { App, Abs, Var, Term };

  struct Node {
    NodeKind kind;
    TypeId type = -1;
    int a = -1;  // App: function; Abs: body; Var: de Bruijn index; Term: symbol id
    int b = -1;  // App: argument
    std::string name;  // Abs: binder display name
  };

  RankedAlphabet alphabet;  // terminal symbols
  std::vector<Node> nodes;
  int root = -1;

  // Filled by analyze():
  std::vector<std::vector<int>> free_vars;          // sorted de Bruijn indices per node
  std::vector<std::vector<TypeId>> free_var_types;  // aligned with free_vars
  std::vector<std::vector<std::string>> free_var_names;  // display hints, aligned
  bool analyzed = false;

  int add(Node n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }
  int app(int fun, int arg, TypeId type) { return add({NodeKind::App, type, fun, arg, ""}); }
  int abs(int body, TypeId type, std::string name = "") {
    return add({NodeKind::Abs, type, body, -1, std::move(name)});
  }
  int var(int index, TypeId type) { return add({NodeKind::Var, type, index, -1, ""}); }
  int term(int symbol, TypeId type) { return add({NodeKind::Term, type, symbol, -1, ""}); }

  TypeId binder_type(int abs_node) const { return types::argument(nodes[abs_node].type); }
};

/// Per-node local typing errors; empty means well typed.
std::vector<std::string> type_errors(const LambdaGraph& g);

/// Confirms local typing of every node and returns the root type;
/// throws Error carrying the itemized violations otherwise.
TypeId check_types(const LambdaGraph& g);

/// Computes free-variable sets (plus their types and display names) for all
/// nodes by fixpoint over the cyclic graph. Requires well-typed input.
void analyze(LambdaGraph& g);

/// Free variables of one node, as de Bruijn indices relative to that node.
const std::vector<int>& free_variables(const LambdaGraph& g, int node);

/// Whether no free variable escapes the root.
bool is_closed(const LambdaGraph& g);

/// Bisimulation quotient: structurally identical subgraphs (up to binder
/// names) collapse to one node. Nodes are renumbered in depth-first preorder
/// from the root; unreachable nodes are dropped. `mapping`, when given,
/// receives old-node -> new-node.
LambdaGraph intern(const LambdaGraph& g, std::vector<int>* mapping = nullptr);

/// One line per node, `id: App(1,2) : o`, ordered by id.
std::string dump(const LambdaGraph& g);

}  // namespace horsmc
