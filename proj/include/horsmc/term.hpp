#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "horsmc/alphabet.hpp"

namespace horsmc {

class TermSource;
using SourcePtr = std::shared_ptr<TermSource>;

/// A lazily expanded node of a possibly infinite ranked tree. Querying a node
/// yields its label and one child source per arity slot; the expansion is
/// computed at most once and is safe under concurrent readers.
class TermSource {
 public:
  struct Expansion {
    int label = -1;
    std::vector<SourcePtr> children;
  };

  explicit TermSource(std::function<Expansion()> step) : step_(std::move(step)) {}

  int label() const { return force().label; }
  int arity() const { return static_cast<int>(force().children.size()); }
  const SourcePtr& child(int i) const { return force().children[i]; }

  static SourcePtr make(std::function<Expansion()> step) {
    return std::make_shared<TermSource>(std::move(step));
  }
  /// A node with eagerly known label and children.
  static SourcePtr node(int label, std::vector<SourcePtr> children);

 private:
  const Expansion& force() const;

  mutable std::mutex mu_;
  mutable std::function<Expansion()> step_;
  mutable std::optional<Expansion> memo_;
};

/// Finite top fragment of a term. Nodes at the cut-off depth carry their
/// label but no expanded children; internal nodes have exactly arity-many
/// children.
struct PrefixTree {
  struct Node {
    int label = -1;
    int depth = 0;
    bool expanded = false;
    std::vector<int> children;
  };
  std::vector<Node> nodes;

  int root() const { return 0; }
  bool fully_expanded() const;
};

/// All nodes of the source at distance <= depth; nodes at distance exactly
/// `depth` are unexpanded frontier nodes.
PrefixTree expand_prefix(const SourcePtr& source, int depth);

/// Whether two sources coincide up to level k (level 0: always).
bool similar_up_to(const SourcePtr& a, const SourcePtr& b, int k);

/// An arity-preserving symbol mapping between two alphabets.
struct Projection {
  RankedAlphabet from;
  RankedAlphabet to;
  std::vector<int> map;  // from-symbol id -> to-symbol id

  /// Throws Error unless every symbol maps to one of equal arity.
  static Projection make(RankedAlphabet from, RankedAlphabet to, std::vector<int> map);
  static Projection identity(const RankedAlphabet& alpha);
};

/// Relabels every node through the projection; the shape is unchanged.
SourcePtr project_term(const Projection& pi, const SourcePtr& source);

/// The omega-word u v v v ... as a unary tree source. All symbols must be
/// unary and v non-empty.
SourcePtr lasso_word(const RankedAlphabet& alpha, std::vector<int> u, std::vector<int> v);

/// Renders a prefix in parenthesized form, `...` at unexpanded frontiers:
/// `f(a, f(g(...), f(..., ...)))`.
std::string print_prefix(const RankedAlphabet& alpha, const PrefixTree& tree);

/// Checks the arity-shape invariant of a prefix against an alphabet.
void check_prefix_shape(const RankedAlphabet& alpha, const PrefixTree& tree);

}  // namespace horsmc
