#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "horsmc/error.hpp"
#include "horsmc/lambda.hpp"
#include "horsmc/term.hpp"

namespace horsmc {

/// Continuous normalization of a closed, ground-typed lambda graph.
///
/// Emits one output symbol per defining-equation step: an application emits R
/// and pushes the argument closure, an abstraction consumes the top of the
/// argument stack and emits b, a terminal emits itself with the collected
/// arguments as children. Substitution is replaced by environments, so a
/// variable at the head silently dereferences to the closure it was bound to.
///
/// Closures, environments, stacks and configurations are hash-consed, so the
/// normal form is produced as a term DAG: equal configurations share one
/// source node. Sources remain valid while the machine is alive.
class CnMachine {
 public:
  explicit CnMachine(const LambdaGraph& g);

  const LambdaGraph& graph() const { return graph_; }
  /// The output alphabet: the graph's terminals plus unary R and b.
  const RankedAlphabet& sigma() const { return sigma_; }
  int delay_r() const { return r_; }
  int delay_b() const { return b_; }

  struct Config {
    int closure = -1;
    int stack = -1;  // -1: empty
    bool operator<(const Config& o) const {
      return closure < o.closure || (closure == o.closure && stack < o.stack);
    }
  };

  /// The configuration computing the continuous normal form of the root.
  Config initial_config();

  struct Step {
    int emitted;                   // sigma symbol id
    std::optional<Config> next;    // set for R and b emissions
    std::vector<Config> children;  // set for terminal emissions
  };
  /// One unfolding of the defining equations.
  Step head_step(Config c);

  /// The continuous normal form t^beta as a lazy term source.
  SourcePtr normal_form();
  /// Memoized source for an arbitrary configuration.
  SourcePtr source_for(Config c);

 private:
  int intern_closure(int node, int env);
  int intern_env(int closure, int parent);
  int intern_stack(int closure, int parent);
  int env_lookup(int env, int index) const;

  LambdaGraph graph_;
  RankedAlphabet sigma_;
  int r_, b_;

  mutable std::mutex mu_;
  std::vector<std::pair<int, int>> closures_;  // (node, env)
  std::map<std::pair<int, int>, int> closure_ids_;
  std::vector<std::pair<int, int>> envs_;  // (closure, parent)
  std::map<std::pair<int, int>, int> env_ids_;
  std::vector<std::pair<int, int>> stacks_;  // (closure, parent)
  std::map<std::pair<int, int>, int> stack_ids_;
  std::map<Config, SourcePtr> sources_;
};

/// Raised by the lazy erased view when a delay spine exceeds the fuel.
struct ErasureTimeout : Error {
  explicit ErasureTimeout(std::vector<int> path)
      : Error("delay spine exceeded fuel"), stuck_path(std::move(path)) {}
  std::vector<int> stuck_path;  // child indices of the stuck branch, in the erased tree
};

/// Result of bounded delay erasure.
struct EraseResult {
  bool ok = false;
  PrefixTree prefix;            // over the Sigma' part of sigma
  std::vector<int> stuck_path;  // set on timeout
};

/// Skips R/b nodes; each branch may skip at most `fuel` consecutive delays.
EraseResult erase_delays(int delay_r, int delay_b, const SourcePtr& source, int depth, int fuel);

/// Lazy erased view; node queries throw ErasureTimeout past the fuel.
SourcePtr erase_delays_source(int delay_r, int delay_b, const SourcePtr& source, int fuel);

struct JustificationViolation {
  int node;  // terminal node in the prefix where the count equation fails
  int collected;
  int r_count;
  int b_count;
  int arity;
};

/// Checks collected + #R = #b + ar(f) along every delay chain that ends at a
/// terminal inside the prefix. `k0` is the number of arguments collected at
/// the root of the prefix (0 for t^beta).
std::optional<JustificationViolation> justification_check(const RankedAlphabet& sigma, int delay_r,
                                                          int delay_b, const PrefixTree& prefix,
                                                          int k0);

}  // namespace horsmc
