#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "horsmc/alphabet.hpp"
#include "horsmc/term.hpp"

namespace horsmc {

/// Nondeterministic top-down tree automaton with trivial acceptance: a tree
/// is accepted when a run exists forever. Transition tuples are stored at
/// exact arity; a missing (state, symbol) entry is the empty set.
struct TrivialAutomaton {
  RankedAlphabet alphabet;
  std::vector<std::string> states;
  std::vector<int> initial;  // sorted, unique
  // delta[q][f] = set of tuples, each of length arity(f)
  std::vector<std::vector<std::vector<std::vector<int>>>> delta;

  int state_count() const { return static_cast<int>(states.size()); }
  int state_index(const std::string& name) const;
  int require_state(const std::string& name) const;
  bool is_initial(int q) const;

  void init_delta();  // sizes delta to states x symbols
  void add_transition(int q, int f, std::vector<int> tuple);
  const std::vector<std::vector<int>>& tuples(int q, int f) const { return delta[q][f]; }

  /// Sorts tuples, dedupes, sorts initial states.
  void normalize();
};

/// Structural invariant violations, one message each; empty means ok.
std::vector<std::string> validate(const TrivialAutomaton& a);

TrivialAutomaton parse_automaton(const std::string& text);
std::string to_text(const TrivialAutomaton& a);

/// A run up to some level: states parallel to the prefix tree's nodes.
struct RunLabeling {
  PrefixTree tree;
  std::vector<int> state;
};

/// Run-up-to-level-n search. Transition obligations apply to nodes at
/// distance < n only; frontier nodes carry a label but no obligation.
/// Memoized over (source node, state, depth), so shared subtrees are
/// explored once.
bool has_run_up_to(const TrivialAutomaton& a, const SourcePtr& t, int n, int q);
std::optional<RunLabeling> run_up_to(const TrivialAutomaton& a, const SourcePtr& t, int n, int q);
bool accepts_up_to(const TrivialAutomaton& a, const SourcePtr& t, int n);

/// Complete run on a finite, fully expanded tree: every node, including
/// nullary leaves, must satisfy its transition condition.
bool has_complete_run(const TrivialAutomaton& a, const PrefixTree& t, int q);
bool accepts_complete(const TrivialAutomaton& a, const PrefixTree& t);

/// Accepts exactly the trees whose root is labelled f.
TrivialAutomaton letter_automaton(const RankedAlphabet& alpha, int f);
/// Disjoint union; states are namespaced by operand index.
TrivialAutomaton union_automaton(const TrivialAutomaton& a0, const TrivialAutomaton& a1);
/// Product construction with componentwise transitions.
TrivialAutomaton intersection_automaton(const TrivialAutomaton& a0, const TrivialAutomaton& a1);
/// Same states, transitions unioned over the preimage of each symbol.
TrivialAutomaton project_automaton(const TrivialAutomaton& a, const Projection& pi);
/// EX: some child's subtree is in L(a).
TrivialAutomaton lift_ex(const TrivialAutomaton& a);
/// AX: every child's subtree is in L(a).
TrivialAutomaton lift_ax(const TrivialAutomaton& a);
/// AG: every subtree is in L(a). Powerset construction.
TrivialAutomaton lift_ag(const TrivialAutomaton& a);
/// EG: some maximal path of subtrees stays in L(a). Powerset construction
/// with a path marker; off-path obligation sets are carried along without
/// reseeding.
TrivialAutomaton lift_eg(const TrivialAutomaton& a);
/// Adds unary delay symbols R and b with state-preserving self transitions.
TrivialAutomaton lift_delays(const TrivialAutomaton& a);

/// Decides u v^omega in L(a) exactly, via state repetition inside the cycle.
bool lasso_accepts(const TrivialAutomaton& a, const std::vector<int>& u, const std::vector<int>& v);

/// Pumping: from a run up to level |Q|+1 on w extracts (u, v) with
/// |uv| <= |Q|+1, |v| >= 1 and u v^omega accepted. Throws Error when w has
/// no run up to level |Q|+1.
std::pair<std::vector<int>, std::vector<int>> pump(const TrivialAutomaton& a, const SourcePtr& w);

}  // namespace horsmc
