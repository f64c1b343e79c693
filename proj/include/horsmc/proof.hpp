#pragma once

#include <optional>
#include <string>
#include <vector>

#include "horsmc/cn.hpp"
#include "horsmc/lambda.hpp"
#include "horsmc/semantics.hpp"

namespace horsmc {

/// One annotation: under `ctx` (values for the node's free variables, in
/// free-variable order) the node admits `value`.
struct Judgment {
  int node = -1;
  std::vector<ValuePtr> ctx;
  ValuePtr value;
};

/// A locally checkable proof entry: the judgment plus the witnesses its rule
/// clause needs. App entries carry the guessed function/argument pair;
/// Abs entries carry the argument-to-body-value family for every argument
/// with a non-bottom image (other arguments fall under the default rule).
struct CertEntry {
  int node = -1;
  std::vector<ValuePtr> ctx;
  ValuePtr value;
  ValuePtr app_f, app_u;
  std::vector<std::pair<ValuePtr, ValuePtr>> family;
};

struct Certificate {
  int state = -1;  // claimed starting state
  std::vector<CertEntry> entries;
};

/// Local check of every entry plus the root claim; empty result means ok.
/// Independent of how the certificate was produced.
std::vector<std::string> verify_certificate(const LambdaGraph& g, const TrivialAutomaton& a,
                                            const Certificate& cert);

std::string certificate_to_text(const LambdaGraph& g, const TrivialAutomaton& a,
                                const Certificate& cert);
Certificate parse_certificate(const std::string& text, const LambdaGraph& g,
                              const TrivialAutomaton& a);

struct EngineLimits {
  uint64_t domain_cap = uint64_t{1} << 20;  // per-type semantic domain cap
  uint64_t judgment_cap = 4'000'000;        // total materialized judgments
};

/// The exact engine refuses instances whose domains exceed the caps.
struct CapExceeded : Error {
  using Error::Error;
};

/// The greatest set of judgments closed under the proof rules, computed by
/// iterated removal from the full judgment space. Terminal leaves are
/// handled symbolically (their judgment sets never shrink).
class GfpResult {
 public:
  bool contains(int node, const std::vector<ValuePtr>& ctx, const ValuePtr& value) const;
  /// Membership of (root, empty, {q0}).
  bool holds_root(int q0) const;
  /// Extracts a locally checkable certificate for (root, empty, {q0});
  /// requires holds_root(q0).
  Certificate extract_certificate(int q0) const;

  struct Impl;
  std::shared_ptr<Impl> impl;
};

GfpResult gfp_exact(const LambdaGraph& g, const TrivialAutomaton& a,
                    const EngineLimits& limits = {});

struct VarFailure {
  int node = -1;
  ValuePtr wanted;
  ValuePtr had;
};

struct GoalOptions {
  int max_rounds = 3;
  long long step_budget = 4'000'000;
  uint64_t table_cap = 4096;      // identity tables and Abs enumeration
  uint64_t full_pool_cap = 512;   // full-domain argument pools, last round only
};

struct GoalOutcome {
  std::optional<Certificate> certificate;
  std::vector<VarFailure> failures;  // diagnostics when exhausted
};

/// Goal-directed coinductive search from (root, empty, {q0}); cycles are
/// assumed true. Exhaustion is not a refutation.
GoalOutcome goal_search(const LambdaGraph& g, const TrivialAutomaton& a, int q0,
                        const GoalOptions& opts = {});

/// Smallest n <= max_n such that the automaton has no run up to level n on
/// the source, if any.
std::optional<int> refute_by_depth(const TrivialAutomaton& a, const SourcePtr& t, int q0,
                                   int max_n);

enum class EngineMode { Exact, Goal, Auto };

struct DecideOptions {
  EngineMode mode = EngineMode::Auto;
  EngineLimits limits;
  GoalOptions goal;
  int refute_fuel = 64;
};

struct Verdict {
  enum class Kind { Yes, No, Inconclusive } kind;
  std::optional<Certificate> certificate;  // Yes: always verified
  std::optional<int> refutation_level;     // No via the bounded-run refuter
  bool exact_engine = false;               // decided by the exact engine
  std::vector<VarFailure> failures;        // Inconclusive diagnostics
};

/// Decides whether the automaton has a run from q0 on the continuous normal
/// form of the machine's graph. Yes always carries a verified certificate;
/// No is authoritative (exact engine or a failing finite level); goal-engine
/// exhaustion without a refutation level is Inconclusive.
Verdict decide(const LambdaGraph& g, const TrivialAutomaton& a, int q0, CnMachine& machine,
               const DecideOptions& opts = {});

}  // namespace horsmc
