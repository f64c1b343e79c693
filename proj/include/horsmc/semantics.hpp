#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "horsmc/automaton.hpp"
#include "horsmc/types.hpp"

namespace horsmc {

class SemValue;
using ValuePtr = std::shared_ptr<const SemValue>;

/// An element of the finite semantics of a simple type: a set of automaton
/// states at base type, a finite function at arrow type.
///
/// Arrow values are kept canonically as a join of step functions: a sorted
/// list of (argument, result) pairs with distinct arguments and non-bottom
/// results; arguments not listed map to bottom. A full table is the special
/// case listing every argument with a non-bottom image, so extensionally
/// equal values have identical representations.
class SemValue {
 public:
  TypeId type;
  uint64_t mask = 0;                                     // base
  std::vector<std::pair<ValuePtr, ValuePtr>> steps;      // arrow
  size_t hash = 0;

  bool is_base() const { return types::is_base(type); }
};

namespace sem {

ValuePtr base_value(uint64_t mask);
ValuePtr bottom(TypeId type);
bool is_bottom(const ValuePtr& v);

/// The function mapping exactly `arg` to `result` and all else to bottom.
ValuePtr step_function(const ValuePtr& arg, const ValuePtr& result);
/// Curried step function over several arguments.
ValuePtr step_function(const std::vector<ValuePtr>& args, const ValuePtr& result);

int compare(const ValuePtr& a, const ValuePtr& b);
bool equal(const ValuePtr& a, const ValuePtr& b);
bool leq(const ValuePtr& a, const ValuePtr& b);
ValuePtr join(const ValuePtr& a, const ValuePtr& b);
ValuePtr apply(const ValuePtr& f, const ValuePtr& a);

struct DomainSize {
  bool too_large = false;
  uint64_t n = 0;
};
/// |[[tau]]| with respect to `q` states, saturating above `cap`.
DomainSize domain_size(TypeId type, int q, uint64_t cap);

/// Every element of [[tau]] exactly once: base sets by bitmask, arrow values
/// lexicographic in the argument enumeration. Throws Error above the cap.
std::vector<ValuePtr> enumerate_domain(TypeId type, int q, uint64_t cap);

/// Precomposition with one automaton step on the given unary delay symbol:
/// q is in the lifted result iff delta(q, d) reaches a state in the original.
ValuePtr lift_delay(const TrivialAutomaton& a, int delay_symbol, const ValuePtr& f);

/// The largest semantic value a terminal admits, as a full table; requires
/// the domain of every argument position to fit the cap.
ValuePtr terminal_table(const TrivialAutomaton& a, int symbol, uint64_t cap);
/// {q | delta(q, f) hits the argument sets}, for exactly arity-many base args.
uint64_t terminal_result_mask(const TrivialAutomaton& a, int symbol,
                              const std::vector<uint64_t>& args);
/// v <= the terminal's largest value, checked on v's argument patterns only.
bool leq_terminal(const TrivialAutomaton& a, int symbol, const ValuePtr& v);

/// Display syntax: base {q2,q1}; steps [arg |-> res]; joins with \/; bot;
/// id and swap auto-detected at type o->o.
std::string display(const ValuePtr& v, const std::vector<std::string>& states);
/// Parses the display syntax at an expected type.
ValuePtr parse_value(const std::string& text, TypeId type, const std::vector<std::string>& states);
/// Parses a value from `text` starting at `pos` (used by certificate io).
ValuePtr parse_value_at(const std::string& text, size_t& pos, TypeId type,
                        const std::vector<std::string>& states);

}  // namespace sem

}  // namespace horsmc
