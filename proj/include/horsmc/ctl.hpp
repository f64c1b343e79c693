#pragma once

#include <memory>
#include <string>

#include "horsmc/automaton.hpp"

namespace horsmc {

/// Safety fragment of CTL: letters, conjunction, disjunction, next and
/// globally modalities; negation only directly on letters.
struct SafetyFormula;
using FormulaPtr = std::shared_ptr<const SafetyFormula>;

struct SafetyFormula {
  enum class Kind { Letter, NotLetter, Or, And, Ex, Ax, Eg, Ag };
  Kind kind;
  int letter = -1;          // Letter / NotLetter
  FormulaPtr left, right;   // Or / And; unary operators use left

  static FormulaPtr make_letter(int f);
  static FormulaPtr make_not_letter(int f);
  static FormulaPtr make_or(FormulaPtr l, FormulaPtr r);
  static FormulaPtr make_and(FormulaPtr l, FormulaPtr r);
  static FormulaPtr make_unary(Kind k, FormulaPtr f);
};

/// Operators: \/ /\ EX AX EG AG ! (letters only), parentheses.
/// Precedence: unary > /\ > \/.
FormulaPtr parse_formula(const std::string& text, const RankedAlphabet& alpha);

std::string formula_to_string(const FormulaPtr& phi, const RankedAlphabet& alpha);

/// Compiles by structural recursion on the closure constructions.
TrivialAutomaton compile_formula(const FormulaPtr& phi, const RankedAlphabet& alpha);

}  // namespace horsmc
