#pragma once

#include <memory>
#include <string>
#include <vector>

#include "horsmc/alphabet.hpp"
#include "horsmc/lambda.hpp"
#include "horsmc/types.hpp"

namespace horsmc {

struct SchemeExpr;
using SchemeExprPtr = std::shared_ptr<const SchemeExpr>;

/// Applicative expression over terminals, nonterminals and rule parameters.
/// Lambdas may appear in source text; they are factored out into fresh
/// nonterminals during parsing, so stored rule bodies are lambda-free.
struct SchemeExpr {
  enum class Kind { App, Term, NonTerm, Param };
  Kind kind;
  TypeId type = -1;
  SchemeExprPtr fun, arg;  // App
  int index = -1;          // Term: symbol id; NonTerm: rule index; Param: position
  std::string name;        // Param / NonTerm source name
};

struct RecursionScheme {
  struct Rule {
    std::string name;
    TypeId type;
    std::vector<std::string> params;  // size = arity of type
    SchemeExprPtr body;               // ground type
  };

  RankedAlphabet terminals;
  std::vector<Rule> rules;
  int start = -1;

  int rule_index(const std::string& name) const;
};

/// Parses, type checks and lambda-lifts a scheme file. Throws ParseError /
/// Error with positions on bad input.
RecursionScheme parse_scheme(const std::string& text);

/// Re-confirms the structural invariants of a scheme value; empty when ok.
std::vector<std::string> validate_scheme(const RecursionScheme& s);

std::string scheme_to_text(const RecursionScheme& s);

/// The associated lambda tree: each rule becomes one shared lambda spine,
/// nonterminal occurrences become back-edges, no computation is performed.
/// The result is interned, analyzed, closed and of ground type.
LambdaGraph to_lambda_graph(const RecursionScheme& s);

}  // namespace horsmc
