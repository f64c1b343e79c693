#pragma once

#include <string>
#include <vector>

namespace horsmc {

/// Simple types over the base type `o`, interned: equal types share an id.
/// The base type has id 0.
using TypeId = int;

namespace types {

TypeId base();
TypeId arrow(TypeId arg, TypeId result);
bool is_base(TypeId t);
TypeId argument(TypeId t);
TypeId result(TypeId t);

/// Number of leading arrows: arity(o) = 0, arity(a->b) = 1 + arity(b).
int arity(TypeId t);
/// order(o) = 0, order(a->b) = max(order(a)+1, order(b)).
int order(TypeId t);
/// Argument types along the spine, outermost first.
std::vector<TypeId> argument_spine(TypeId t);

std::string to_string(TypeId t);
/// `o`, `->` right-associative, parentheses. No whitespace required.
TypeId parse(const std::string& text);

}  // namespace types

}  // namespace horsmc
