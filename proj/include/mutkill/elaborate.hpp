#pragma once

#include "ast.hpp"
#include "sts.hpp"

#include <string_view>

namespace mutkill
{

// init = conjunction of `v in rhs` over init assignments, trans likewise over
// next assignments with v primed. Inputs stay unconstrained.
[[nodiscard]] sts elaborate( const model_ast& m );

[[nodiscard]] signature_ptr elaborate_signature( const model_ast& m );

// Expression over a signature; primed identifiers denote next-state
// values (a primed output is the transition's output).
[[nodiscard]] predicate parse_predicate( std::string_view text, const signature& sig );

} // namespace mutkill
