#pragma once

#include "domain.hpp"
#include "predicate.hpp"
#include "signature.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mutkill
{

struct source_span
{
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==( const source_span& ) const = default;
};

enum class expr_kind
{
    bool_lit,
    int_lit,
    ident,    // variable or enum literal, resolved during elaboration
    unary,    // op in {not_, neg, pos}
    binary,
    ternary,  // (c ? a : b)
    set,      // {e1, ..., ek}; rhs positions only
    ite       // if (g) : v elif (g) : v else : v
};

struct expr;
using expr_ptr = std::shared_ptr<const expr>;

struct expr
{
    expr_kind kind = expr_kind::bool_lit;
    source_span span;
    source_span op_span;   // operator token for unary/binary
    bool parens = false;   // written inside parentheses
    bool primed = false;   // ident only, predicate text only
    bool bool_value = false;
    std::int64_t int_value = 0;
    std::string name;
    pred_op op = pred_op::constant;
    std::vector<expr_ptr> args;
};

// Structural equality, ignoring spans and source parentheses.
[[nodiscard]] bool same_structure( const expr& a, const expr& b );

enum class section_kind
{
    input,
    output,
    state,
    init,
    next
};

[[nodiscard]] const char* keyword( section_kind k );

struct declaration
{
    std::string name;
    var_domain domain;  // as written; eps is added to outputs during elaboration
    source_span span;
};

struct assignment
{
    std::string target;
    expr_ptr rhs;
    source_span span;
};

struct section
{
    section_kind kind = section_kind::input;
    source_span span;
    std::vector<declaration> decls;
    std::vector<assignment> assigns;
};

struct model_ast
{
    std::vector<section> sections;

    [[nodiscard]] std::vector<const declaration*> declarations( section_kind k ) const;
    [[nodiscard]] const assignment* find_assignment( section_kind block, std::string_view target ) const;
};

[[nodiscard]] bool same_structure( const model_ast& a, const model_ast& b );

namespace ast
{
expr_ptr bool_lit( bool b );
expr_ptr int_lit( std::int64_t v );  // negative values become unary minus over a literal
expr_ptr ident( std::string name );
expr_ptr unary( pred_op op, expr_ptr a );
expr_ptr binary( pred_op op, expr_ptr a, expr_ptr b );
expr_ptr ternary( expr_ptr c, expr_ptr a, expr_ptr b );
expr_ptr set( std::vector<expr_ptr> elements );
expr_ptr ite( std::vector<expr_ptr> args );
} // namespace ast

// Parses a model. Syntax errors throw parse_error with one diagnostic;
// semantic errors are collected and thrown together.
[[nodiscard]] model_ast parse_model( std::string_view text );

// Parses a single expression (as on the right of `:=`); primes only if allowed.
[[nodiscard]] expr_ptr parse_expression( std::string_view text, bool allow_primes = false );

[[nodiscard]] std::string render( const model_ast& m );
[[nodiscard]] std::string render( const expr& e );

// Precedence level used by the printer and parser (0 = if-chain, 8 = primary).
[[nodiscard]] int precedence_of( const expr& e );

} // namespace mutkill
