#pragma once

#include "ast.hpp"
#include "sts.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutkill
{

enum class mutation_operator
{
    swap_binary_plus_minus,
    swap_unary_plus_minus,
    swap_eq_neq,
    swap_relational,
    drop_not,
    insert_not,
    swap_bool_connective,
    replace_int_constant,
    custom
};

[[nodiscard]] const char* operator_name( mutation_operator op );
[[nodiscard]] std::optional<mutation_operator> operator_from_name( std::string_view name );
[[nodiscard]] const std::vector<mutation_operator>& catalogue();

// Location of a node: assignment (section, item) and child indices from its rhs.
struct site_path
{
    std::size_t section = 0;
    std::size_t item = 0;
    std::vector<std::size_t> path;
};

struct mutation
{
    std::string id;  // operator-variant@offset
    mutation_operator op = mutation_operator::custom;
    std::string variant;
    site_path site;
    source_span span;
    section_kind block = section_kind::next;  // init or next
    std::string target;                       // assigned variable
    std::string original;
    std::string replacement;
    expr_ptr replacement_node;
};

struct mutation_options
{
    bool include_init_sites = true;
    std::set<mutation_operator> ops;  // empty = whole catalogue
};

// Every applicable (operator, site), in source order, without mutants that
// render identically to the original or to an earlier mutant.
[[nodiscard]] std::vector<mutation> enumerate_mutations( const model_ast& m, const mutation_options& opts = {} );

// Replaces the node starting at `offset` (the outermost one, or the one
// ending at `end` if given) by the expression `replacement`.
[[nodiscard]] mutation custom_mutation( const model_ast& m, std::size_t offset, std::string_view replacement,
                                        std::optional<std::size_t> end = std::nullopt );

[[nodiscard]] const expr& node_at( const model_ast& m, const site_path& site );
[[nodiscard]] model_ast apply_mutation( const model_ast& m, const mutation& mu );

// Original and mutant in one system, told apart by the frozen state `mut`.
struct conditional_mutant
{
    model_ast original;
    mutation applied;
    model_ast ast;
    sts system;
};

// Throws model_error ("mutation inapplicable ...") if the wrapped model
// does not elaborate, e.g. a constant outside the target's range.
[[nodiscard]] conditional_mutant build_conditional_mutant( const model_ast& m, const mutation& mu );

// The system with mut fixed and eliminated.
[[nodiscard]] sts project( const sts& cm, bool mut_value, const std::string& flag = "mut" );
[[nodiscard]] sts project( const conditional_mutant& cm, bool mut_value );

} // namespace mutkill
