#pragma once

#include "killability.hpp"
#include "sts.hpp"
#include "trace.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mutkill
{

enum class ltl_kind
{
    tt,
    ff,
    atom,
    neg,
    conj,
    disj,
    implies,
    iff,
    next,
    until,
    eventually,
    always
};

struct ltl;
using ltl_ptr = std::shared_ptr<const ltl>;

struct ltl
{
    ltl_kind kind = ltl_kind::tt;
    std::string ap;     // atom: proposition name, `[v=value]` or a boolean variable
    std::string trace;  // atom: trace variable
    std::vector<ltl_ptr> args;
};

[[nodiscard]] bool same_structure( const ltl_ptr& a, const ltl_ptr& b );

namespace ltl_ops
{
ltl_ptr tt();
ltl_ptr ff();
ltl_ptr atom( std::string ap, std::string trace );
ltl_ptr neg( ltl_ptr a );
ltl_ptr conj( std::vector<ltl_ptr> args );
ltl_ptr disj( std::vector<ltl_ptr> args );
ltl_ptr implies( ltl_ptr a, ltl_ptr b );
ltl_ptr iff( ltl_ptr a, ltl_ptr b );
ltl_ptr next( ltl_ptr a );
ltl_ptr until( ltl_ptr a, ltl_ptr b );
ltl_ptr eventually( ltl_ptr a );
ltl_ptr always( ltl_ptr a );
} // namespace ltl_ops

enum class quantifier
{
    exists,
    forall
};

struct quantified
{
    quantifier q = quantifier::exists;
    std::string var;
};

struct hyper_formula
{
    std::vector<quantified> prefix;
    ltl_ptr body;
};

// exists p. forall q. G(...) -> F(...), atoms `[var=value]@p` or `mut@p`
[[nodiscard]] hyper_formula parse_hyper( std::string_view text );
[[nodiscard]] std::string to_string( const ltl_ptr& f );
[[nodiscard]] std::string to_string( const hyper_formula& f );

// guarded hoists the existential trace's mut literal out of the implication;
// literal keeps the textbook shape, where it sits inside the antecedent
enum class phi_shape
{
    guarded,
    literal
};

[[nodiscard]] std::vector<std::string> value_aps( const signature& sig, var_role role );
[[nodiscard]] hyper_formula build_phi( int k, const std::vector<std::string>& input_aps,
                                       const std::vector<std::string>& output_aps, phi_shape shape = phi_shape::guarded,
                                       const std::string& mut_ap = "mut" );

struct hyper_verdict
{
    bool holds = false;
    std::size_t bound = 0;         // verdict holds for prefixes of this depth only
    std::optional<trace> witness;  // for an outermost exists
    std::size_t outer_candidates = 0;
    std::uint64_t nodes = 0;
};

struct hyper_options
{
    int workers = 1;
    std::uint64_t budget_limit = default_budget;
    std::optional<trace> pin;  // restrict the outermost quantifier to this prefix
};

// quantifiers range over the depth-n prefixes of s; finite-trace semantics
[[nodiscard]] hyper_verdict eval_bounded( const sts& s, const hyper_formula& f, std::size_t depth,
                                          const hyper_options& opts = {} );

// nested loops over enumerate_traces; small inputs only
[[nodiscard]] hyper_verdict eval_bounded_reference( const sts& s, const hyper_formula& f, std::size_t depth,
                                                    budget* b = nullptr );

// body under a concrete assignment of equal-length prefixes, at position 0
[[nodiscard]] bool evaluate_body( const signature& sig, const ltl_ptr& body,
                                  const std::map<std::string, trace>& assignment );

// shortest killing prefix of an exists-witness of phi k on a conditional mutant system
[[nodiscard]] test_case witness_to_test( const sts& cm, const trace& w, int phi, budget* b = nullptr );

} // namespace mutkill
