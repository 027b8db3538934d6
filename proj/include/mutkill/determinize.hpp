#pragma once

#include "ast.hpp"
#include "killability.hpp"
#include "mutation.hpp"
#include "sts.hpp"
#include "trace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mutkill
{

// One non-deterministic point of the conditional mutant, mut removed from
// states. state is empty for the initial choice. branches[k] is what nd = k
// selects; values past the end select the last branch.
struct branch_point
{
    std::optional<valuation> state;
    std::optional<valuation> input;
    std::vector<step> branches;
};

// Rows of the tabulated transition relation, over the signature of D.
struct d_transition
{
    valuation state;
    valuation input;
    valuation output;
    valuation next;
};

struct determinized
{
    sts system;
    std::string nd;     // fresh input
    std::string xtau;   // fresh state, true only before the first real step
    std::size_t degree = 1;
    std::vector<branch_point> points;
    std::vector<step> initial;
    std::vector<d_transition> transitions;
};

// Explicit construction over the states reachable in the conditional mutant.
// Throws model_error if the system has no boolean state `mut`.
[[nodiscard]] determinized determinize_explicit( const sts& cm, budget* b = nullptr );

// Set-choices become if-chains over a fresh nd input. Init set-choices other
// than mut's are moved into a first step guarded by a fresh state xtau.
[[nodiscard]] model_ast determinize_syntactic( const model_ast& m );

// Largest set-choice arity in the model (1 if there is none).
[[nodiscard]] std::size_t set_choice_degree( const model_ast& m );

// Drops the xtau step and the nd input from a trace of D, giving a trace over
// the signature of the conditional mutant.
[[nodiscard]] trace undo_shift( const sts& cm, const determinized& d, const trace& t );

struct transform_report
{
    bool deterministic = false;       // D is deterministic up to mut
    bool inclusion = false;           // cm prefixes show up in D, shifted by one
    std::size_t prefixes_checked = 0;
    bool d_killable = false;          // D's projections are not equivalent
    verdict_status cm_status = verdict_status::unknown;
    bool sound = false;               // D not killable implies cm equivalent
    std::vector<std::string> problems;

    [[nodiscard]] bool ok() const { return deterministic && inclusion && sound; }
};

[[nodiscard]] transform_report verify_transform( const sts& cm, const determinized& d, std::size_t depth,
                                                 std::uint64_t budget_limit = default_budget );

} // namespace mutkill
