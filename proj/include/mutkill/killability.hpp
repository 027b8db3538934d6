#pragma once

#include "mutation.hpp"
#include "sts.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutkill
{

// Inputs at positions 1..n, outputs at positions 0..n.
struct test_case
{
    std::vector<valuation> inputs;
    std::vector<valuation> outputs;

    [[nodiscard]] std::size_t length() const { return inputs.size(); }
    bool operator==( const test_case& ) const = default;
    auto operator<=>( const test_case& ) const = default;
};

enum class kill_mode
{
    potential,
    definite
};

struct search_result
{
    bool killed = false;
    bool complete = false;  // the reachable search space was exhausted
    std::optional<test_case> test;
    std::vector<valuation> mutant_outputs;  // one deviating mutant run over test inputs
    std::size_t kill_depth = 0;
    std::size_t depth_reached = 0;
    std::size_t nodes = 0;
    std::size_t max_frontier = 0;
};

// Breadth-first search for a shortest potentially killing test; no bound
// means search to the fixpoint.
[[nodiscard]] search_result search_potential( const sts& original, const sts& mutant, std::optional<std::size_t> bound,
                                              budget* b = nullptr );
// Same for definite killing (output-sequence sets disjoint).
[[nodiscard]] search_result search_definite( const sts& original, const sts& mutant, std::optional<std::size_t> bound,
                                             budget* b = nullptr );

[[nodiscard]] search_result search_potential( const conditional_mutant& cm, std::optional<std::size_t> bound,
                                              budget* b = nullptr );
[[nodiscard]] search_result search_definite( const conditional_mutant& cm, std::optional<std::size_t> bound,
                                             budget* b = nullptr );

enum class verdict_status
{
    definitely_killable,
    potentially_only,
    equivalent,
    unknown
};

[[nodiscard]] const char* to_string( verdict_status s );
[[nodiscard]] const char* to_string( kill_mode m );

struct kill_verdict
{
    verdict_status status = verdict_status::unknown;
    std::optional<std::size_t> bound;  // set for bounded verdicts
    std::optional<test_case> witness;  // definite witness when definitely killable, else potential
    std::optional<test_case> potential_witness;
    std::optional<test_case> definite_witness;
    std::vector<valuation> mutant_outputs;
    std::size_t nodes = 0;
    std::size_t depth_reached = 0;
    bool exhausted = false;  // budget ran out
    std::string note;
};

// Unbounded decision: potential search to the fixpoint (Equivalent if no
// kill), then definite search to the fixpoint. Budget exhaustion gives unknown.
[[nodiscard]] kill_verdict decide_equivalence( const sts& original, const sts& mutant,
                                               std::uint64_t budget_limit = default_budget );
[[nodiscard]] kill_verdict decide_equivalence( const conditional_mutant& cm,
                                               std::uint64_t budget_limit = default_budget );

// Both searches up to `bound`. Equivalent only if the potential search
// exhausted its space before the bound.
[[nodiscard]] kill_verdict bounded_verdict( const sts& original, const sts& mutant, std::size_t bound,
                                            std::uint64_t budget_limit = default_budget );

// Output sequences (positions 0..n) over the given inputs.
[[nodiscard]] std::set<std::vector<valuation>> output_sequences( const sts& s, const std::vector<valuation>& inputs,
                                                                 budget* b = nullptr );

// Exact check of a test against a mutant. Throws model_error if the test
// is not a test of the original.
[[nodiscard]] bool test_kills( const sts& original, const sts& mutant, const test_case& t, kill_mode mode,
                               budget* b = nullptr );
[[nodiscard]] bool test_kills( const conditional_mutant& cm, const test_case& t, kill_mode mode, budget* b = nullptr );

// Literal application of the killing definitions to all prefixes up to `bound`.
struct oracle_verdict
{
    std::optional<std::size_t> potential_depth;  // shortest kill depth
    std::optional<std::size_t> definite_depth;
};

[[nodiscard]] oracle_verdict brute_force_oracle( const sts& original, const sts& mutant, std::size_t bound,
                                                 budget* b = nullptr );

// Some original run over the inputs, first in canonical order.
[[nodiscard]] std::optional<test_case> original_test( const sts& original, const std::vector<valuation>& inputs,
                                                      budget* b = nullptr );

struct mutant_record
{
    mutation m;
    kill_verdict verdict;
    bool error = false;
    bool budget_event = false;
    std::string message;
    double seconds = 0;
};

struct score_aggregate
{
    std::size_t total = 0;
    std::size_t definite = 0;
    std::size_t potential_only = 0;
    std::size_t equivalent = 0;
    std::size_t unknown = 0;
    std::size_t errors = 0;
    std::optional<double> mutation_score;  // percent; absent without mutants
    double definite_pct = 0;
    double potential_only_pct = 0;
    double equivalent_pct = 0;
    double unknown_pct = 0;
    double error_pct = 0;
    std::size_t tests = 0;  // after merging identical tests
    double avg_test_length = 0;
    std::size_t max_test_length = 0;
    double avg_runtime = 0;
    double total_runtime = 0;  // sum of per-mutant times
    double wall_time = 0;
    std::size_t resource_limit = 0;
};

struct suite_entry
{
    test_case test;
    kill_mode mode = kill_mode::definite;
    std::string mutant_id;
    std::vector<std::string> also_kills;
};

struct score_report
{
    std::vector<mutant_record> records;
    score_aggregate aggregate;
    std::vector<suite_entry> suite;
};

using judge_fn = std::function<kill_verdict( const conditional_mutant& )>;

struct score_options
{
    std::size_t bound = 7;
    std::uint64_t budget_limit = default_budget;
    int workers = 1;
    kill_mode suite_mode = kill_mode::definite;  // which witness enters the suite
    judge_fn judge;                              // default: bounded_verdict on the projections
};

// Verdict per mutant with OpenMP fan-out; workers == 1 is the serial reference.
[[nodiscard]] score_report mutation_score( const model_ast& m, const std::vector<mutation>& mutants,
                                           const score_options& opts = {} );

// Aggregates and the merged suite from per-mutant records.
void summarize( score_report& r, kill_mode suite_mode );

} // namespace mutkill
