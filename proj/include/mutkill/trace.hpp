#pragma once

#include "sts.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutkill
{

// Position j of a trace prefix. Position 0 has no input (placeholder);
// for j >= 1 the step reads X_{j-1} -I_j,O_j-> X_j.
struct trace_step
{
    std::optional<valuation> input;
    valuation output;
    valuation state;

    bool operator==( const trace_step& ) const = default;
    auto operator<=>( const trace_step& ) const = default;
};

using trace = std::vector<trace_step>;

// All prefixes of length depth+1, in canonical order.
[[nodiscard]] std::vector<trace> enumerate_traces( const sts& s, std::size_t depth, budget* b = nullptr );

struct var_ref
{
    var_role role;
    std::size_t index;

    bool operator==( const var_ref& ) const = default;
};

// Componentwise restriction; -1 stands for the placeholder input at position 0.
struct projected_trace
{
    std::vector<var_ref> vars;
    std::vector<std::vector<std::int32_t>> steps;

    bool operator==( const projected_trace& ) const = default;
};

[[nodiscard]] projected_trace restrict( const signature& sig, const trace& t, const std::vector<std::string>& names );
[[nodiscard]] std::vector<std::string> names_of( const signature& sig, std::initializer_list<var_role> roles );

struct atomic_prop
{
    std::string name;
    predicate pred;
};

using ap_labeling = std::vector<atomic_prop>;

// One `[v=value]` proposition per variable and value of the given groups.
[[nodiscard]] ap_labeling default_labeling( const signature& sig,
                                            std::initializer_list<var_role> roles = { var_role::input, var_role::output,
                                                                                      var_role::state } );

// Labels holding at each position; input propositions are false at position 0.
[[nodiscard]] std::vector<std::set<std::string>> ap_trace( const signature& sig, const trace& t,
                                                           const ap_labeling& labels );

// Same, as one bit per label (labels.size() <= 64).
[[nodiscard]] std::vector<std::uint64_t> ap_letters( const signature& sig, const trace& t, const ap_labeling& labels );

[[nodiscard]] std::string format_trace( const signature& sig, const trace& t );

} // namespace mutkill
