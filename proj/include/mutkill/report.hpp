#pragma once

#include "determinize.hpp"
#include "killability.hpp"
#include "mutation.hpp"
#include "sts.hpp"

#include <json.hpp>

#include <string>

namespace mutkill
{

using json = nlohmann::ordered_json;

// {name: value} with booleans, integers and enum literals as JSON scalars
[[nodiscard]] json to_json( const signature& sig, var_role role, const valuation& v );
[[nodiscard]] valuation valuation_from_json( const signature& sig, var_role role, const json& j );

[[nodiscard]] json to_json( const mutation& mu );
[[nodiscard]] json to_json( const signature& sig, const test_case& t );
[[nodiscard]] test_case test_from_json( const signature& sig, const json& j );

// one line of the suite file
[[nodiscard]] json to_json( const signature& sig, const suite_entry& e );
[[nodiscard]] json to_json( const signature& sig, const kill_verdict& v );
[[nodiscard]] json to_json( const signature& sig, const mutant_record& r );
[[nodiscard]] json to_json( const score_aggregate& a );
[[nodiscard]] json to_json( const validation_report& r );
[[nodiscard]] json to_json( const transform_report& r );

struct run_info
{
    std::string model;
    std::size_t bound = 0;
    std::string mode;
    int workers = 1;
    std::uint64_t seed = 0;
    std::uint64_t budget = default_budget;
};

// {model, settings, per_mutant, aggregate}; sig is the original model's
[[nodiscard]] json report_json( const run_info& info, const signature& sig, const score_report& r );

// tabulated D: nd degree, branching points, initial pairs and transitions
[[nodiscard]] json to_json( const determinized& d );

[[nodiscard]] std::string human_summary( const run_info& info, const score_report& r );

} // namespace mutkill
