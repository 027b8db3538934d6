#include "mutkill/report.hpp"
#include "mutkill/errors.hpp"

#include <cstdio>
#include <sstream>

namespace mutkill
{

namespace
{

json scalar( const var_domain& d, std::int32_t idx )
{
    switch ( d.kind() )
    {
    case domain_kind::boolean:
        return idx != 0;
    case domain_kind::integer:
        return d.lo() + idx;
    case domain_kind::enumeration:
        return d.literals().at( static_cast<std::size_t>( idx ) );
    }
    return nullptr;
}

std::int32_t index_of( const var_domain& d, const json& j, const std::string& name )
{
    std::optional<std::size_t> i;
    if ( d.kind() == domain_kind::boolean && j.is_boolean() )
        i = j.get<bool>() ? 1 : 0;
    else if ( d.kind() == domain_kind::integer && j.is_number_integer() )
        i = d.index_of_int( j.get<std::int64_t>() );
    else if ( d.kind() == domain_kind::enumeration && j.is_string() )
        i = d.index_of_literal( j.get<std::string>() );
    if ( !i )
        throw model_error( "value " + j.dump() + " not in the domain of '" + name + "'" );
    return static_cast<std::int32_t>( *i );
}

json valuations( const signature& sig, var_role role, const std::vector<valuation>& vs )
{
    json a = json::array();
    for ( const auto& v : vs )
        a.push_back( to_json( sig, role, v ) );
    return a;
}

const char* site_name( section_kind k )
{
    return k == section_kind::init ? "init" : "next";
}

double pct( std::size_t n, std::size_t total )
{
    return total ? 100.0 * static_cast<double>( n ) / static_cast<double>( total ) : 0.0;
}

} // namespace

json to_json( const signature& sig, var_role role, const valuation& v )
{
    json o = json::object();
    const auto& vars = sig.group( role );
    for ( std::size_t i = 0; i < vars.size(); ++i )
        o[vars[i].name] = scalar( vars[i].domain, v.idx.at( i ) );
    return o;
}

valuation valuation_from_json( const signature& sig, var_role role, const json& j )
{
    if ( !j.is_object() )
        throw model_error( "valuation must be an object" );
    valuation v;
    for ( const auto& var : sig.group( role ) )
    {
        auto it = j.find( var.name );
        if ( it == j.end() )
            throw model_error( "valuation lacks '" + var.name + "'" );
        v.idx.push_back( index_of( var.domain, *it, var.name ) );
    }
    if ( j.size() != v.idx.size() )
        throw model_error( "valuation has unknown variables: " + j.dump() );
    return v;
}

json to_json( const mutation& mu )
{
    json o;
    o["id"] = mu.id;
    o["operator"] = operator_name( mu.op );
    o["variant"] = mu.variant;
    o["site"] = site_name( mu.block );
    o["target"] = mu.target;
    o["offset"] = mu.span.begin;
    o["original"] = mu.original;
    o["replacement"] = mu.replacement;
    return o;
}

json to_json( const signature& sig, const test_case& t )
{
    json o;
    o["inputs"] = valuations( sig, var_role::input, t.inputs );
    o["outputs"] = valuations( sig, var_role::output, t.outputs );
    return o;
}

test_case test_from_json( const signature& sig, const json& j )
{
    test_case t;
    for ( const auto& v : j.at( "inputs" ) )
        t.inputs.push_back( valuation_from_json( sig, var_role::input, v ) );
    for ( const auto& v : j.at( "outputs" ) )
        t.outputs.push_back( valuation_from_json( sig, var_role::output, v ) );
    if ( t.outputs.size() != t.inputs.size() + 1 )
        throw model_error( "test needs one more output than inputs" );
    return t;
}

json to_json( const signature& sig, const suite_entry& e )
{
    json o;
    o["mutant_id"] = e.mutant_id;
    o["mode"] = to_string( e.mode );
    auto t = to_json( sig, e.test );
    o["inputs"] = t["inputs"];
    o["outputs"] = t["outputs"];
    o["also_kills"] = e.also_kills;
    return o;
}

json to_json( const signature& sig, const kill_verdict& v )
{
    json o;
    o["status"] = to_string( v.status );
    o["bound"] = v.bound ? json( *v.bound ) : json( nullptr );
    o["witness"] = v.witness ? to_json( sig, *v.witness ) : json( nullptr );
    o["potential_witness"] = v.potential_witness ? to_json( sig, *v.potential_witness ) : json( nullptr );
    o["definite_witness"] = v.definite_witness ? to_json( sig, *v.definite_witness ) : json( nullptr );
    if ( !v.mutant_outputs.empty() )
        o["mutant_outputs"] = valuations( sig, var_role::output, v.mutant_outputs );
    o["nodes"] = v.nodes;
    o["depth_reached"] = v.depth_reached;
    o["budget_exhausted"] = v.exhausted;
    if ( !v.note.empty() )
        o["note"] = v.note;
    return o;
}

json to_json( const signature& sig, const mutant_record& r )
{
    json o;
    o["id"] = r.m.id;
    o["operator"] = operator_name( r.m.op );
    o["site"] = site_name( r.m.block );
    o["status"] = r.error ? "error" : to_string( r.verdict.status );
    o["verdict"] = r.error ? json( nullptr ) : to_json( sig, r.verdict );
    o["wall_time"] = r.seconds;
    o["budget_event"] = r.budget_event;
    if ( !r.message.empty() )
        o["message"] = r.message;
    return o;
}

json to_json( const score_aggregate& a )
{
    json o;
    o["Total Mutants"] = a.total;
    o["Mutation Score"] = a.mutation_score ? json( *a.mutation_score ) : json( "no mutants" );
    o["Definitely Killable"] = a.definite;
    o["Potentially Killable Only"] = a.potential_only;
    o["Equivalent Mutants"] = a.equivalent;
    o["Unknown"] = a.unknown;
    o["Errors"] = a.errors;
    o["percentages"] = { { "definitely_killable", a.definite_pct },
                         { "potentially_only", a.potential_only_pct },
                         { "equivalent", a.equivalent_pct },
                         { "unknown", a.unknown_pct },
                         { "error", a.error_pct } };
    o["# Test-cases"] = a.tests;
    o["Avg. Test-case Len."] = a.avg_test_length;
    o["Max. Test-case Len."] = a.max_test_length;
    o["# Resource Limit"] = a.resource_limit;
    o["Avg. Runtime"] = a.avg_runtime;
    o["Total Runtime"] = a.total_runtime;
    o["Wall Time"] = a.wall_time;
    return o;
}

json to_json( const validation_report& r )
{
    json o;
    o["deterministic"] = r.deterministic;
    o["total"] = r.total;
    o["reachable_states"] = r.reachable_states;
    o["depth_reached"] = r.depth_reached;
    o["witnesses"] = r.witnesses;
    return o;
}

json to_json( const transform_report& r )
{
    json o;
    o["deterministic_up_to_mut"] = r.deterministic;
    o["trace_inclusion"] = r.inclusion;
    o["prefixes_checked"] = r.prefixes_checked;
    o["d_killable"] = r.d_killable;
    o["mutant_status"] = to_string( r.cm_status );
    o["sound"] = r.sound;
    o["problems"] = r.problems;
    return o;
}

json report_json( const run_info& info, const signature& sig, const score_report& r )
{
    json o;
    o["model"] = info.model;
    o["settings"] = { { "bound", info.bound },
                      { "mode", info.mode },
                      { "workers", info.workers },
                      { "seed", info.seed },
                      { "budget", info.budget } };
    json per = json::array();
    for ( const auto& rec : r.records )
        per.push_back( to_json( sig, rec ) );
    o["per_mutant"] = per;
    o["aggregate"] = to_json( r.aggregate );
    return o;
}

json to_json( const determinized& d )
{
    const auto& sig = d.system.sig();
    // branching points carry states without mut and xtau
    std::vector<const variable*> plain;
    for ( const auto& v : sig.states() )
        if ( v.name != "mut" && v.name != d.xtau )
            plain.push_back( &v );
    auto plain_state = [&]( const valuation& v ) {
        json o = json::object();
        for ( std::size_t i = 0; i < plain.size(); ++i )
            o[plain[i]->name] = scalar( plain[i]->domain, v.idx.at( i ) );
        return o;
    };
    // inputs of a point are the conditional mutant's, i.e. without nd
    auto plain_input = [&]( const valuation& v ) {
        json o = json::object();
        std::size_t k = 0;
        for ( const auto& var : sig.inputs() )
            if ( var.name != d.nd )
                o[var.name] = scalar( var.domain, v.idx.at( k++ ) );
        return o;
    };

    json o;
    o["nd"] = d.nd;
    o["xtau"] = d.xtau;
    o["degree"] = d.degree;
    json points = json::array();
    for ( const auto& p : d.points )
    {
        json jp;
        jp["state"] = p.state ? plain_state( *p.state ) : json( "initial" );
        jp["input"] = p.input ? plain_input( *p.input ) : json( nullptr );
        json br = json::array();
        for ( std::size_t k = 0; k < p.branches.size(); ++k )
            br.push_back( { { "nd", k },
                            { "output", to_json( sig, var_role::output, p.branches[k].output ) },
                            { "next", plain_state( p.branches[k].state ) } } );
        jp["branches"] = br;
        points.push_back( jp );
    }
    o["branching_points"] = points;
    json init = json::array();
    for ( const auto& s : d.initial )
        init.push_back(
            { { "output", to_json( sig, var_role::output, s.output ) }, { "state", to_json( sig, var_role::state, s.state ) } } );
    o["initial"] = init;
    json tr = json::array();
    for ( const auto& t : d.transitions )
        tr.push_back( { { "state", to_json( sig, var_role::state, t.state ) },
                        { "input", to_json( sig, var_role::input, t.input ) },
                        { "output", to_json( sig, var_role::output, t.output ) },
                        { "next", to_json( sig, var_role::state, t.next ) } } );
    o["transitions"] = tr;
    return o;
}

std::string human_summary( const run_info& info, const score_report& r )
{
    const auto& a = r.aggregate;
    std::ostringstream out;
    char buf[160];
    auto line = [&]( const char* label, const std::string& value ) {
        std::snprintf( buf, sizeof buf, "%-28s %s\n", label, value.c_str() );
        out << buf;
    };
    auto count_pct = [&]( std::size_t n ) {
        std::snprintf( buf, sizeof buf, "%zu (%.1f%%)", n, pct( n, a.total ) );
        return std::string( buf );
    };
    auto num = [&]( double x, const char* fmt ) {
        char b[64];
        std::snprintf( b, sizeof b, fmt, x );
        return std::string( b );
    };

    out << "model " << info.model << ", bound " << info.bound << ", mode " << info.mode << "\n";
    line( "# Mutants", std::to_string( a.total ) );
    line( "Mutation Score", a.mutation_score ? num( *a.mutation_score, "%.1f%%" ) : std::string( "no mutants" ) );
    line( "Definitely Killable", count_pct( a.definite ) );
    line( "Potentially Killable Only", count_pct( a.potential_only ) );
    line( "Equivalent Mutants", count_pct( a.equivalent ) );
    line( "Unknown", count_pct( a.unknown ) );
    line( "Errors", count_pct( a.errors ) );
    line( "# Test-cases", std::to_string( a.tests ) );
    line( "Avg. Test-case Len.", num( a.avg_test_length, "%.2f" ) );
    line( "Max. Test-case Len.", std::to_string( a.max_test_length ) );
    line( "# Resource Limit", std::to_string( a.resource_limit ) );
    line( "Avg. Runtime", num( a.avg_runtime, "%.4f s" ) );
    line( "Total Runtime", num( a.total_runtime, "%.3f s" ) );
    return out.str();
}

} // namespace mutkill
