#include "mutkill/killability.hpp"
#include "mutkill/errors.hpp"
#include "mutkill/trace.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <unordered_map>

#include <omp.h>

namespace mutkill
{

const char* to_string( verdict_status s )
{
    switch ( s )
    {
    case verdict_status::definitely_killable:
        return "definitely_killable";
    case verdict_status::potentially_only:
        return "potentially_only";
    case verdict_status::equivalent:
        return "equivalent";
    case verdict_status::unknown:
        return "unknown";
    }
    return "?";
}

const char* to_string( kill_mode m )
{
    return m == kill_mode::potential ? "potential" : "definite";
}

namespace
{

struct vec_hash
{
    template <typename T>
    std::size_t operator()( const std::vector<T>& v ) const noexcept
    {
        std::size_t h = v.size();
        for ( const auto& x : v )
            h ^= std::hash<T>{}( x ) + 0x9e3779b97f4a7c15ULL + ( h << 6 ) + ( h >> 2 );
        return h;
    }
};

template <typename T>
void sort_unique( std::vector<T>& v )
{
    std::sort( v.begin(), v.end() );
    v.erase( std::unique( v.begin(), v.end() ), v.end() );
}

struct path_info
{
    std::size_t parent = SIZE_MAX;
    std::size_t input = 0;
    std::uint64_t mutant_output = 0;
    std::size_t depth = 0;
};

std::vector<std::size_t> input_path( const std::vector<path_info>& info, std::size_t node, std::size_t last_input )
{
    std::vector<std::size_t> rev = { last_input };
    for ( std::size_t n = node; info[n].parent != SIZE_MAX; n = info[n].parent )
        rev.push_back( info[n].input );
    return { rev.rbegin(), rev.rend() };
}

void finish_witness( search_result& r, const sts& original, const sts& mutant, const std::vector<valuation>& inputs,
                     budget* b )
{
    r.test = original_test( original, inputs, b );
    auto runs = output_sequences( mutant, inputs, b );
    if ( !runs.empty() )
    {
        // prefer a mutant run the original cannot produce
        auto orig = output_sequences( original, inputs, b );
        for ( const auto& run : runs )
            if ( !orig.count( run ) )
            {
                r.mutant_outputs = run;
                return;
            }
        r.mutant_outputs = *runs.begin();
    }
}

} // namespace

search_result search_potential( const sts& original, const sts& mutant, std::optional<std::size_t> bound, budget* b )
{
    search_result r;
    state_space so( original, b );
    state_space sm( mutant, b );
    const auto& ins = sm.inputs();

    std::vector<int> nodes_m;
    std::vector<std::vector<int>> nodes_o;
    std::vector<path_info> info;
    std::unordered_map<std::int64_t, std::unordered_map<std::vector<int>, std::size_t, vec_hash>> index;

    auto intern = [&]( int m, std::vector<int> set, path_info pi ) {
        auto& bucket = index[m];
        if ( bucket.count( set ) )
            return;
        bucket.emplace( set, nodes_m.size() );
        nodes_m.push_back( m );
        nodes_o.push_back( std::move( set ) );
        info.push_back( pi );
        if ( b )
            b->charge();
    };

    auto kill = [&]( std::vector<valuation> inputs, std::size_t depth ) {
        r.killed = true;
        r.kill_depth = depth;
        r.depth_reached = depth;
        r.nodes = nodes_m.size();
        finish_witness( r, original, mutant, inputs, b );
        return r;
    };

    for ( const auto& em : sm.initial() )
    {
        std::vector<int> set;
        for ( const auto& eo : so.initial() )
            if ( eo.output == em.output )
                set.push_back( eo.state );
        sort_unique( set );
        if ( set.empty() )
            return kill( {}, 0 );
        intern( em.state, std::move( set ), {} );
    }

    bool cut = false;
    for ( std::size_t q = 0; q < nodes_m.size(); ++q )
    {
        std::size_t d = info[q].depth;
        r.depth_reached = std::max( r.depth_reached, d );
        r.max_frontier = std::max( r.max_frontier, nodes_m.size() - q );
        if ( bound && d >= *bound )
        {
            cut = true;
            continue;
        }
        for ( std::size_t i = 0; i < ins.size(); ++i )
        {
            int m = nodes_m[q];
            for ( const auto& em : sm.successors( m, i ) )
            {
                std::vector<int> next;
                for ( int s : nodes_o[q] )
                    for ( const auto& eo : so.successors( s, i ) )
                        if ( eo.output == em.output )
                            next.push_back( eo.state );
                sort_unique( next );
                if ( next.empty() )
                {
                    std::vector<valuation> inputs;
                    for ( auto k : input_path( info, q, i ) )
                        inputs.push_back( ins[k] );
                    return kill( std::move( inputs ), d + 1 );
                }
                intern( em.state, std::move( next ), { q, i, em.output, d + 1 } );
            }
        }
    }
    r.complete = !cut;
    r.nodes = nodes_m.size();
    return r;
}

search_result search_definite( const sts& original, const sts& mutant, std::optional<std::size_t> bound, budget* b )
{
    search_result r;
    state_space so( original, b );
    state_space sm( mutant, b );
    const auto& ins = sm.inputs();

    struct dnode
    {
        std::vector<std::pair<int, int>> pairs;
        std::vector<int> orig;
        std::vector<int> mut;
    };
    std::vector<dnode> nodes;
    std::vector<path_info> info;
    std::unordered_map<std::vector<int>, std::size_t, vec_hash> index;

    auto key_of = []( const dnode& n ) {
        std::vector<int> k;
        k.push_back( static_cast<int>( n.pairs.size() ) );
        for ( auto [a, c] : n.pairs )
        {
            k.push_back( a );
            k.push_back( c );
        }
        k.push_back( -1 );
        k.insert( k.end(), n.orig.begin(), n.orig.end() );
        k.push_back( -1 );
        k.insert( k.end(), n.mut.begin(), n.mut.end() );
        return k;
    };
    auto intern = [&]( dnode n, path_info pi ) {
        auto k = key_of( n );
        if ( index.count( k ) )
            return;
        index.emplace( std::move( k ), nodes.size() );
        nodes.push_back( std::move( n ) );
        info.push_back( pi );
        if ( b )
            b->charge();
    };
    auto kill = [&]( std::vector<valuation> inputs, std::size_t depth ) {
        r.killed = true;
        r.kill_depth = depth;
        r.depth_reached = depth;
        r.nodes = nodes.size();
        finish_witness( r, original, mutant, inputs, b );
        return r;
    };

    {
        dnode n;
        for ( const auto& eo : so.initial() )
        {
            n.orig.push_back( eo.state );
            for ( const auto& em : sm.initial() )
                if ( eo.output == em.output )
                    n.pairs.emplace_back( eo.state, em.state );
        }
        for ( const auto& em : sm.initial() )
            n.mut.push_back( em.state );
        sort_unique( n.pairs );
        sort_unique( n.orig );
        sort_unique( n.mut );
        if ( n.pairs.empty() )
            return kill( {}, 0 );
        intern( std::move( n ), {} );
    }

    bool cut = false;
    for ( std::size_t q = 0; q < nodes.size(); ++q )
    {
        std::size_t d = info[q].depth;
        r.depth_reached = std::max( r.depth_reached, d );
        r.max_frontier = std::max( r.max_frontier, nodes.size() - q );
        if ( bound && d >= *bound )
        {
            cut = true;
            continue;
        }
        for ( std::size_t i = 0; i < ins.size(); ++i )
        {
            dnode n;
            const auto cur = nodes[q];
            for ( auto [s, m] : cur.pairs )
            {
                const auto& es = so.successors( s, i );
                const auto& ms = sm.successors( m, i );
                for ( const auto& eo : es )
                    for ( const auto& em : ms )
                        if ( eo.output == em.output )
                            n.pairs.emplace_back( eo.state, em.state );
            }
            for ( int s : cur.orig )
                for ( const auto& eo : so.successors( s, i ) )
                    n.orig.push_back( eo.state );
            for ( int m : cur.mut )
                for ( const auto& em : sm.successors( m, i ) )
                    n.mut.push_back( em.state );
            sort_unique( n.pairs );
            sort_unique( n.orig );
            sort_unique( n.mut );
            if ( n.pairs.empty() )
            {
                if ( !n.orig.empty() && !n.mut.empty() )
                {
                    std::vector<valuation> inputs;
                    for ( auto k : input_path( info, q, i ) )
                        inputs.push_back( ins[k] );
                    return kill( std::move( inputs ), d + 1 );
                }
                continue;
            }
            intern( std::move( n ), { q, i, 0, d + 1 } );
        }
    }
    r.complete = !cut;
    r.nodes = nodes.size();
    return r;
}

search_result search_potential( const conditional_mutant& cm, std::optional<std::size_t> bound, budget* b )
{
    return search_potential( project( cm, false ), project( cm, true ), bound, b );
}

search_result search_definite( const conditional_mutant& cm, std::optional<std::size_t> bound, budget* b )
{
    return search_definite( project( cm, false ), project( cm, true ), bound, b );
}

kill_verdict decide_equivalence( const sts& original, const sts& mutant, std::uint64_t budget_limit )
{
    kill_verdict v;
    budget b( budget_limit );
    try
    {
        auto p = search_potential( original, mutant, std::nullopt, &b );
        v.nodes = p.nodes;
        v.depth_reached = p.depth_reached;
        if ( !p.killed )
        {
            v.status = verdict_status::equivalent;
            return v;
        }
        v.potential_witness = p.test;
        v.mutant_outputs = p.mutant_outputs;
        auto d = search_definite( original, mutant, std::nullopt, &b );
        v.nodes += d.nodes;
        v.depth_reached = std::max( v.depth_reached, d.depth_reached );
        if ( d.killed )
        {
            v.status = verdict_status::definitely_killable;
            v.definite_witness = d.test;
            v.witness = d.test;
            v.mutant_outputs = d.mutant_outputs;
        }
        else
        {
            v.status = verdict_status::potentially_only;
            v.witness = p.test;
        }
    }
    catch ( const budget_exhausted& e )
    {
        v.status = verdict_status::unknown;
        v.exhausted = true;
        v.note = e.what();
    }
    return v;
}

kill_verdict decide_equivalence( const conditional_mutant& cm, std::uint64_t budget_limit )
{
    return decide_equivalence( project( cm, false ), project( cm, true ), budget_limit );
}

kill_verdict bounded_verdict( const sts& original, const sts& mutant, std::size_t bound, std::uint64_t budget_limit )
{
    kill_verdict v;
    v.bound = bound;
    budget b( budget_limit );
    try
    {
        auto p = search_potential( original, mutant, bound, &b );
        auto d = search_definite( original, mutant, bound, &b );
        v.nodes = p.nodes + d.nodes;
        v.depth_reached = std::max( p.depth_reached, d.depth_reached );
        if ( p.killed )
            v.potential_witness = p.test;
        if ( d.killed )
        {
            v.status = verdict_status::definitely_killable;
            v.definite_witness = d.test;
            v.witness = d.test;
            v.mutant_outputs = d.mutant_outputs;
        }
        else if ( p.killed )
        {
            v.status = verdict_status::potentially_only;
            v.witness = p.test;
            v.mutant_outputs = p.mutant_outputs;
        }
        else if ( p.complete )
            v.status = verdict_status::equivalent;
        else
            v.status = verdict_status::unknown;
    }
    catch ( const budget_exhausted& e )
    {
        v.status = verdict_status::unknown;
        v.exhausted = true;
        v.note = e.what();
    }
    return v;
}

std::set<std::vector<valuation>> output_sequences( const sts& s, const std::vector<valuation>& inputs, budget* b )
{
    std::set<std::vector<valuation>> out;
    std::vector<valuation> cur;
    auto rec = [&]( auto&& self, const valuation& state, std::size_t pos ) -> void {
        if ( pos == inputs.size() )
        {
            out.insert( cur );
            return;
        }
        for ( const auto& st : s.successors( state, inputs[pos], b ) )
        {
            if ( b )
                b->charge();
            cur.push_back( st.output );
            self( self, st.state, pos + 1 );
            cur.pop_back();
        }
    };
    for ( const auto& st : s.initial_pairs( b ) )
    {
        cur.push_back( st.output );
        rec( rec, st.state, 0 );
        cur.pop_back();
    }
    return out;
}

std::optional<test_case> original_test( const sts& original, const std::vector<valuation>& inputs, budget* b )
{
    std::vector<valuation> cur;
    auto rec = [&]( auto&& self, const valuation& state, std::size_t pos ) -> bool {
        if ( pos == inputs.size() )
            return true;
        for ( const auto& st : original.successors( state, inputs[pos], b ) )
        {
            cur.push_back( st.output );
            if ( self( self, st.state, pos + 1 ) )
                return true;
            cur.pop_back();
        }
        return false;
    };
    for ( const auto& st : original.initial_pairs( b ) )
    {
        cur.push_back( st.output );
        if ( rec( rec, st.state, 0 ) )
            return test_case{ inputs, cur };
        cur.pop_back();
    }
    return std::nullopt;
}

bool test_kills( const sts& original, const sts& mutant, const test_case& t, kill_mode mode, budget* b )
{
    if ( t.outputs.size() != t.inputs.size() + 1 )
        throw model_error( "test has " + std::to_string( t.inputs.size() ) + " inputs but " +
                           std::to_string( t.outputs.size() ) + " outputs" );
    auto orig = output_sequences( original, t.inputs, b );
    if ( !orig.count( t.outputs ) )
        throw model_error( "not a test of the original model: no run produces its outputs" );
    auto mut = output_sequences( mutant, t.inputs, b );
    if ( mode == kill_mode::potential )
    {
        for ( const auto& m : mut )
            if ( !orig.count( m ) )
                return true;
        return false;
    }
    if ( mut.empty() )
        return false;
    for ( const auto& m : mut )
        if ( orig.count( m ) )
            return false;
    return true;
}

bool test_kills( const conditional_mutant& cm, const test_case& t, kill_mode mode, budget* b )
{
    return test_kills( project( cm, false ), project( cm, true ), t, mode, b );
}

oracle_verdict brute_force_oracle( const sts& original, const sts& mutant, std::size_t bound, budget* b )
{
    oracle_verdict v;
    using io = std::pair<std::vector<valuation>, std::vector<valuation>>;
    auto split = [&]( const trace& t ) {
        io r;
        for ( std::size_t j = 0; j < t.size(); ++j )
        {
            if ( j > 0 )
                r.first.push_back( *t[j].input );
            r.second.push_back( t[j].output );
        }
        return r;
    };
    for ( std::size_t k = 0; k <= bound; ++k )
    {
        std::set<io> orig_prefixes;
        std::map<std::vector<valuation>, std::set<std::vector<valuation>>> orig_by_input, mut_by_input;
        for ( const auto& t : enumerate_traces( original, k, b ) )
        {
            auto p = split( t );
            orig_by_input[p.first].insert( p.second );
            orig_prefixes.insert( std::move( p ) );
        }
        for ( const auto& t : enumerate_traces( mutant, k, b ) )
        {
            auto p = split( t );
            mut_by_input[p.first].insert( p.second );
            if ( !v.potential_depth && !orig_prefixes.count( p ) )
                v.potential_depth = k;
        }
        if ( !v.definite_depth )
            for ( const auto& [in, outs] : mut_by_input )
            {
                auto it = orig_by_input.find( in );
                if ( it == orig_by_input.end() )
                    continue;
                bool disjoint = std::none_of( outs.begin(), outs.end(),
                                              [&]( const auto& o ) { return it->second.count( o ) > 0; } );
                if ( disjoint )
                {
                    v.definite_depth = k;
                    break;
                }
            }
        if ( v.potential_depth && v.definite_depth )
            break;
    }
    return v;
}

score_report mutation_score( const model_ast& m, const std::vector<mutation>& mutants, const score_options& opts )
{
    score_report rep;
    rep.records.resize( mutants.size() );
    judge_fn judge = opts.judge;
    if ( !judge )
        judge = [&opts]( const conditional_mutant& cm ) {
            return bounded_verdict( project( cm, false ), project( cm, true ), opts.bound, opts.budget_limit );
        };

    auto one = [&]( std::size_t k ) {
        auto& rec = rep.records[k];
        rec.m = mutants[k];
        auto t0 = std::chrono::steady_clock::now();
        try
        {
            auto cm = build_conditional_mutant( m, mutants[k] );
            rec.verdict = judge( cm );
            rec.budget_event = rec.verdict.exhausted;
        }
        catch ( const budget_exhausted& e )
        {
            rec.verdict.status = verdict_status::unknown;
            rec.verdict.exhausted = true;
            rec.budget_event = true;
            rec.message = e.what();
        }
        catch ( const std::exception& e )
        {
            rec.error = true;
            rec.message = e.what();
        }
        rec.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - t0 ).count();
    };

    auto w0 = std::chrono::steady_clock::now();
    if ( opts.workers <= 1 )
    {
        for ( std::size_t k = 0; k < mutants.size(); ++k )
            one( k );
    }
    else
    {
        const auto n = static_cast<std::int64_t>( mutants.size() );
#pragma omp parallel for schedule( dynamic, 1 ) num_threads( opts.workers )
        for ( std::int64_t k = 0; k < n; ++k )
            one( static_cast<std::size_t>( k ) );
    }
    summarize( rep, opts.suite_mode );
    rep.aggregate.wall_time = std::chrono::duration<double>( std::chrono::steady_clock::now() - w0 ).count();
    return rep;
}

void summarize( score_report& r, kill_mode suite_mode )
{
    auto& a = r.aggregate;
    a = {};
    a.total = r.records.size();
    std::map<test_case, std::size_t> seen;
    r.suite.clear();
    for ( const auto& rec : r.records )
    {
        a.total_runtime += rec.seconds;
        if ( rec.budget_event )
            ++a.resource_limit;
        if ( rec.error )
        {
            ++a.errors;
            continue;
        }
        switch ( rec.verdict.status )
        {
        case verdict_status::definitely_killable:
            ++a.definite;
            break;
        case verdict_status::potentially_only:
            ++a.potential_only;
            break;
        case verdict_status::equivalent:
            ++a.equivalent;
            continue;
        case verdict_status::unknown:
            ++a.unknown;
            continue;
        }
        const auto& v = rec.verdict;
        std::optional<test_case> t;
        kill_mode used = suite_mode;
        if ( suite_mode == kill_mode::potential && v.potential_witness )
            t = v.potential_witness;
        else if ( v.definite_witness )
        {
            t = v.definite_witness;
            used = kill_mode::definite;
        }
        else if ( v.potential_witness )
        {
            t = v.potential_witness;
            used = kill_mode::potential;
        }
        else
            t = v.witness;
        if ( !t )
            continue;
        auto it = seen.find( *t );
        if ( it != seen.end() )
        {
            r.suite[it->second].also_kills.push_back( rec.m.id );
            continue;
        }
        seen.emplace( *t, r.suite.size() );
        r.suite.push_back( { *t, used, rec.m.id, {} } );
    }
    if ( a.total > 0 )
    {
        double n = static_cast<double>( a.total );
        a.definite_pct = 100.0 * a.definite / n;
        a.potential_only_pct = 100.0 * a.potential_only / n;
        a.equivalent_pct = 100.0 * a.equivalent / n;
        a.unknown_pct = 100.0 * a.unknown / n;
        a.error_pct = 100.0 * a.errors / n;
        a.mutation_score = 100.0 * ( a.definite + a.potential_only ) / n;
        a.avg_runtime = a.total_runtime / n;
    }
    a.tests = r.suite.size();
    std::size_t len = 0;
    for ( const auto& s : r.suite )
    {
        len += s.test.length();
        a.max_test_length = std::max( a.max_test_length, s.test.length() );
    }
    if ( !r.suite.empty() )
        a.avg_test_length = static_cast<double>( len ) / r.suite.size();
}

} // namespace mutkill
