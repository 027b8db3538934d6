#include "fixtures.hpp"

#include "mutkill/killability.hpp"
#include "mutkill/mutation.hpp"

#include <doctest.h>

using namespace mutkill;
using mutkill::testing::beverage_ast;
using mutkill::testing::beverage_source;
using mutkill::testing::val;

namespace
{

std::size_t offset_after( const std::string& src, const std::string& needle )
{
    auto p = src.find( needle );
    REQUIRE( p != std::string::npos );
    return p + needle.size() - 1;
}

mutation find_mutation( const model_ast& m, const std::string& id )
{
    for ( const auto& mu : enumerate_mutations( m ) )
        if ( mu.id == id )
            return mu;
    FAIL( "no mutation " << id );
    return {};
}

struct bev
{
    model_ast ast = beverage_ast();
    std::string src = beverage_source();
    sts original = elaborate( ast );

    std::vector<valuation> inputs( std::initializer_list<std::string> xs ) const
    {
        std::vector<valuation> r;
        for ( const auto& x : xs )
            r.push_back( val( original.sig(), var_role::input, { x } ) );
        return r;
    }
    std::vector<valuation> outputs( std::initializer_list<std::string> xs ) const
    {
        std::vector<valuation> r;
        for ( const auto& x : xs )
            r.push_back( val( original.sig(), var_role::output, { x } ) );
        return r;
    }
    conditional_mutant fill_one() const
    {
        return build_conditional_mutant(
            ast, find_mutation( ast, "ReplaceIntConstant-one@" + std::to_string( offset_after( src, "(in = fill) : 2" ) ) ) );
    }
};

} // namespace

TEST_CASE( "refill to one is definitely killable" )
{
    bev b;
    auto cm = b.fill_one();
    auto v = bounded_verdict( project( cm, false ), project( cm, true ), 7 );
    CHECK( v.status == verdict_status::definitely_killable );
    REQUIRE( v.witness );
    CHECK( v.witness->inputs == b.inputs( { "fill", "req", "req" } ) );
    CHECK( v.witness->length() == 3 );
    // original still serves a drink at the end, the mutant has run dry
    auto eps = b.outputs( { "eps" } ).front();
    CHECK( v.witness->outputs.back() != eps );
    CHECK( v.mutant_outputs.back() == eps );
    CHECK( test_kills( cm, *v.witness, kill_mode::definite ) );

    auto full = decide_equivalence( cm );
    CHECK( full.status == verdict_status::definitely_killable );
    CHECK( full.witness == v.witness );

    // too short a bound cannot find it yet
    auto short_bound = bounded_verdict( project( cm, false ), project( cm, true ), 2 );
    CHECK( short_bound.status == verdict_status::unknown );
    CHECK( short_bound.bound == 2u );
}

TEST_CASE( "hand-written test kills the refill mutant" )
{
    bev b;
    auto cm = b.fill_one();
    test_case t{ b.inputs( { "eps", "req", "req", "fill", "req", "req" } ),
                 b.outputs( { "eps", "eps", "coff", "tea", "eps", "tea", "tea" } ) };
    CHECK( test_kills( cm, t, kill_mode::definite ) );
    CHECK( test_kills( cm, t, kill_mode::potential ) );

    test_case prefix{ b.inputs( { "eps" } ), b.outputs( { "eps", "eps" } ) };
    CHECK( !test_kills( cm, prefix, kill_mode::definite ) );
    CHECK( !test_kills( cm, prefix, kill_mode::potential ) );

    // outputs the original cannot produce do not form a test
    test_case bogus{ b.inputs( { "req" } ), b.outputs( { "eps", "eps" } ) };
    CHECK_THROWS_AS( (void)test_kills( cm, bogus, kill_mode::definite ), model_error );
    test_case ragged{ b.inputs( { "req" } ), b.outputs( { "eps" } ) };
    CHECK_THROWS_AS( (void)test_kills( cm, ragged, kill_mode::definite ), model_error );
}

TEST_CASE( "refill to one or two is only potentially killable" )
{
    bev b;
    auto mu = custom_mutation( b.ast, offset_after( b.src, "(in = fill) : 2" ), "{1, 2}" );
    auto cm = build_conditional_mutant( b.ast, mu );
    auto v = decide_equivalence( cm );
    CHECK( v.status == verdict_status::potentially_only );
    REQUIRE( v.witness );
    CHECK( test_kills( cm, *v.witness, kill_mode::potential ) );
    CHECK( !test_kills( cm, *v.witness, kill_mode::definite ) );
    CHECK( v.witness->inputs == b.inputs( { "fill", "req", "req" } ) );

    auto bv = bounded_verdict( project( cm, false ), project( cm, true ), 7 );
    CHECK( bv.status == verdict_status::potentially_only );
}

TEST_CASE( "coffee-only machine is equivalent" )
{
    bev b;
    auto mu = custom_mutation( b.ast, b.src.find( "{coff, tea}" ), "coff" );
    auto cm = build_conditional_mutant( b.ast, mu );
    CHECK( decide_equivalence( cm ).status == verdict_status::equivalent );
    auto bv = bounded_verdict( project( cm, false ), project( cm, true ), 7 );
    CHECK( bv.status == verdict_status::equivalent );
    CHECK( !bv.witness );

    // the reverse direction is not: the original can serve tea
    auto r = decide_equivalence( project( cm, true ), project( cm, false ) );
    CHECK( r.status == verdict_status::potentially_only );
}

TEST_CASE( "empty initial tank is killed by the first request" )
{
    bev b;
    auto cm = build_conditional_mutant(
        b.ast, find_mutation( b.ast, "ReplaceIntConstant-zero@" + std::to_string( offset_after( b.src, "wtr := 2" ) ) ) );
    auto v = decide_equivalence( cm );
    CHECK( v.status == verdict_status::definitely_killable );
    REQUIRE( v.witness );
    CHECK( v.witness->inputs == b.inputs( { "req" } ) );
}

TEST_CASE( "identity mutants are equivalent" )
{
    bev b;
    auto mu = custom_mutation( b.ast, offset_after( b.src, "(in = fill) : 2" ), "2" );
    auto cm = build_conditional_mutant( b.ast, mu );
    CHECK( decide_equivalence( cm ).status == verdict_status::equivalent );
    CHECK( decide_equivalence( b.original, b.original ).status == verdict_status::equivalent );
}

TEST_CASE( "searches agree with brute force on the beverage catalogue" )
{
    bev b;
    const std::size_t bound = 5;
    for ( const auto& mu : enumerate_mutations( b.ast ) )
    {
        CAPTURE( mu.id );
        std::optional<conditional_mutant> cm;
        try
        {
            cm.emplace( build_conditional_mutant( b.ast, mu ) );
        }
        catch ( const model_error& )
        {
            continue;
        }
        auto o = project( *cm, false );
        auto m = project( *cm, true );
        auto oracle = brute_force_oracle( o, m, bound );
        auto p = search_potential( o, m, bound );
        auto d = search_definite( o, m, bound );
        CHECK( p.killed == oracle.potential_depth.has_value() );
        CHECK( d.killed == oracle.definite_depth.has_value() );
        if ( p.killed && oracle.potential_depth )
        {
            CHECK( p.kill_depth == *oracle.potential_depth );
            REQUIRE( p.test );
            CHECK( test_kills( o, m, *p.test, kill_mode::potential ) );
        }
        if ( d.killed && oracle.definite_depth )
        {
            CHECK( d.kill_depth == *oracle.definite_depth );
            REQUIRE( d.test );
            CHECK( test_kills( o, m, *d.test, kill_mode::definite ) );
        }
        // a definite kill is also a potential one, never earlier
        if ( d.killed )
            CHECK( ( p.killed && p.kill_depth <= d.kill_depth ) );
    }
}

TEST_CASE( "budget exhaustion yields unknown" )
{
    bev b;
    auto cm = b.fill_one();
    auto v = bounded_verdict( project( cm, false ), project( cm, true ), 7, 20 );
    CHECK( v.status == verdict_status::unknown );
    CHECK( v.exhausted );
    auto f = decide_equivalence( cm, 20 );
    CHECK( f.status == verdict_status::unknown );
}

TEST_CASE( "output sequences" )
{
    bev b;
    auto seqs = output_sequences( b.original, b.inputs( { "req", "req", "req" } ) );
    CHECK( seqs.size() == 4 );
    for ( const auto& s : seqs )
    {
        CHECK( s.size() == 4 );
        CHECK( s.back() == b.outputs( { "eps" } ).front() );
    }
    auto t = original_test( b.original, b.inputs( { "req" } ) );
    REQUIRE( t );
    CHECK( t->outputs == b.outputs( { "eps", "coff" } ) );
}

TEST_CASE( "mutation score on the beverage machine" )
{
    bev b;
    auto ms = enumerate_mutations( b.ast );
    score_options opts;
    opts.bound = 7;
    auto serial = mutation_score( b.ast, ms, opts );
    const auto& a = serial.aggregate;
    CHECK( a.total == ms.size() );
    CHECK( a.errors == 2 );  // wtr := 3 twice
    CHECK( a.definite + a.potential_only + a.equivalent + a.unknown + a.errors == a.total );
    REQUIRE( a.mutation_score );
    CHECK( *a.mutation_score == doctest::Approx( 100.0 * ( a.definite + a.potential_only ) / a.total ) );
    CHECK( a.definite_pct + a.potential_only_pct + a.equivalent_pct + a.unknown_pct + a.error_pct ==
           doctest::Approx( 100.0 ) );

    // every killable mutant is covered by some suite test
    std::set<std::string> covered;
    for ( const auto& e : serial.suite )
    {
        covered.insert( e.mutant_id );
        covered.insert( e.also_kills.begin(), e.also_kills.end() );
        CHECK( a.max_test_length >= e.test.length() );
    }
    for ( const auto& r : serial.records )
        if ( !r.error && ( r.verdict.status == verdict_status::definitely_killable ||
                           r.verdict.status == verdict_status::potentially_only ) )
            CHECK( covered.count( r.m.id ) );

    // tests are checked against the mutants they claim
    for ( const auto& e : serial.suite )
    {
        std::vector<std::string> all = e.also_kills;
        all.push_back( e.mutant_id );
        for ( const auto& id : all )
        {
            auto cm = build_conditional_mutant( b.ast, find_mutation( b.ast, id ) );
            CHECK( test_kills( cm, e.test, e.mode ) );
        }
    }

    opts.workers = 4;
    auto par = mutation_score( b.ast, ms, opts );
    REQUIRE( par.records.size() == serial.records.size() );
    for ( std::size_t k = 0; k < par.records.size(); ++k )
    {
        CHECK( par.records[k].m.id == serial.records[k].m.id );
        CHECK( par.records[k].verdict.status == serial.records[k].verdict.status );
        CHECK( par.records[k].verdict.witness == serial.records[k].verdict.witness );
    }
    CHECK( par.suite.size() == serial.suite.size() );

    opts.workers = 1;
    opts.judge = []( const conditional_mutant& cm ) { return decide_equivalence( cm ); };
    auto exact = mutation_score( b.ast, ms, opts );
    CHECK( exact.aggregate.unknown == 0 );
}
