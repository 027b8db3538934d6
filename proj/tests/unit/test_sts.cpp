#include "fixtures.hpp"
#include "mutkill/trace.hpp"

#include <doctest.h>

#include <functional>

using namespace mutkill;
using mutkill::testing::val;

namespace
{

signature_ptr bev_sig()
{
    return std::make_shared<const signature>(
        std::vector<variable>{ { "in", var_domain::enumeration( { "eps", "req", "fill" } ) } },
        std::vector<variable>{ { "out", var_domain::enumeration( { "eps", "coff", "tea" } ) } },
        std::vector<variable>{ { "wtr", var_domain::integer( 0, 2 ) } } );
}

} // namespace

TEST_CASE( "eval_pred basics" )
{
    auto sig = bev_sig();
    environment env( *sig );
    env.bind_group( var_role::state, val( *sig, var_role::state, { "2" } ) );
    CHECK( holds( parse_predicate( "wtr > 0", *sig ), env ) );

    // hand-written transition disjunct with the transition's output unprimed
    env.bind_group( var_role::input, val( *sig, var_role::input, { "req" } ) );
    env.bind_group( var_role::output, val( *sig, var_role::output, { "coff" } ) );
    env.bind_group( var_role::state, val( *sig, var_role::state, { "1" } ), true );
    CHECK( holds( parse_predicate( "wtr > 0 & in = req & out = coff & wtr' = wtr - 1", *sig ), env ) );

    auto bsig = std::make_shared<const signature>( std::vector<variable>{}, std::vector<variable>{},
                                                   std::vector<variable>{ { "x", var_domain::boolean() } } );
    environment benv( *bsig );
    benv.bind( bsig->state_slot( 0 ), 1 );
    benv.bind( bsig->next_slot( 0 ), 0 );
    CHECK_FALSE( holds( parse_predicate( "x <-> x'", *bsig ), benv ) );
}

TEST_CASE( "eval_pred errors" )
{
    auto sig = bev_sig();
    environment env( *sig );
    CHECK_THROWS_AS( (void)evaluate( parse_predicate( "wtr > 0", *sig ), env ), eval_error );
    env.bind_group( var_role::input, val( *sig, var_role::input, { "req" } ) );
    // enum arithmetic is rejected when the predicate is built
    CHECK_THROWS_AS( (void)parse_predicate( "in + 1 = 2", *sig ), model_error );
    // hand-built ill-typed node fails at evaluation
    auto bad = pred::binary( pred_op::add, pred::var( sig->input_slot( 0 ) ), pred::constant( value::of_int( 1 ) ) );
    CHECK_THROWS_AS( (void)evaluate( bad, env ), eval_error );
    // intermediate values may leave the domain
    env.bind_group( var_role::state, val( *sig, var_role::state, { "0" } ) );
    CHECK( holds( parse_predicate( "wtr - 5 = -5", *sig ), env ) );
}

TEST_CASE( "initial pairs" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    auto init = s.initial_pairs();
    REQUIRE( init.size() == 1 );
    CHECK( init[0].output == val( s.sig(), var_role::output, { "eps" } ) );
    CHECK( init[0].state == val( s.sig(), var_role::state, { "2" } ) );

    auto sig = std::make_shared<const signature>( std::vector<variable>{},
                                                  std::vector<variable>{ { "o", var_domain::enumeration( { "eps", "a" } ) } },
                                                  std::vector<variable>{ { "x", var_domain::boolean() } } );
    sts full( sig, pred::truth( true ), pred::truth( true ) );
    CHECK( full.initial_pairs().size() == 4 );
    sts none( sig, pred::truth( false ), pred::truth( true ) );
    CHECK_THROWS_AS( (void)none.initial_pairs(), model_error );
}

TEST_CASE( "successors of the beverage machine" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    const auto& sig = s.sig();
    auto succ = s.successors( val( sig, var_role::state, { "2" } ), val( sig, var_role::input, { "req" } ) );
    REQUIRE( succ.size() == 2 );
    CHECK( succ[0] == step{ val( sig, var_role::output, { "coff" } ), val( sig, var_role::state, { "1" } ) } );
    CHECK( succ[1] == step{ val( sig, var_role::output, { "tea" } ), val( sig, var_role::state, { "1" } ) } );

    succ = s.successors( val( sig, var_role::state, { "0" } ), val( sig, var_role::input, { "req" } ) );
    REQUIRE( succ.size() == 1 );
    CHECK( succ[0] == step{ val( sig, var_role::output, { "eps" } ), val( sig, var_role::state, { "0" } ) } );
}

TEST_CASE( "successors agree with exhaustive evaluation" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    const auto& sig = s.sig();
    environment env( sig );
    for ( const auto& x : s.all_valuations( var_role::state ) )
        for ( const auto& i : s.all_valuations( var_role::input ) )
        {
            auto succ = s.successors( x, i );
            std::vector<step> brute;
            for ( const auto& o : s.all_valuations( var_role::output ) )
                for ( const auto& x2 : s.all_valuations( var_role::state ) )
                {
                    env.clear();
                    env.bind_group( var_role::state, x );
                    env.bind_group( var_role::input, i );
                    env.bind_group( var_role::output, o );
                    env.bind_group( var_role::state, x2, true );
                    if ( holds( s.trans(), env ) )
                        brute.push_back( { o, x2 } );
                }
            CHECK( succ == brute );
        }
}

TEST_CASE( "elaborated model matches the hand-written relation" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    const auto& sig = s.sig();
    auto delta = parse_predicate( "wtr > 0 & in = req & out = coff & wtr' = wtr - 1 |"
                                  "wtr > 0 & in = req & out = tea & wtr' = wtr - 1 |"
                                  "in = fill & out = eps & wtr' = 2 |"
                                  "in = eps & out = eps & wtr' = wtr",
                                  sig );
    sts hand( s.sig_ptr(), s.init(), delta );
    for ( const char* w : { "1", "2" } )
        for ( const auto& i : s.all_valuations( var_role::input ) )
            CHECK( s.successors( val( sig, var_role::state, { w } ), i ) ==
                   hand.successors( val( sig, var_role::state, { w } ), i ) );
}

TEST_CASE( "trace enumeration" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    const auto& sig = s.sig();
    auto t0 = enumerate_traces( s, 0 );
    REQUIRE( t0.size() == 1 );
    CHECK_FALSE( t0[0][0].input.has_value() );
    CHECK( t0[0][0].output == val( sig, var_role::output, { "eps" } ) );
    CHECK( t0[0][0].state == val( sig, var_role::state, { "2" } ) );

    // independent count by direct recursion
    std::function<std::size_t( const valuation&, std::size_t )> count = [&]( const valuation& x, std::size_t d ) {
        if ( d == 0 )
            return std::size_t{ 1 };
        std::size_t n = 0;
        for ( const auto& i : s.all_valuations( var_role::input ) )
            for ( const auto& st : s.successors( x, i ) )
                n += count( st.state, d - 1 );
        return n;
    };
    for ( std::size_t d = 0; d <= 3; ++d )
        CHECK( enumerate_traces( s, d ).size() == count( val( sig, var_role::state, { "2" } ), d ) );

    // prefixes of deeper traces are exactly the shallower traces
    auto t3 = enumerate_traces( s, 3 );
    auto t2 = enumerate_traces( s, 2 );
    std::set<trace> cut;
    for ( const auto& t : t3 )
        cut.insert( trace( t.begin(), t.begin() + 3 ) );
    CHECK( cut == std::set<trace>( t2.begin(), t2.end() ) );

    budget tiny( 5 );
    CHECK_THROWS_AS( (void)enumerate_traces( s, 3, &tiny ), budget_exhausted );
}

TEST_CASE( "deterministic trace count" )
{
    auto m = parse_model( "input a : bool; b : enum {x, y, z};\n"
                          "output o : enum {eps, p};\n"
                          "state c : int[0..3];\n"
                          "init o := eps; c := 0;\n"
                          "next o := if (a) : p else : eps; c := if (c < 3) : c + 1 else : 0;\n" );
    auto s = elaborate( m );
    for ( std::size_t k = 0; k <= 3; ++k )
    {
        std::size_t expect = 1;
        for ( std::size_t j = 0; j < k; ++j )
            expect *= 6;
        CHECK( enumerate_traces( s, k ).size() == expect );
    }
}

TEST_CASE( "restrict and AP traces" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    const auto& sig = s.sig();
    trace p = { { std::nullopt, val( sig, var_role::output, { "eps" } ), val( sig, var_role::state, { "2" } ) },
                { val( sig, var_role::input, { "eps" } ), val( sig, var_role::output, { "eps" } ),
                  val( sig, var_role::state, { "2" } ) },
                { val( sig, var_role::input, { "req" } ), val( sig, var_role::output, { "coff" } ),
                  val( sig, var_role::state, { "1" } ) },
                { val( sig, var_role::input, { "req" } ), val( sig, var_role::output, { "tea" } ),
                  val( sig, var_role::state, { "0" } ) } };

    auto r = restrict( sig, p, { "in" } );
    std::vector<std::vector<std::int32_t>> expect_in = { { -1 }, { 0 }, { 1 }, { 1 } };
    CHECK( r.steps == expect_in );

    auto all = restrict( sig, p, { "in", "out", "wtr" } );
    for ( std::size_t j = 0; j < p.size(); ++j )
    {
        CHECK( all.steps[j][1] == p[j].output.idx[0] );
        CHECK( all.steps[j][2] == p[j].state.idx[0] );
    }
    auto none = restrict( sig, p, {} );
    CHECK( none.steps.size() == p.size() );
    for ( const auto& row : none.steps )
        CHECK( row.empty() );

    ap_labeling labels = { { "[in=req]", parse_predicate( "in = req", sig ) },
                           { "[out=eps]", parse_predicate( "out = eps", sig ) },
                           { "[out=coff]", parse_predicate( "out = coff", sig ) },
                           { "[out=tea]", parse_predicate( "out = tea", sig ) },
                           { "[in=eps]", parse_predicate( "in = eps", sig ) },
                           { "[wtr>0]", parse_predicate( "wtr > 0", sig ) },
                           { "[wtr=0]", parse_predicate( "wtr = 0", sig ) } };
    auto aps = ap_trace( sig, p, labels );
    using S = std::set<std::string>;
    CHECK( aps[0] == S{ "[out=eps]", "[wtr>0]" } );
    CHECK( aps[1] == S{ "[in=eps]", "[out=eps]", "[wtr>0]" } );
    CHECK( aps[2] == S{ "[in=req]", "[out=coff]", "[wtr>0]" } );
    CHECK( aps[3] == S{ "[in=req]", "[out=tea]", "[wtr=0]" } );

    for ( const auto& a : ap_trace( sig, p, {} ) )
        CHECK( a.empty() );

    auto def = default_labeling( sig );
    auto dap = ap_trace( sig, p, def );
    for ( std::size_t j = 1; j < p.size(); ++j )
        CHECK( dap[j].size() == 3 );
    CHECK( dap[0].size() == 2 );
}

TEST_CASE( "default labeling is injective" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    auto def = default_labeling( s.sig() );
    std::map<std::uint64_t, trace_step> seen;
    for ( const auto& t : enumerate_traces( s, 3 ) )
    {
        auto letters = ap_letters( s.sig(), t, def );
        for ( std::size_t j = 0; j < t.size(); ++j )
        {
            auto [it, fresh] = seen.emplace( letters[j], t[j] );
            CHECK( it->second == t[j] );
        }
    }
}

TEST_CASE( "validate" )
{
    auto s = elaborate( mutkill::testing::beverage_ast() );
    auto rep = validate( s, 6 );
    CHECK_FALSE( rep.deterministic );
    CHECK( rep.total );
    CHECK_FALSE( rep.witnesses.empty() );

    auto sig = std::make_shared<const signature>( std::vector<variable>{}, std::vector<variable>{},
                                                  std::vector<variable>{ { "x", var_domain::boolean() } } );
    auto bad = validate( sts( sig, pred::truth( false ), pred::truth( true ) ), 0 );
    CHECK_FALSE( bad.total );

    // dead end: guarded decrement below the range
    auto m = parse_model( "input i : bool; output o : enum {eps}; state c : int[0..1];\n"
                          "init o := eps; c := 1; next o := eps; c := c - 1;\n" );
    auto dead = validate( elaborate( m ) );
    CHECK_FALSE( dead.total );
    CHECK( dead.deterministic );
}
