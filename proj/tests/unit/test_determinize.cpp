#include "fixtures.hpp"

#include "mutkill/determinize.hpp"
#include "mutkill/hyper.hpp"
#include "mutkill/trace.hpp"

#include <doctest.h>

#include <set>

using namespace mutkill;
using mutkill::testing::beverage_ast;
using mutkill::testing::beverage_source;
using mutkill::testing::val;

namespace
{

std::size_t fill_offset( const std::string& src )
{
    auto needle = std::string( "(in = fill) : 2" );
    return src.find( needle ) + needle.size() - 1;
}

conditional_mutant fill_cm( const std::string& replacement )
{
    auto m = beverage_ast();
    return build_conditional_mutant( m, custom_mutation( m, fill_offset( beverage_source() ), replacement ) );
}

conditional_mutant coffee_only()
{
    auto m = beverage_ast();
    return build_conditional_mutant( m, custom_mutation( m, beverage_source().find( "{coff, tea}" ), "coff" ) );
}

// beverage with coffee only; deterministic
std::string plain_source()
{
    auto src = beverage_source();
    src.replace( src.find( "{coff, tea}" ), 11, "coff" );
    return src;
}

model_ast plain_machine()
{
    return parse_model( plain_source() );
}

std::string next_rhs( const model_ast& m, const std::string& target )
{
    return render( *m.find_assignment( section_kind::next, target )->rhs );
}

} // namespace

TEST_CASE( "explicit determinization of the fill mutant" )
{
    auto cm = fill_cm( "1" );
    auto d = determinize_explicit( cm.system );
    const auto& ds = d.system.sig();
    CHECK( d.nd == "nd" );
    CHECK( d.xtau == "xtau" );
    CHECK( d.degree == 2 );
    CHECK( ds.inputs().size() == 2 );
    CHECK( ds.states().size() == 3 );
    CHECK( ds.outputs() == cm.system.sig().outputs() );

    // one initial pair per mut value, before the first real step
    auto init = d.system.initial_pairs();
    REQUIRE( init.size() == 2 );
    for ( const auto& s : init )
    {
        CHECK( s.output == val( ds, var_role::output, { "eps" } ) );
        CHECK( s.state.idx[*ds.find( var_role::state, "xtau" )] == 1 );
    }
    auto tau = init[0].state;
    CHECK( tau == val( ds, var_role::state, { "false", "0", "true" } ) );
    for ( std::string in : { "eps", "req", "fill" } )
        for ( std::string k : { "0", "1" } )
        {
            auto succ = d.system.successors( tau, val( ds, var_role::input, { in, k } ) );
            REQUIRE( succ.size() == 1 );
            CHECK( succ[0].output == val( ds, var_role::output, { "eps" } ) );
            CHECK( succ[0].state == val( ds, var_role::state, { "false", "2", "false" } ) );
        }

    auto full = val( ds, var_role::state, { "false", "2", "false" } );
    auto at = [&]( const valuation& x, std::string in, std::string k ) {
        auto succ = d.system.successors( x, val( ds, var_role::input, { in, k } ) );
        REQUIRE( succ.size() == 1 );
        return succ[0];
    };
    CHECK( at( full, "req", "0" ) ==
           step{ val( ds, var_role::output, { "coff" } ), val( ds, var_role::state, { "false", "1", "false" } ) } );
    CHECK( at( full, "req", "1" ) ==
           step{ val( ds, var_role::output, { "tea" } ), val( ds, var_role::state, { "false", "1", "false" } ) } );
    // deterministic point: nd ignored
    CHECK( at( full, "fill", "0" ) == at( full, "fill", "1" ) );
    // mutant side after a fill
    auto mfull = val( ds, var_role::state, { "true", "2", "false" } );
    CHECK( at( mfull, "fill", "1" ).state == val( ds, var_role::state, { "true", "1", "false" } ) );

    // one initial-free branching point per (state, input) with water left
    CHECK( d.points.size() == 2 );
    for ( const auto& p : d.points )
    {
        REQUIRE( p.state );
        CHECK( p.branches.size() == 2 );
    }

    auto v = validate( d.system, std::nullopt, std::string( "mut" ) );
    CHECK( v.deterministic );
    CHECK( !validate( cm.system, std::nullopt, std::string( "mut" ) ).deterministic );

    auto r = verify_transform( cm.system, d, 5 );
    CHECK( r.deterministic );
    CHECK( r.inclusion );
    CHECK( r.prefixes_checked > 100 );
    CHECK( r.d_killable );
    CHECK( r.cm_status == verdict_status::definitely_killable );
    CHECK( r.sound );
    CHECK( r.ok() );
    CHECK( r.problems.empty() );
}

TEST_CASE( "phi1 on the determinized fill mutant gives a definitely killing test" )
{
    auto cm = fill_cm( "1" );
    auto d = determinize_explicit( cm.system );
    const auto& ds = d.system.sig();
    auto f = build_phi( 1, value_aps( ds, var_role::input ), value_aps( ds, var_role::output ) );
    CHECK( !eval_bounded( d.system, f, 3 ).holds );
    auto v = eval_bounded( d.system, f, 7 );
    REQUIRE( v.holds );
    REQUIRE( v.witness );

    auto w = undo_shift( cm.system, d, *v.witness );
    REQUIRE( w.size() >= 4 );
    CHECK( !w[0].input );
    test_case t;
    t.outputs.push_back( w[0].output );
    for ( std::size_t j = 1; j < w.size(); ++j )
    {
        t.inputs.push_back( *w[j].input );
        t.outputs.push_back( w[j].output );
    }
    auto orig = project( cm, false );
    auto mutant = project( cm, true );
    CHECK( test_kills( orig, mutant, t, kill_mode::definite ) );
}

TEST_CASE( "potential-only mutant survives determinization" )
{
    auto cm = fill_cm( "{1, 2}" );
    auto d = determinize_explicit( cm.system );
    CHECK( d.degree == 2 );
    auto r = verify_transform( cm.system, d, 4 );
    CHECK( r.ok() );
    CHECK( r.cm_status == verdict_status::potentially_only );
    CHECK( r.d_killable );
}

TEST_CASE( "determinized coffee-only mutant is killable though the mutant is equivalent" )
{
    auto cm = coffee_only();
    auto d = determinize_explicit( cm.system );
    auto r = verify_transform( cm.system, d, 4 );
    CHECK( r.cm_status == verdict_status::equivalent );
    // the original serves tea where the mutant can only idle
    CHECK( r.d_killable );
    CHECK( r.sound );
    CHECK( r.ok() );

    const auto& ds = d.system.sig();
    auto full_m = val( ds, var_role::state, { "true", "2", "false" } );
    auto succ = d.system.successors( full_m, val( ds, var_role::input, { "req", "1" } ) );
    REQUIRE( succ.size() == 1 );
    CHECK( succ[0] == step{ val( ds, var_role::output, { "eps" } ), full_m } );
}

TEST_CASE( "deterministic conditional mutant: D replays it from the second position" )
{
    auto m = plain_machine();
    auto mu = custom_mutation( m, fill_offset( plain_source() ), "1" );
    auto cm = build_conditional_mutant( m, mu );
    auto d = determinize_explicit( cm.system );
    CHECK( d.degree == 1 );
    CHECK( d.points.empty() );

    std::set<trace> expect;
    for ( const auto& t : enumerate_traces( cm.system, 4 ) )
        expect.insert( t );
    std::set<trace> got;
    for ( const auto& t : enumerate_traces( d.system, 5 ) )
        got.insert( undo_shift( cm.system, d, t ) );
    CHECK( got == expect );

    auto r = verify_transform( cm.system, d, 4 );
    CHECK( r.ok() );
    CHECK( r.d_killable );
}

TEST_CASE( "equivalent deterministic mutant stays unkillable" )
{
    auto m = plain_machine();
    auto cm = build_conditional_mutant( m, custom_mutation( m, fill_offset( plain_source() ), "2" ) );
    auto d = determinize_explicit( cm.system );
    auto r = verify_transform( cm.system, d, 4 );
    CHECK( !r.d_killable );
    CHECK( r.cm_status == verdict_status::equivalent );
    CHECK( r.ok() );
}

TEST_CASE( "explicit determinization needs mut" )
{
    CHECK_THROWS_AS( (void)determinize_explicit( elaborate( beverage_ast() ) ), model_error );
}

TEST_CASE( "syntactic determinization of the beverage machine" )
{
    auto m = beverage_ast();
    CHECK( set_choice_degree( m ) == 2 );
    auto d = determinize_syntactic( m );
    auto nd = d.declarations( section_kind::input );
    REQUIRE( nd.size() == 2 );
    CHECK( nd[1]->name == "nd" );
    CHECK( nd[1]->domain == var_domain::integer( 0, 1 ) );
    CHECK( next_rhs( d, "out" ) == "if (in = req & wtr > 0 & nd = 0) : coff elif (in = req & wtr > 0) : tea else : eps" );
    CHECK( next_rhs( d, "wtr" ) == next_rhs( m, "wtr" ) );

    // round trip through text
    auto again = parse_model( render( d ) );
    CHECK( same_structure( again, d ) );

    auto s = elaborate( d );
    auto v = validate( s );
    CHECK( v.deterministic );
    CHECK( v.total );
    CHECK( !validate( elaborate( m ) ).deterministic );

    // nd picks the drink
    auto full = val( s.sig(), var_role::state, { "2" } );
    auto coff = s.successors( full, val( s.sig(), var_role::input, { "req", "0" } ) );
    auto tea = s.successors( full, val( s.sig(), var_role::input, { "req", "1" } ) );
    REQUIRE( coff.size() == 1 );
    REQUIRE( tea.size() == 1 );
    CHECK( coff[0].output == val( s.sig(), var_role::output, { "coff" } ) );
    CHECK( tea[0].output == val( s.sig(), var_role::output, { "tea" } ) );
}

TEST_CASE( "syntactic determinization of conditional mutants" )
{
    auto cm = fill_cm( "{1, 2}" );
    auto d = determinize_syntactic( cm.ast );
    CHECK( next_rhs( d, "wtr" ) ==
           "if (in = fill & mut & nd = 0) : 1 elif (in = fill & mut) : 2 elif (in = fill) : 2 elif (in = req & wtr > 0) : wtr - 1 else : wtr" );
    auto s = elaborate( d );
    CHECK( validate( s, std::nullopt, std::string( "mut" ) ).deterministic );
    CHECK( !validate( s ).deterministic );  // mut itself still chosen at init

    auto pm = plain_machine();
    auto plain = build_conditional_mutant( pm, custom_mutation( pm, fill_offset( plain_source() ), "1" ) );
    auto pd = determinize_syntactic( plain.ast );
    auto without = pd;
    for ( auto& sec : without.sections )
        if ( sec.kind == section_kind::input )
            sec.decls.pop_back();
    CHECK( same_structure( without, plain.ast ) );
    CHECK( pd.declarations( section_kind::input ).back()->domain == var_domain::integer( 0, 0 ) );
}

TEST_CASE( "syntactic determinization lifts init choices" )
{
    auto m = parse_model( "input a : bool;\n"
                          "output o : enum {eps, hi, lo};\n"
                          "state x : int[0..2]; nd : bool;\n"
                          "init o := eps; x := {0, 2}; nd := false;\n"
                          "next o := if (a) : {hi, lo} else : eps; x := if (x < 2) : x + 1 else : x; nd := !nd;\n" );
    CHECK( set_choice_degree( m ) == 2 );
    auto d = determinize_syntactic( m );
    auto ins = d.declarations( section_kind::input );
    CHECK( ins.back()->name == "nd_1" );
    auto st = d.declarations( section_kind::state );
    CHECK( st.back()->name == "xtau" );
    CHECK( render( *d.find_assignment( section_kind::init, "x" )->rhs ) == "0" );
    CHECK( next_rhs( d, "x" ) == "if (xtau & nd_1 = 0) : 0 elif (xtau) : 2 elif (x < 2) : x + 1 else : x" );
    CHECK( next_rhs( d, "o" ) == "if (xtau) : eps elif (a & nd_1 = 0) : hi elif (a) : lo else : eps" );
    CHECK( next_rhs( d, "nd" ) == "if (xtau) : false else : !nd" );

    auto s = elaborate( d );
    CHECK( validate( s ).deterministic );
    // position 1 of the rewrite covers both initial values
    std::set<std::string> first;
    for ( const auto& t : enumerate_traces( s, 1 ) )
        first.insert( s.sig().format( s.sig().slot_value( s.sig().state_slot( *s.sig().find( var_role::state, "x" ) ),
                                                          t[1].state.idx[*s.sig().find( var_role::state, "x" )] ) ) );
    CHECK( first == std::set<std::string>{ "0", "2" } );
}
