#include "fixtures.hpp"
#include "mutkill/errors.hpp"

#include <doctest.h>

using namespace mutkill;

namespace
{

std::vector<std::string> errors_of( const std::string& src )
{
    try
    {
        (void)parse_model( src );
    }
    catch ( const parse_error& e )
    {
        std::vector<std::string> out;
        for ( const auto& d : e.diagnostics() )
            out.push_back( d.message );
        return out;
    }
    return {};
}

bool mentions( const std::vector<std::string>& errs, const std::string& what )
{
    for ( const auto& e : errs )
        if ( e.find( what ) != std::string::npos )
            return true;
    return false;
}

} // namespace

TEST_CASE( "parse the beverage model" )
{
    auto m = mutkill::testing::beverage_ast();
    CHECK( m.declarations( section_kind::input ).size() == 1 );
    CHECK( m.declarations( section_kind::output ).size() == 1 );
    CHECK( m.declarations( section_kind::state ).size() == 1 );
    const auto* a = m.find_assignment( section_kind::next, "wtr" );
    REQUIRE( a );
    CHECK( a->rhs->kind == expr_kind::ite );
    auto src = mutkill::testing::beverage_source();
    CHECK( src.substr( a->span.begin, 3 ) == "wtr" );
    CHECK( src[a->span.end - 1] == ';' );
}

TEST_CASE( "semantic errors" )
{
    CHECK( errors_of( "" ) == std::vector<std::string>{ "no sections" } );
    CHECK( errors_of( "// nothing\n" ) == std::vector<std::string>{ "no sections" } );

    auto e = errors_of( "output out : enum {eps, a}; next out := out;" );
    CHECK( mentions( e, "out unassigned in init" ) );

    // every problem is reported, not just the first one
    e = errors_of( "input i : bool; i : bool;\n"
                   "output o : int[0..2];\n"
                   "state x : bool;\n"
                   "init x := true; x := false; i := true;\n"
                   "next x := y; q := 1;\n" );
    CHECK( mentions( e, "'i' declared twice" ) );
    CHECK( mentions( e, "output 'o' must have an enum type" ) );
    CHECK( mentions( e, "x assigned twice in init" ) );
    CHECK( mentions( e, "input 'i' cannot be assigned" ) );
    CHECK( mentions( e, "unknown identifier 'y'" ) );
    CHECK( mentions( e, "undeclared variable 'q'" ) );
    CHECK( mentions( e, "o unassigned in init" ) );
    CHECK( mentions( e, "o unassigned in next" ) );
    CHECK( e.size() >= 8 );

    e = errors_of( "output o : enum {a}; state x : bool; init o := a; x := true;\n"
                   "next o := a; x := o = a;\n" );
    CHECK( mentions( e, "reads output 'o'" ) );

    e = errors_of( "output o : enum {a}; state x : bool; init o := a; x := true;\n"
                   "next o := a; x := !{true, false};\n" );
    CHECK( mentions( e, "set-choice only allowed" ) );
}

TEST_CASE( "syntax errors carry positions" )
{
    try
    {
        (void)parse_model( "input\n  i : bool\nstate x : bool;" );
        FAIL( "expected error" );
    }
    catch ( const parse_error& e )
    {
        REQUIRE( e.diagnostics().size() == 1 );
        CHECK( e.diagnostics()[0].line == 3 );
        CHECK( e.diagnostics()[0].column == 1 );
    }
    CHECK_THROWS_AS( (void)parse_model( "output o : enum {a}; init o := if (true) : a; next o := a;" ), parse_error );
    CHECK_THROWS_AS( (void)parse_model( "state x : bool; init x := true; next x := x';" ), parse_error );
    CHECK_THROWS_AS( (void)parse_model( "state x : int[3..1]; init x := 1; next x := x;" ), parse_error );
}

TEST_CASE( "elaboration" )
{
    auto s = elaborate( parse_model( "state x : int[0..1]; init x := 0; next x := {0, 1};" ) );
    CHECK( to_string( s.trans(), s.sig() ) == "x' = 0 | x' = 1" );
    CHECK( s.successors( { { 0 } }, { {} } ).size() == 2 );

    // eps is added to outputs
    auto t = elaborate( parse_model( "output o : enum {a, b}; init o := a; next o := b;" ) );
    CHECK( t.sig().outputs()[0].domain.literals() == std::vector<std::string>{ "eps", "a", "b" } );

    CHECK_THROWS_AS( (void)elaborate( parse_model( "state x : int[0..1]; init x := 0; next x := x = 1;" ) ), model_error );
    CHECK_THROWS_AS( (void)elaborate( parse_model( "state x : int[0..1]; init x := 2; next x := x;" ) ), model_error );
    CHECK_THROWS_AS( (void)elaborate( parse_model( "input i : enum {a, b}; output o : enum {c};\n"
                                             "init o := c; next o := if (i = c) : c else : eps;" ) ),
                     model_error );
    CHECK_THROWS_AS( (void)elaborate( parse_model( "input i : enum {a, b}; state x : bool;\n"
                                             "init x := true; next x := i + 1 > 0;" ) ),
                     model_error );

    // beverage: requests with water admit exactly the two drinks
    auto bev = elaborate( mutkill::testing::beverage_ast() );
    auto succ = bev.successors( mutkill::testing::val( bev.sig(), var_role::state, { "1" } ),
                                mutkill::testing::val( bev.sig(), var_role::input, { "req" } ) );
    REQUIRE( succ.size() == 2 );
    CHECK( bev.sig().outputs()[0].domain.value_name( succ[0].output.idx[0] ) == "coff" );
    CHECK( bev.sig().outputs()[0].domain.value_name( succ[1].output.idx[0] ) == "tea" );
}

TEST_CASE( "render round trip" )
{
    auto m = mutkill::testing::beverage_ast();
    auto text = render( m );
    auto back = parse_model( text );
    CHECK( same_structure( m, back ) );
    CHECK( render( back ) == text );

    const char* tricky = "input a : bool; b : bool; c : int[-2..2];\n"
                         "output o : enum {eps, p};\n"
                         "state x : bool; y : int[-3..3];\n"
                         "init o := eps; x := {true, false}; y := -1;\n"
                         "next o := if (a -> b -> x) : p else : eps;\n"
                         "  x := (a | b) & !(x xor a) <-> (c - -1 >= y - (c + 1));\n"
                         "  y := (x ? {--1, +2} : if (c = 0) : y elif (y < 0) : 0 else : c);\n";
    auto t = parse_model( tricky );
    auto r = render( t );
    CHECK( same_structure( t, parse_model( r ) ) );
    CHECK( render( parse_model( r ) ) == r );
    CHECK( r.find( "(a | b) & !(x xor a)" ) != std::string::npos );
    CHECK( r.find( "a -> b -> x" ) != std::string::npos );
}
