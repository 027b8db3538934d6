#include "corpus.hpp"

#include "mutkill/elaborate.hpp"

#include <doctest.h>

using namespace mutkill;
using namespace mutkill::testing;

TEST_CASE( "corpus instances respect the shape and are total" )
{
    auto corpus = make_corpus( 20, 7 );
    std::size_t det = 0;
    for ( const auto& inst : corpus )
    {
        const auto& sig = inst.original.sig();
        CHECK( sig.inputs().size() <= 2 );
        CHECK( sig.states().size() <= 3 );
        for ( auto role : { var_role::input, var_role::state } )
            for ( const auto& v : sig.group( role ) )
                CHECK( v.domain.size() <= 3 );
        CHECK( validate( inst.original ).total );
        CHECK( validate( inst.mutant ).total );
        CHECK( validate( inst.original ).deterministic == inst.original_deterministic );
        CHECK( same_structure( parse_model( inst.source ), inst.ast ) );
        det += inst.original_deterministic;
    }
    // both strata are populated
    CHECK( det > 0 );
    CHECK( det < corpus.size() );
}

TEST_CASE( "corpus is reproducible from its seed" )
{
    auto a = make_instance( 42 );
    auto b = make_instance( 42 );
    CHECK( a.source == b.source );
    CHECK( a.cm.applied.id == b.cm.applied.id );
}

TEST_CASE( "generated ASTs round trip through the printer" )
{
    std::mt19937_64 rng( 11 );
    for ( int k = 0; k < 50; ++k )
    {
        auto m = random_ast( rng );
        auto text = render( m );
        model_ast back;
        REQUIRE_NOTHROW( back = parse_model( text ) );
        CHECK_MESSAGE( same_structure( back, m ), text );
        CHECK( render( back ) == text );
    }
}
