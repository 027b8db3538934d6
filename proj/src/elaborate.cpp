#include "mutkill/elaborate.hpp"
#include "mutkill/errors.hpp"

#include <algorithm>
#include <functional>

namespace mutkill
{

namespace
{

struct typed
{
    predicate p;
    value_type type = value_type::boolean;
    const var_domain* dom = nullptr;  // set for variable references
};

using resolver = std::function<std::optional<int>( const expr& )>;

class lowering
{
public:
    lowering( const signature& sig, resolver resolve ) : sig_( sig ), resolve_( std::move( resolve ) ) {}

    typed lower( const expr& e )
    {
        switch ( e.kind )
        {
        case expr_kind::bool_lit:
            return { pred::truth( e.bool_value ), value_type::boolean, nullptr };
        case expr_kind::int_lit:
            return { pred::constant( value::of_int( e.int_value ) ), value_type::integer, nullptr };
        case expr_kind::ident:
        {
            if ( auto slot = resolve_( e ) )
            {
                const auto& d = sig_.slot_variable( *slot ).domain;
                value_type t = d.kind() == domain_kind::boolean   ? value_type::boolean
                               : d.kind() == domain_kind::integer ? value_type::integer
                                                                  : value_type::enumeration;
                return { pred::var( *slot ), t, &d };
            }
            if ( auto sym = sig_.symbol( e.name ) )
                return { pred::constant( value::of_enum( *sym ) ), value_type::enumeration, nullptr };
            fail( "unknown identifier '" + e.name + "'" );
            return { pred::truth( false ), value_type::boolean, nullptr };
        }
        case expr_kind::unary:
        {
            auto a = lower( *e.args[0] );
            value_type want = e.op == pred_op::not_ ? value_type::boolean : value_type::integer;
            expect( a, want, e );
            return { pred::unary( e.op, a.p ), want, nullptr };
        }
        case expr_kind::binary:
            return lower_binary( e );
        case expr_kind::ternary:
        {
            auto c = lower( *e.args[0] );
            expect( c, value_type::boolean, e );
            auto a = lower( *e.args[1] );
            auto b = lower( *e.args[2] );
            same_type( a, b, e );
            return { pred::ite( { c.p, a.p, b.p } ), a.type, nullptr };
        }
        case expr_kind::ite:
        {
            std::vector<predicate> args;
            typed first;
            for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
            {
                auto g = lower( *e.args[i] );
                expect( g, value_type::boolean, e );
                auto v = lower( *e.args[i + 1] );
                if ( i == 0 )
                    first = v;
                else
                    same_type( first, v, e );
                args.push_back( g.p );
                args.push_back( v.p );
            }
            auto v = lower( *e.args.back() );
            same_type( first, v, e );
            args.push_back( v.p );
            return { pred::ite( std::move( args ) ), first.type, nullptr };
        }
        case expr_kind::set:
            fail( "set-choice only allowed as an assignment value" );
            return { pred::truth( false ), value_type::boolean, nullptr };
        }
        return {};
    }

    // `slot in rhs` as a predicate.
    predicate lower_rhs( int slot, const expr& rhs )
    {
        switch ( rhs.kind )
        {
        case expr_kind::set:
        {
            std::vector<predicate> parts;
            for ( const auto& a : rhs.args )
                parts.push_back( leaf( slot, *a ) );
            return pred::disj( std::move( parts ) );
        }
        case expr_kind::ite:
        {
            std::vector<predicate> parts, negated;
            for ( std::size_t i = 0; i + 1 < rhs.args.size(); i += 2 )
            {
                auto g = lower( *rhs.args[i] );
                expect( g, value_type::boolean, rhs );
                auto guard = negated;
                guard.push_back( g.p );
                guard.push_back( lower_rhs( slot, *rhs.args[i + 1] ) );
                parts.push_back( pred::conj( std::move( guard ) ) );
                negated.push_back( pred::unary( pred_op::not_, g.p ) );
            }
            negated.push_back( lower_rhs( slot, *rhs.args.back() ) );
            parts.push_back( pred::conj( std::move( negated ) ) );
            return pred::disj( std::move( parts ) );
        }
        case expr_kind::ternary:
        {
            auto c = lower( *rhs.args[0] );
            expect( c, value_type::boolean, rhs );
            return pred::disj( { pred::conj( { c.p, lower_rhs( slot, *rhs.args[1] ) } ),
                                 pred::conj( { pred::unary( pred_op::not_, c.p ), lower_rhs( slot, *rhs.args[2] ) } ) } );
        }
        default:
            return leaf( slot, rhs );
        }
    }

    std::vector<std::string> errors;

private:
    void fail( std::string msg ) { errors.push_back( std::move( msg ) ); }

    void expect( const typed& t, value_type want, const expr& at )
    {
        if ( t.type != want )
            fail( std::string( "expected " ) + to_string( want ) + " operand, got " + to_string( t.type ) + " in '" +
                  render( at ) + "'" );
    }

    void same_type( const typed& a, const typed& b, const expr& at )
    {
        if ( a.type != b.type )
            fail( std::string( "type mismatch: " ) + to_string( a.type ) + " vs " + to_string( b.type ) + " in '" +
                  render( at ) + "'" );
    }

    // enum literal compared against an enum variable must belong to its type
    void check_literal( const typed& var, const typed& lit, const expr& at )
    {
        if ( var.dom && var.type == value_type::enumeration && !lit.dom && lit.p->op == pred_op::constant &&
             !var.dom->index_of_literal( sig_.symbol_name( lit.p->constant.v ) ) )
            fail( "literal '" + sig_.symbol_name( lit.p->constant.v ) + "' is not a value of " + var.dom->type_name() +
                  " in '" + render( at ) + "'" );
    }

    typed lower_binary( const expr& e )
    {
        auto a = lower( *e.args[0] );
        auto b = lower( *e.args[1] );
        switch ( e.op )
        {
        case pred_op::add:
        case pred_op::sub:
            expect( a, value_type::integer, e );
            expect( b, value_type::integer, e );
            return { pred::binary( e.op, a.p, b.p ), value_type::integer, nullptr };
        case pred_op::lt:
        case pred_op::le:
        case pred_op::gt:
        case pred_op::ge:
            expect( a, value_type::integer, e );
            expect( b, value_type::integer, e );
            return { pred::binary( e.op, a.p, b.p ), value_type::boolean, nullptr };
        case pred_op::eq:
        case pred_op::ne:
            same_type( a, b, e );
            check_literal( a, b, e );
            check_literal( b, a, e );
            return { pred::binary( e.op, a.p, b.p ), value_type::boolean, nullptr };
        default:
            expect( a, value_type::boolean, e );
            expect( b, value_type::boolean, e );
            return { pred::binary( e.op, a.p, b.p ), value_type::boolean, nullptr };
        }
    }

    predicate leaf( int slot, const expr& e )
    {
        const auto& v = sig_.slot_variable( slot );
        auto t = lower( e );
        typed target{ pred::var( slot ), value_type::boolean, &v.domain };
        target.type = v.domain.kind() == domain_kind::boolean   ? value_type::boolean
                      : v.domain.kind() == domain_kind::integer ? value_type::integer
                                                                : value_type::enumeration;
        if ( t.type != target.type )
        {
            fail( "cannot assign " + std::string( to_string( t.type ) ) + " value '" + render( e ) + "' to " + v.name +
                  " : " + v.domain.type_name() );
            return pred::truth( false );
        }
        std::vector<int> slots;
        collect_slots( t.p, slots );
        if ( slots.empty() && errors.empty() )
        {
            environment env( sig_ );
            try
            {
                auto c = evaluate( t.p, env );
                if ( !sig_.index_of_value( slot, c ) )
                    fail( "value '" + render( e ) + "' is outside the type of " + v.name + " (" +
                          v.domain.type_name() + ")" );
            }
            catch ( const eval_error& ex )
            {
                fail( ex.what() );
            }
        }
        return pred::equals_expr( slot, t.p );
    }

    const signature& sig_;
    resolver resolve_;
};

void raise( const std::vector<std::string>& errors )
{
    if ( errors.empty() )
        return;
    std::string msg;
    for ( const auto& e : errors )
        msg += ( msg.empty() ? "" : "\n" ) + e;
    throw model_error( msg );
}

} // namespace

signature_ptr elaborate_signature( const model_ast& m )
{
    auto vars_of = [&]( section_kind k ) {
        std::vector<variable> out;
        for ( const auto* d : m.declarations( k ) )
        {
            auto dom = d->domain;
            if ( k == section_kind::output && !dom.index_of_literal( "eps" ) )
            {
                auto lits = dom.literals();
                lits.insert( lits.begin(), "eps" );
                dom = var_domain::enumeration( std::move( lits ) );
            }
            out.push_back( { d->name, std::move( dom ) } );
        }
        return out;
    };
    return std::make_shared<const signature>( vars_of( section_kind::input ), vars_of( section_kind::output ),
                                              vars_of( section_kind::state ) );
}

sts elaborate( const model_ast& m )
{
    auto sig = elaborate_signature( m );
    const auto& s = *sig;

    auto plain = [&]( const expr& e ) -> std::optional<int> { return s.find_slot( e.name, false ); };
    lowering low( s, plain );

    std::vector<predicate> init_parts, trans_parts;
    for ( const auto& sec : m.sections )
        for ( const auto& a : sec.assigns )
        {
            if ( sec.kind == section_kind::init )
            {
                auto slot = s.find_slot( a.target, false );
                if ( !slot )
                    throw model_error( "assignment to undeclared variable '" + a.target + "'" );
                init_parts.push_back( low.lower_rhs( *slot, *a.rhs ) );
            }
            else
            {
                auto slot = s.find_slot( a.target, true );
                if ( !slot )
                    throw model_error( "assignment to undeclared variable '" + a.target + "'" );
                trans_parts.push_back( low.lower_rhs( *slot, *a.rhs ) );
            }
        }
    raise( low.errors );
    return sts( sig, pred::conj( std::move( init_parts ) ), pred::conj( std::move( trans_parts ) ) );
}

predicate parse_predicate( std::string_view text, const signature& sig )
{
    auto e = parse_expression( text, true );
    auto resolve = [&]( const expr& x ) -> std::optional<int> { return sig.find_slot( x.name, x.primed ); };
    lowering low( sig, resolve );
    auto t = low.lower( *e );
    if ( t.type != value_type::boolean )
        low.errors.push_back( "predicate is not boolean" );
    raise( low.errors );
    return t.p;
}

} // namespace mutkill
