#include "mutkill/predicate.hpp"
#include "mutkill/errors.hpp"

#include <algorithm>

namespace mutkill
{

std::size_t index_tuple_hash::operator()( const std::vector<std::int32_t>& t ) const noexcept
{
    std::size_t h = 0xcbf29ce484222325ULL;
    for ( auto x : t )
    {
        h ^= static_cast<std::size_t>( x ) + 0x9e3779b97f4a7c15ULL + ( h << 6 ) + ( h >> 2 );
    }
    return h;
}

namespace pred
{
namespace
{
predicate make( pred_node n )
{
    return std::make_shared<const pred_node>( std::move( n ) );
}
} // namespace

predicate constant( value v )
{
    pred_node n;
    n.op = pred_op::constant;
    n.constant = v;
    return make( std::move( n ) );
}

predicate truth( bool b )
{
    return constant( value::of_bool( b ) );
}

predicate var( int slot )
{
    pred_node n;
    n.op = pred_op::var;
    n.slot = slot;
    return make( std::move( n ) );
}

predicate unary( pred_op op, predicate a )
{
    pred_node n;
    n.op = op;
    n.args = { std::move( a ) };
    return make( std::move( n ) );
}

predicate binary( pred_op op, predicate a, predicate b )
{
    pred_node n;
    n.op = op;
    n.args = { std::move( a ), std::move( b ) };
    return make( std::move( n ) );
}

predicate ite( std::vector<predicate> args )
{
    if ( args.size() % 2 == 0 )
        throw model_error( "if-chain needs an else branch" );
    if ( args.size() == 1 )
        return args.front();
    pred_node n;
    n.op = pred_op::ite;
    n.args = std::move( args );
    return make( std::move( n ) );
}

predicate set( std::vector<predicate> elements )
{
    pred_node n;
    n.op = pred_op::set;
    n.args = std::move( elements );
    return make( std::move( n ) );
}

predicate member( predicate var_ref, predicate set_expr )
{
    return binary( pred_op::member, std::move( var_ref ), std::move( set_expr ) );
}

predicate relation( std::shared_ptr<const relation_table> table )
{
    pred_node n;
    n.op = pred_op::relation;
    n.table = std::move( table );
    return make( std::move( n ) );
}

predicate conj( std::vector<predicate> parts )
{
    if ( parts.empty() )
        return truth( true );
    predicate acc = parts.front();
    for ( std::size_t i = 1; i < parts.size(); ++i )
        acc = binary( pred_op::and_, acc, parts[i] );
    return acc;
}

predicate disj( std::vector<predicate> parts )
{
    if ( parts.empty() )
        return truth( false );
    predicate acc = parts.front();
    for ( std::size_t i = 1; i < parts.size(); ++i )
        acc = binary( pred_op::or_, acc, parts[i] );
    return acc;
}

predicate equals( int slot, const value& v )
{
    return binary( pred_op::eq, var( slot ), constant( v ) );
}

predicate equals_expr( int slot, predicate e )
{
    return binary( pred_op::eq, var( slot ), std::move( e ) );
}

} // namespace pred

environment::environment( const signature& sig ) : sig_( &sig ), slots_( sig.slot_count(), -1 )
{
}

void environment::bind_group( var_role role, const valuation& v, bool primed )
{
    for ( std::size_t i = 0; i < v.idx.size(); ++i )
    {
        int slot = ( role == var_role::state && primed ) ? sig_->next_slot( i ) : sig_->group_slot( role, i );
        slots_[slot] = v.idx[i];
    }
}

void environment::clear()
{
    std::fill( slots_.begin(), slots_.end(), -1 );
}

namespace
{

[[noreturn]] void type_mismatch( const char* what, const value& a, const value& b )
{
    throw eval_error( std::string( "type mismatch in " ) + what + ": " + to_string( a.type ) + " vs " +
                      to_string( b.type ) );
}

bool as_bool( const value& v, const char* what )
{
    if ( v.type != value_type::boolean )
        throw eval_error( std::string( "expected bool operand for " ) + what + ", got " + to_string( v.type ) );
    return v.v != 0;
}

std::int64_t as_int( const value& v, const char* what )
{
    if ( v.type != value_type::integer )
        throw eval_error( std::string( "expected int operand for " ) + what + ", got " + to_string( v.type ) );
    return v.v;
}

const char* op_name( pred_op op )
{
    switch ( op )
    {
    case pred_op::not_:
        return "!";
    case pred_op::neg:
        return "-";
    case pred_op::pos:
        return "+";
    case pred_op::add:
        return "+";
    case pred_op::sub:
        return "-";
    case pred_op::and_:
        return "&";
    case pred_op::or_:
        return "|";
    case pred_op::implies:
        return "->";
    case pred_op::iff:
        return "<->";
    case pred_op::xor_:
        return "xor";
    case pred_op::xnor:
        return "xnor";
    case pred_op::eq:
        return "=";
    case pred_op::ne:
        return "!=";
    case pred_op::lt:
        return "<";
    case pred_op::le:
        return "<=";
    case pred_op::gt:
        return ">";
    case pred_op::ge:
        return ">=";
    default:
        return "?";
    }
}

} // namespace

value evaluate( const predicate& p, const environment& env )
{
    const pred_node& n = *p;
    switch ( n.op )
    {
    case pred_op::constant:
        return n.constant;
    case pred_op::var:
    {
        auto idx = env.get( n.slot );
        if ( idx < 0 )
            throw eval_error( "unbound variable " + env.sig().slot_name( n.slot ) );
        return env.sig().slot_value( n.slot, idx );
    }
    case pred_op::not_:
        return value::of_bool( !as_bool( evaluate( n.args[0], env ), "!" ) );
    case pred_op::neg:
        return value::of_int( -as_int( evaluate( n.args[0], env ), "unary -" ) );
    case pred_op::pos:
        return value::of_int( as_int( evaluate( n.args[0], env ), "unary +" ) );
    case pred_op::add:
        return value::of_int( as_int( evaluate( n.args[0], env ), "+" ) + as_int( evaluate( n.args[1], env ), "+" ) );
    case pred_op::sub:
        return value::of_int( as_int( evaluate( n.args[0], env ), "-" ) - as_int( evaluate( n.args[1], env ), "-" ) );
    case pred_op::and_:
        return value::of_bool( as_bool( evaluate( n.args[0], env ), "&" ) && as_bool( evaluate( n.args[1], env ), "&" ) );
    case pred_op::or_:
        return value::of_bool( as_bool( evaluate( n.args[0], env ), "|" ) || as_bool( evaluate( n.args[1], env ), "|" ) );
    case pred_op::implies:
        return value::of_bool( !as_bool( evaluate( n.args[0], env ), "->" ) ||
                               as_bool( evaluate( n.args[1], env ), "->" ) );
    case pred_op::iff:
    case pred_op::xnor:
        return value::of_bool( as_bool( evaluate( n.args[0], env ), op_name( n.op ) ) ==
                               as_bool( evaluate( n.args[1], env ), op_name( n.op ) ) );
    case pred_op::xor_:
        return value::of_bool( as_bool( evaluate( n.args[0], env ), "xor" ) !=
                               as_bool( evaluate( n.args[1], env ), "xor" ) );
    case pred_op::eq:
    case pred_op::ne:
    {
        auto a = evaluate( n.args[0], env );
        auto b = evaluate( n.args[1], env );
        if ( a.type != b.type )
            type_mismatch( op_name( n.op ), a, b );
        return value::of_bool( ( a.v == b.v ) == ( n.op == pred_op::eq ) );
    }
    case pred_op::lt:
    case pred_op::le:
    case pred_op::gt:
    case pred_op::ge:
    {
        auto a = as_int( evaluate( n.args[0], env ), op_name( n.op ) );
        auto b = as_int( evaluate( n.args[1], env ), op_name( n.op ) );
        bool r = n.op == pred_op::lt ? a < b : n.op == pred_op::le ? a <= b : n.op == pred_op::gt ? a > b : a >= b;
        return value::of_bool( r );
    }
    case pred_op::ite:
    {
        for ( std::size_t i = 0; i + 1 < n.args.size(); i += 2 )
            if ( as_bool( evaluate( n.args[i], env ), "if" ) )
                return evaluate( n.args[i + 1], env );
        return evaluate( n.args.back(), env );
    }
    case pred_op::set:
        throw eval_error( "set-choice evaluated outside a membership" );
    case pred_op::member:
    {
        auto lhs = evaluate( n.args[0], env );
        for ( const auto& v : evaluate_set( n.args[1], env ) )
        {
            if ( v.type != lhs.type )
                type_mismatch( "membership", lhs, v );
            if ( v == lhs )
                return value::of_bool( true );
        }
        return value::of_bool( false );
    }
    case pred_op::relation:
    {
        std::vector<std::int32_t> row;
        row.reserve( n.table->slots.size() );
        for ( int s : n.table->slots )
        {
            auto idx = env.get( s );
            if ( idx < 0 )
                throw eval_error( "unbound variable " + env.sig().slot_name( s ) );
            row.push_back( idx );
        }
        return value::of_bool( n.table->rows.count( row ) != 0 );
    }
    }
    throw eval_error( "unknown predicate node" );
}

bool holds( const predicate& p, const environment& env )
{
    return as_bool( evaluate( p, env ), "predicate" );
}

std::vector<value> evaluate_set( const predicate& p, const environment& env )
{
    const pred_node& n = *p;
    if ( n.op == pred_op::set )
    {
        std::vector<value> out;
        for ( const auto& e : n.args )
            out.push_back( evaluate( e, env ) );
        return out;
    }
    if ( n.op == pred_op::ite )
    {
        for ( std::size_t i = 0; i + 1 < n.args.size(); i += 2 )
            if ( as_bool( evaluate( n.args[i], env ), "if" ) )
                return evaluate_set( n.args[i + 1], env );
        return evaluate_set( n.args.back(), env );
    }
    return { evaluate( p, env ) };
}

void collect_slots( const predicate& p, std::vector<int>& out )
{
    if ( p->op == pred_op::var )
        out.push_back( p->slot );
    if ( p->op == pred_op::relation )
        out.insert( out.end(), p->table->slots.begin(), p->table->slots.end() );
    for ( const auto& a : p->args )
        collect_slots( a, out );
}

void flatten_conjuncts( const predicate& p, std::vector<predicate>& out )
{
    if ( p->op == pred_op::and_ )
    {
        flatten_conjuncts( p->args[0], out );
        flatten_conjuncts( p->args[1], out );
        return;
    }
    out.push_back( p );
}

predicate remap( const predicate& p, const signature& from, const std::vector<slot_target>& target )
{
    const pred_node& n = *p;
    if ( n.op == pred_op::var )
    {
        const auto& t = target.at( n.slot );
        if ( t.fixed_index >= 0 )
            return pred::constant( from.slot_value( n.slot, t.fixed_index ) );
        if ( t.new_slot < 0 )
            throw model_error( "remap drops referenced variable " + from.slot_name( n.slot ) );
        return pred::var( t.new_slot );
    }
    if ( n.op == pred_op::relation )
    {
        auto table = std::make_shared<relation_table>();
        std::vector<std::size_t> keep;
        for ( std::size_t c = 0; c < n.table->slots.size(); ++c )
        {
            const auto& t = target.at( n.table->slots[c] );
            if ( t.fixed_index < 0 )
            {
                if ( t.new_slot < 0 )
                    throw model_error( "remap drops relation column " + from.slot_name( n.table->slots[c] ) );
                keep.push_back( c );
                table->slots.push_back( t.new_slot );
            }
        }
        for ( const auto& row : n.table->rows )
        {
            bool ok = true;
            for ( std::size_t c = 0; c < row.size() && ok; ++c )
            {
                const auto& t = target.at( n.table->slots[c] );
                if ( t.fixed_index >= 0 && row[c] != t.fixed_index )
                    ok = false;
            }
            if ( !ok )
                continue;
            std::vector<std::int32_t> r;
            for ( auto c : keep )
                r.push_back( row[c] );
            table->rows.insert( std::move( r ) );
        }
        return pred::relation( std::move( table ) );
    }
    if ( n.args.empty() )
        return p;
    auto copy = std::make_shared<pred_node>( n );
    for ( auto& a : copy->args )
        a = remap( a, from, target );
    return copy;
}

namespace
{

int precedence( pred_op op )
{
    switch ( op )
    {
    case pred_op::implies:
        return 1;
    case pred_op::iff:
        return 2;
    case pred_op::or_:
    case pred_op::xor_:
    case pred_op::xnor:
        return 3;
    case pred_op::and_:
        return 4;
    case pred_op::eq:
    case pred_op::ne:
    case pred_op::lt:
    case pred_op::le:
    case pred_op::gt:
    case pred_op::ge:
    case pred_op::member:
        return 5;
    case pred_op::add:
    case pred_op::sub:
        return 6;
    case pred_op::not_:
    case pred_op::neg:
    case pred_op::pos:
        return 7;
    case pred_op::ite:
        return 0;
    default:
        return 8;
    }
}

std::string print( const predicate& p, const signature& sig, int ctx )
{
    const pred_node& n = *p;
    std::string s;
    int prec = precedence( n.op );
    switch ( n.op )
    {
    case pred_op::constant:
        return sig.format( n.constant );
    case pred_op::var:
        return sig.slot_name( n.slot );
    case pred_op::not_:
    case pred_op::neg:
    case pred_op::pos:
        s = std::string( op_name( n.op ) ) + print( n.args[0], sig, 7 );
        break;
    case pred_op::ite:
        s = "if (" + print( n.args[0], sig, 0 ) + ") : " + print( n.args[1], sig, 0 );
        for ( std::size_t i = 2; i + 1 < n.args.size(); i += 2 )
            s += " elif (" + print( n.args[i], sig, 0 ) + ") : " + print( n.args[i + 1], sig, 0 );
        s += " else : " + print( n.args.back(), sig, 0 );
        break;
    case pred_op::set:
        s = "{";
        for ( std::size_t i = 0; i < n.args.size(); ++i )
            s += ( i ? ", " : "" ) + print( n.args[i], sig, 0 );
        s += "}";
        break;
    case pred_op::member:
        s = print( n.args[0], sig, 6 ) + " in " + print( n.args[1], sig, 6 );
        break;
    case pred_op::relation:
    {
        s = "(";
        for ( std::size_t i = 0; i < n.table->slots.size(); ++i )
            s += ( i ? ", " : "" ) + sig.slot_name( n.table->slots[i] );
        s += ") in <table of " + std::to_string( n.table->rows.size() ) + " rows>";
        prec = 5;
        break;
    }
    default:
        s = print( n.args[0], sig, prec ) + " " + op_name( n.op ) + " " + print( n.args[1], sig, prec + 1 );
        break;
    }
    if ( prec < ctx )
        return "(" + s + ")";
    return s;
}

} // namespace

std::string to_string( const predicate& p, const signature& sig )
{
    return print( p, sig, 0 );
}

} // namespace mutkill
