#include "mutkill/ast.hpp"

namespace mutkill
{

bool same_structure( const expr& a, const expr& b )
{
    if ( a.kind != b.kind || a.primed != b.primed || a.args.size() != b.args.size() )
        return false;
    switch ( a.kind )
    {
    case expr_kind::bool_lit:
        if ( a.bool_value != b.bool_value )
            return false;
        break;
    case expr_kind::int_lit:
        if ( a.int_value != b.int_value )
            return false;
        break;
    case expr_kind::ident:
        if ( a.name != b.name )
            return false;
        break;
    case expr_kind::unary:
    case expr_kind::binary:
        if ( a.op != b.op )
            return false;
        break;
    default:
        break;
    }
    for ( std::size_t i = 0; i < a.args.size(); ++i )
        if ( !same_structure( *a.args[i], *b.args[i] ) )
            return false;
    return true;
}

bool same_structure( const model_ast& a, const model_ast& b )
{
    if ( a.sections.size() != b.sections.size() )
        return false;
    for ( std::size_t s = 0; s < a.sections.size(); ++s )
    {
        const auto& x = a.sections[s];
        const auto& y = b.sections[s];
        if ( x.kind != y.kind || x.decls.size() != y.decls.size() || x.assigns.size() != y.assigns.size() )
            return false;
        for ( std::size_t i = 0; i < x.decls.size(); ++i )
            if ( x.decls[i].name != y.decls[i].name || !( x.decls[i].domain == y.decls[i].domain ) )
                return false;
        for ( std::size_t i = 0; i < x.assigns.size(); ++i )
            if ( x.assigns[i].target != y.assigns[i].target ||
                 !same_structure( *x.assigns[i].rhs, *y.assigns[i].rhs ) )
                return false;
    }
    return true;
}

const char* keyword( section_kind k )
{
    switch ( k )
    {
    case section_kind::input:
        return "input";
    case section_kind::output:
        return "output";
    case section_kind::state:
        return "state";
    case section_kind::init:
        return "init";
    case section_kind::next:
        return "next";
    }
    return "?";
}

std::vector<const declaration*> model_ast::declarations( section_kind k ) const
{
    std::vector<const declaration*> out;
    for ( const auto& s : sections )
        if ( s.kind == k )
            for ( const auto& d : s.decls )
                out.push_back( &d );
    return out;
}

const assignment* model_ast::find_assignment( section_kind block, std::string_view target ) const
{
    for ( const auto& s : sections )
        if ( s.kind == block )
            for ( const auto& a : s.assigns )
                if ( a.target == target )
                    return &a;
    return nullptr;
}

namespace ast
{
namespace
{
std::shared_ptr<expr> make( expr_kind k )
{
    auto e = std::make_shared<expr>();
    e->kind = k;
    return e;
}
} // namespace

expr_ptr bool_lit( bool b )
{
    auto e = make( expr_kind::bool_lit );
    e->bool_value = b;
    return e;
}

expr_ptr int_lit( std::int64_t v )
{
    if ( v < 0 )
        return unary( pred_op::neg, int_lit( -v ) );
    auto e = make( expr_kind::int_lit );
    e->int_value = v;
    return e;
}

expr_ptr ident( std::string name )
{
    auto e = make( expr_kind::ident );
    e->name = std::move( name );
    return e;
}

expr_ptr unary( pred_op op, expr_ptr a )
{
    auto e = make( expr_kind::unary );
    e->op = op;
    e->args = { std::move( a ) };
    return e;
}

expr_ptr binary( pred_op op, expr_ptr a, expr_ptr b )
{
    auto e = make( expr_kind::binary );
    e->op = op;
    e->args = { std::move( a ), std::move( b ) };
    return e;
}

expr_ptr ternary( expr_ptr c, expr_ptr a, expr_ptr b )
{
    auto e = make( expr_kind::ternary );
    e->args = { std::move( c ), std::move( a ), std::move( b ) };
    return e;
}

expr_ptr set( std::vector<expr_ptr> elements )
{
    auto e = make( expr_kind::set );
    e->args = std::move( elements );
    return e;
}

expr_ptr ite( std::vector<expr_ptr> args )
{
    auto e = make( expr_kind::ite );
    e->args = std::move( args );
    return e;
}
} // namespace ast

int precedence_of( const expr& e )
{
    switch ( e.kind )
    {
    case expr_kind::ite:
        return 0;
    case expr_kind::unary:
        return 7;
    case expr_kind::binary:
        switch ( e.op )
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
        case pred_op::add:
        case pred_op::sub:
            return 6;
        default:
            return 5;
        }
    default:
        return 8;
    }
}

namespace
{

const char* spelling( pred_op op )
{
    switch ( op )
    {
    case pred_op::not_:
        return "!";
    case pred_op::neg:
    case pred_op::sub:
        return "-";
    case pred_op::pos:
    case pred_op::add:
        return "+";
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

void emit( const expr& e, std::string& out, bool wrap );

void emit_child( const expr& c, std::string& out, bool needed )
{
    emit( c, out, needed || c.parens );
}

void emit( const expr& e, std::string& out, bool wrap )
{
    if ( wrap )
        out += '(';
    int prec = precedence_of( e );
    switch ( e.kind )
    {
    case expr_kind::bool_lit:
        out += e.bool_value ? "true" : "false";
        break;
    case expr_kind::int_lit:
        out += std::to_string( e.int_value );
        break;
    case expr_kind::ident:
        out += e.name;
        if ( e.primed )
            out += '\'';
        break;
    case expr_kind::unary:
        out += spelling( e.op );
        emit_child( *e.args[0], out, precedence_of( *e.args[0] ) < prec );
        break;
    case expr_kind::binary:
    {
        bool right_assoc = e.op == pred_op::implies;
        int lp = precedence_of( *e.args[0] );
        int rp = precedence_of( *e.args[1] );
        emit_child( *e.args[0], out, lp < prec || ( right_assoc && lp == prec ) );
        out += ' ';
        out += spelling( e.op );
        out += ' ';
        emit_child( *e.args[1], out, rp < prec || ( !right_assoc && rp == prec ) );
        break;
    }
    case expr_kind::ternary:
        out += '(';
        emit_child( *e.args[0], out, false );
        out += " ? ";
        emit_child( *e.args[1], out, false );
        out += " : ";
        emit_child( *e.args[2], out, false );
        out += ')';
        break;
    case expr_kind::set:
        out += '{';
        for ( std::size_t i = 0; i < e.args.size(); ++i )
        {
            if ( i )
                out += ", ";
            emit_child( *e.args[i], out, false );
        }
        out += '}';
        break;
    case expr_kind::ite:
        for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
        {
            out += i == 0 ? "if (" : " elif (";
            emit_child( *e.args[i], out, false );
            out += ") : ";
            emit_child( *e.args[i + 1], out, false );
        }
        out += " else : ";
        emit_child( *e.args.back(), out, false );
        break;
    }
    if ( wrap )
        out += ')';
}

std::string render_type( const var_domain& d )
{
    switch ( d.kind() )
    {
    case domain_kind::boolean:
        return "bool";
    case domain_kind::integer:
        return "int[" + std::to_string( d.lo() ) + ".." + std::to_string( d.hi() ) + "]";
    case domain_kind::enumeration:
    {
        std::string s = "enum {";
        for ( std::size_t i = 0; i < d.literals().size(); ++i )
            s += ( i ? ", " : "" ) + d.literals()[i];
        return s + "}";
    }
    }
    return "?";
}

} // namespace

std::string render( const expr& e )
{
    std::string out;
    emit( e, out, e.parens );
    return out;
}

std::string render( const model_ast& m )
{
    std::string out;
    for ( std::size_t s = 0; s < m.sections.size(); ++s )
    {
        const auto& sec = m.sections[s];
        if ( s )
            out += '\n';
        out += keyword( sec.kind );
        out += '\n';
        for ( const auto& d : sec.decls )
            out += "  " + d.name + " : " + render_type( d.domain ) + ";\n";
        for ( const auto& a : sec.assigns )
            out += "  " + a.target + " := " + render( *a.rhs ) + ";\n";
    }
    return out;
}

} // namespace mutkill
