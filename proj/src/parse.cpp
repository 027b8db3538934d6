#include "mutkill/ast.hpp"
#include "mutkill/errors.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace mutkill
{

namespace
{

enum class tok
{
    ident,
    integer,
    punct,
    end
};

struct token
{
    tok kind = tok::end;
    std::string text;
    std::size_t offset = 0;
};

diagnostic at( std::string_view src, std::size_t offset, std::string msg )
{
    diagnostic d;
    d.line = 1;
    d.column = 1;
    for ( std::size_t i = 0; i < offset && i < src.size(); ++i )
    {
        if ( src[i] == '\n' )
        {
            ++d.line;
            d.column = 1;
        }
        else
            ++d.column;
    }
    d.message = std::move( msg );
    return d;
}

std::vector<token> lex( std::string_view src )
{
    static const char* puncts[] = { "<->", ":=", "->", "&&", "||", "!=", "<=", ">=", "==", "..", "!", "-", "+", "&",
                                    "|",   "=",  "<",  ">",  "(",  ")",  "{",  "}",  "[",  "]",  ",", ";", ":", "?",
                                    "'" };
    std::vector<token> out;
    std::size_t i = 0;
    while ( i < src.size() )
    {
        char c = src[i];
        if ( std::isspace( static_cast<unsigned char>( c ) ) )
        {
            ++i;
            continue;
        }
        if ( c == '#' || ( c == '/' && i + 1 < src.size() && src[i + 1] == '/' ) )
        {
            while ( i < src.size() && src[i] != '\n' )
                ++i;
            continue;
        }
        if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
        {
            std::size_t j = i;
            while ( j < src.size() && ( std::isalnum( static_cast<unsigned char>( src[j] ) ) || src[j] == '_' ) )
                ++j;
            out.push_back( { tok::ident, std::string( src.substr( i, j - i ) ), i } );
            i = j;
            continue;
        }
        if ( std::isdigit( static_cast<unsigned char>( c ) ) )
        {
            std::size_t j = i;
            while ( j < src.size() && std::isdigit( static_cast<unsigned char>( src[j] ) ) )
                ++j;
            out.push_back( { tok::integer, std::string( src.substr( i, j - i ) ), i } );
            i = j;
            continue;
        }
        bool matched = false;
        for ( const char* p : puncts )
        {
            std::string_view pv( p );
            if ( src.substr( i, pv.size() ) == pv )
            {
                out.push_back( { tok::punct, std::string( pv ), i } );
                i += pv.size();
                matched = true;
                break;
            }
        }
        if ( !matched )
            throw parse_error( { at( src, i, std::string( "unexpected character '" ) + c + "'" ) } );
    }
    out.push_back( { tok::end, "", src.size() } );
    return out;
}

const std::set<std::string> reserved = { "input", "output", "state", "init", "next", "if",   "elif",
                                         "else",  "bool",   "enum",  "int",  "true", "false", "xor",
                                         "xnor",  "TRUE",   "FALSE" };

class parser
{
public:
    parser( std::string_view src, bool allow_primes ) : src_( src ), toks_( lex( src ) ), allow_primes_( allow_primes )
    {
    }

    model_ast model()
    {
        model_ast m;
        while ( peek().kind != tok::end )
            m.sections.push_back( parse_section() );
        return m;
    }

    expr_ptr lone_expression()
    {
        auto e = expression();
        if ( peek().kind != tok::end )
            fail( "unexpected '" + peek().text + "' after expression" );
        return e;
    }

private:
    const token& peek( std::size_t k = 0 ) const { return toks_[std::min( pos_ + k, toks_.size() - 1 )]; }
    const token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    std::size_t prev_end() const
    {
        const auto& t = toks_[pos_ - 1];
        return t.offset + t.text.size();
    }

    [[noreturn]] void fail( const std::string& msg ) const
    {
        throw parse_error( { at( src_, peek().offset, msg ) } );
    }

    bool is_punct( std::string_view p ) const { return peek().kind == tok::punct && peek().text == p; }
    bool is_word( std::string_view w ) const { return peek().kind == tok::ident && peek().text == w; }
    bool accept_punct( std::string_view p )
    {
        if ( !is_punct( p ) )
            return false;
        advance();
        return true;
    }
    void expect_punct( std::string_view p )
    {
        if ( !accept_punct( p ) )
            fail( "expected '" + std::string( p ) + "' but found " + describe( peek() ) );
    }
    void expect_word( std::string_view w )
    {
        if ( !is_word( w ) )
            fail( "expected '" + std::string( w ) + "' but found " + describe( peek() ) );
        advance();
    }
    static std::string describe( const token& t )
    {
        return t.kind == tok::end ? std::string( "end of input" ) : "'" + t.text + "'";
    }

    std::string identifier( const char* what )
    {
        if ( peek().kind != tok::ident || reserved.count( peek().text ) )
            fail( std::string( "expected " ) + what + " but found " + describe( peek() ) );
        return advance().text;
    }

    std::int64_t signed_integer()
    {
        bool neg = accept_punct( "-" );
        if ( peek().kind != tok::integer )
            fail( "expected integer but found " + describe( peek() ) );
        auto v = to_int( advance() );
        return neg ? -v : v;
    }

    std::int64_t to_int( const token& t ) const
    {
        std::int64_t v = 0;
        auto r = std::from_chars( t.text.data(), t.text.data() + t.text.size(), v );
        if ( r.ec != std::errc() )
            throw parse_error( { at( src_, t.offset, "integer literal out of range" ) } );
        return v;
    }

    section parse_section()
    {
        section s;
        s.span.begin = peek().offset;
        const auto& kw = peek().text;
        if ( peek().kind != tok::ident )
            fail( "expected section keyword but found " + describe( peek() ) );
        if ( kw == "input" )
            s.kind = section_kind::input;
        else if ( kw == "output" )
            s.kind = section_kind::output;
        else if ( kw == "state" )
            s.kind = section_kind::state;
        else if ( kw == "init" )
            s.kind = section_kind::init;
        else if ( kw == "next" )
            s.kind = section_kind::next;
        else
            fail( "expected section keyword (input, output, state, init, next) but found " + describe( peek() ) );
        advance();

        bool decl_section = s.kind == section_kind::input || s.kind == section_kind::output ||
                            s.kind == section_kind::state;
        do
        {
            if ( decl_section )
                s.decls.push_back( parse_decl() );
            else
                s.assigns.push_back( parse_assign() );
        } while ( peek().kind == tok::ident && !is_section_keyword( peek().text ) );
        s.span.end = prev_end();
        return s;
    }

    static bool is_section_keyword( const std::string& w )
    {
        return w == "input" || w == "output" || w == "state" || w == "init" || w == "next";
    }

    declaration parse_decl()
    {
        declaration d;
        d.span.begin = peek().offset;
        d.name = identifier( "variable name" );
        expect_punct( ":" );
        if ( is_word( "bool" ) )
        {
            advance();
            d.domain = var_domain::boolean();
        }
        else if ( is_word( "enum" ) )
        {
            advance();
            expect_punct( "{" );
            std::vector<std::string> lits;
            do
                lits.push_back( identifier( "enum literal" ) );
            while ( accept_punct( "," ) );
            expect_punct( "}" );
            d.domain = var_domain::enumeration( std::move( lits ) );
        }
        else if ( is_word( "int" ) )
        {
            advance();
            expect_punct( "[" );
            auto lo = signed_integer();
            expect_punct( ".." );
            auto hi = signed_integer();
            expect_punct( "]" );
            if ( lo > hi )
                fail( "empty integer range" );
            d.domain = var_domain::integer( lo, hi );
        }
        else
            fail( "expected type (bool, enum, int) but found " + describe( peek() ) );
        expect_punct( ";" );
        d.span.end = prev_end();
        return d;
    }

    assignment parse_assign()
    {
        assignment a;
        a.span.begin = peek().offset;
        a.target = identifier( "assigned variable" );
        expect_punct( ":=" );
        a.rhs = expression();
        expect_punct( ";" );
        a.span.end = prev_end();
        return a;
    }

    static std::shared_ptr<expr> node( expr_kind k, std::size_t begin )
    {
        auto e = std::make_shared<expr>();
        e->kind = k;
        e->span.begin = begin;
        return e;
    }

    expr_ptr expression()
    {
        if ( is_word( "if" ) )
            return ite();
        return implication();
    }

    expr_ptr ite()
    {
        auto e = node( expr_kind::ite, peek().offset );
        expect_word( "if" );
        auto branch = [&] {
            expect_punct( "(" );
            e->args.push_back( expression() );
            expect_punct( ")" );
            expect_punct( ":" );
            e->args.push_back( expression() );
        };
        branch();
        while ( is_word( "elif" ) )
        {
            advance();
            branch();
        }
        if ( !is_word( "else" ) )
            fail( "if-chain must end with 'else', found " + describe( peek() ) );
        advance();
        expect_punct( ":" );
        e->args.push_back( expression() );
        e->span.end = prev_end();
        return e;
    }

    expr_ptr make_binary( pred_op op, expr_ptr l, expr_ptr r, source_span op_span )
    {
        auto e = node( expr_kind::binary, l->span.begin );
        e->op = op;
        e->op_span = op_span;
        e->span.end = r->span.end;
        e->args = { std::move( l ), std::move( r ) };
        return e;
    }

    expr_ptr implication()
    {
        auto l = iff();
        if ( is_punct( "->" ) )
        {
            source_span os{ peek().offset, peek().offset + 2 };
            advance();
            auto r = is_word( "if" ) ? ite() : implication();
            return make_binary( pred_op::implies, l, r, os );
        }
        return l;
    }

    template <typename Next, typename Match>
    expr_ptr left_assoc( Next next, Match match )
    {
        auto l = ( this->*next )();
        while ( true )
        {
            auto op = ( this->*match )();
            if ( !op )
                return l;
            source_span os{ peek().offset, peek().offset + peek().text.size() };
            advance();
            auto r = ( this->*next )();
            l = make_binary( *op, l, r, os );
        }
    }

    std::optional<pred_op> match_iff() const
    {
        if ( is_punct( "<->" ) )
            return pred_op::iff;
        return std::nullopt;
    }
    std::optional<pred_op> match_or() const
    {
        if ( is_punct( "|" ) || is_punct( "||" ) )
            return pred_op::or_;
        if ( is_word( "xor" ) )
            return pred_op::xor_;
        if ( is_word( "xnor" ) )
            return pred_op::xnor;
        return std::nullopt;
    }
    std::optional<pred_op> match_and() const
    {
        if ( is_punct( "&" ) || is_punct( "&&" ) )
            return pred_op::and_;
        return std::nullopt;
    }
    std::optional<pred_op> match_cmp() const
    {
        if ( peek().kind != tok::punct )
            return std::nullopt;
        const auto& t = peek().text;
        if ( t == "=" || t == "==" )
            return pred_op::eq;
        if ( t == "!=" )
            return pred_op::ne;
        if ( t == "<" )
            return pred_op::lt;
        if ( t == "<=" )
            return pred_op::le;
        if ( t == ">" )
            return pred_op::gt;
        if ( t == ">=" )
            return pred_op::ge;
        return std::nullopt;
    }
    std::optional<pred_op> match_add() const
    {
        if ( is_punct( "+" ) )
            return pred_op::add;
        if ( is_punct( "-" ) )
            return pred_op::sub;
        return std::nullopt;
    }

    expr_ptr iff() { return left_assoc( &parser::disjunction, &parser::match_iff ); }
    expr_ptr disjunction() { return left_assoc( &parser::conjunction, &parser::match_or ); }
    expr_ptr conjunction() { return left_assoc( &parser::comparison, &parser::match_and ); }
    expr_ptr comparison() { return left_assoc( &parser::additive, &parser::match_cmp ); }
    expr_ptr additive() { return left_assoc( &parser::unary, &parser::match_add ); }

    expr_ptr unary()
    {
        std::optional<pred_op> op;
        if ( is_punct( "!" ) )
            op = pred_op::not_;
        else if ( is_punct( "-" ) )
            op = pred_op::neg;
        else if ( is_punct( "+" ) )
            op = pred_op::pos;
        if ( !op )
            return primary();
        auto e = node( expr_kind::unary, peek().offset );
        e->op = *op;
        e->op_span = { peek().offset, peek().offset + 1 };
        advance();
        e->args.push_back( unary() );
        e->span.end = e->args[0]->span.end;
        return e;
    }

    expr_ptr primary()
    {
        const auto& t = peek();
        std::size_t begin = t.offset;
        if ( t.kind == tok::integer )
        {
            auto e = node( expr_kind::int_lit, begin );
            e->int_value = to_int( advance() );
            e->span.end = prev_end();
            return e;
        }
        if ( t.kind == tok::ident )
        {
            if ( t.text == "true" || t.text == "TRUE" || t.text == "false" || t.text == "FALSE" )
            {
                auto e = node( expr_kind::bool_lit, begin );
                e->bool_value = t.text == "true" || t.text == "TRUE";
                advance();
                e->span.end = prev_end();
                return e;
            }
            auto e = node( expr_kind::ident, begin );
            e->name = identifier( "expression" );
            if ( is_punct( "'" ) )
            {
                if ( !allow_primes_ )
                    fail( "primed variables are not allowed in models" );
                advance();
                e->primed = true;
            }
            e->span.end = prev_end();
            return e;
        }
        if ( accept_punct( "{" ) )
        {
            auto e = node( expr_kind::set, begin );
            do
                e->args.push_back( expression() );
            while ( accept_punct( "," ) );
            expect_punct( "}" );
            e->span.end = prev_end();
            return e;
        }
        if ( accept_punct( "(" ) )
        {
            auto inner = expression();
            if ( accept_punct( "?" ) )
            {
                auto e = node( expr_kind::ternary, begin );
                e->args.push_back( inner );
                e->args.push_back( expression() );
                expect_punct( ":" );
                e->args.push_back( expression() );
                expect_punct( ")" );
                e->span.end = prev_end();
                return e;
            }
            expect_punct( ")" );
            auto copy = std::make_shared<expr>( *inner );
            copy->parens = true;
            copy->span = { begin, prev_end() };
            return copy;
        }
        fail( "expected expression but found " + describe( t ) );
    }

    std::string_view src_;
    std::vector<token> toks_;
    std::size_t pos_ = 0;
    bool allow_primes_;
};

class checker
{
public:
    checker( std::string_view src, const model_ast& m ) : src_( src ), m_( m ) {}

    void run()
    {
        if ( m_.sections.empty() )
        {
            diags_.push_back( { 1, 1, "no sections" } );
            return;
        }
        collect_declarations();
        check_assignments();
    }

    std::vector<diagnostic> diags_;

private:
    void error( std::size_t offset, std::string msg ) { diags_.push_back( at( src_, offset, std::move( msg ) ) ); }

    void collect_declarations()
    {
        for ( const auto& s : m_.sections )
            for ( const auto& d : s.decls )
            {
                var_role role = s.kind == section_kind::input    ? var_role::input
                                : s.kind == section_kind::output ? var_role::output
                                                                 : var_role::state;
                if ( !vars_.emplace( d.name, role ).second )
                    error( d.span.begin, "'" + d.name + "' declared twice" );
                if ( role == var_role::output && d.domain.kind() != domain_kind::enumeration )
                    error( d.span.begin, "output '" + d.name + "' must have an enum type" );
                std::set<std::string> lits;
                for ( const auto& l : d.domain.literals() )
                {
                    if ( !lits.insert( l ).second )
                        error( d.span.begin, "literal '" + l + "' repeated in the type of '" + d.name + "'" );
                    literals_.insert( l );
                }
                if ( role == var_role::output )
                    literals_.insert( "eps" );
            }
        for ( const auto& l : literals_ )
            if ( vars_.count( l ) )
                error( 0, "enum literal '" + l + "' clashes with a variable name" );
    }

    void check_assignments()
    {
        for ( auto block : { section_kind::init, section_kind::next } )
        {
            std::set<std::string> assigned;
            const char* bname = keyword( block );
            for ( const auto& s : m_.sections )
            {
                if ( s.kind != block )
                    continue;
                for ( const auto& a : s.assigns )
                {
                    auto it = vars_.find( a.target );
                    if ( it == vars_.end() )
                        error( a.span.begin, "assignment to undeclared variable '" + a.target + "'" );
                    else if ( it->second == var_role::input )
                        error( a.span.begin, "input '" + a.target + "' cannot be assigned" );
                    else if ( !assigned.insert( a.target ).second )
                        error( a.span.begin, a.target + " assigned twice in " + bname );
                    check_rhs( *a.rhs, block, a.target );
                }
            }
            for ( const auto& [name, role] : vars_ )
                if ( role != var_role::input && !assigned.count( name ) )
                    error( 0, name + " unassigned in " + bname );
        }
    }

    void check_rhs( const expr& e, section_kind block, const std::string& target )
    {
        switch ( e.kind )
        {
        case expr_kind::set:
            for ( const auto& a : e.args )
                check_expr( *a, block, target );
            return;
        case expr_kind::ite:
            for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
            {
                check_expr( *e.args[i], block, target );
                check_rhs( *e.args[i + 1], block, target );
            }
            check_rhs( *e.args.back(), block, target );
            return;
        case expr_kind::ternary:
            check_expr( *e.args[0], block, target );
            check_rhs( *e.args[1], block, target );
            check_rhs( *e.args[2], block, target );
            return;
        default:
            check_expr( e, block, target );
        }
    }

    void check_expr( const expr& e, section_kind block, const std::string& target )
    {
        if ( e.kind == expr_kind::set )
        {
            error( e.span.begin, "set-choice only allowed as an assignment value" );
            return;
        }
        if ( e.kind == expr_kind::ident )
        {
            auto it = vars_.find( e.name );
            if ( it == vars_.end() )
            {
                if ( !literals_.count( e.name ) )
                    error( e.span.begin, "unknown identifier '" + e.name + "'" );
            }
            else if ( block == section_kind::init && e.name != "mut" )
                error( e.span.begin, "init(" + target + ") may only use constants, found '" + e.name + "'" );
            else if ( block == section_kind::next && it->second == var_role::output )
                error( e.span.begin, "next(" + target + ") reads output '" + e.name + "'" );
        }
        for ( const auto& a : e.args )
            check_expr( *a, block, target );
    }

    std::string_view src_;
    const model_ast& m_;
    std::map<std::string, var_role> vars_;
    std::set<std::string> literals_;
};

} // namespace

model_ast parse_model( std::string_view text )
{
    parser p( text, false );
    auto m = p.model();
    checker c( text, m );
    c.run();
    if ( !c.diags_.empty() )
        throw parse_error( std::move( c.diags_ ) );
    return m;
}

expr_ptr parse_expression( std::string_view text, bool allow_primes )
{
    parser p( text, allow_primes );
    return p.lone_expression();
}

} // namespace mutkill
