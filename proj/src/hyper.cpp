#include "mutkill/hyper.hpp"
#include "mutkill/errors.hpp"
#include "mutkill/mutation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <deque>
#include <unordered_map>

#include <omp.h>

namespace mutkill
{

// ---- formula trees

namespace ltl_ops
{

namespace
{
ltl_ptr make( ltl_kind k, std::vector<ltl_ptr> args )
{
    auto n = std::make_shared<ltl>();
    n->kind = k;
    n->args = std::move( args );
    return n;
}
} // namespace

ltl_ptr tt()
{
    return make( ltl_kind::tt, {} );
}
ltl_ptr ff()
{
    return make( ltl_kind::ff, {} );
}
ltl_ptr atom( std::string ap, std::string trace )
{
    auto n = std::make_shared<ltl>();
    n->kind = ltl_kind::atom;
    n->ap = std::move( ap );
    n->trace = std::move( trace );
    return n;
}
ltl_ptr neg( ltl_ptr a )
{
    return make( ltl_kind::neg, { std::move( a ) } );
}
ltl_ptr conj( std::vector<ltl_ptr> args )
{
    if ( args.empty() )
        return tt();
    if ( args.size() == 1 )
        return args.front();
    return make( ltl_kind::conj, std::move( args ) );
}
ltl_ptr disj( std::vector<ltl_ptr> args )
{
    if ( args.empty() )
        return ff();
    if ( args.size() == 1 )
        return args.front();
    return make( ltl_kind::disj, std::move( args ) );
}
ltl_ptr implies( ltl_ptr a, ltl_ptr b )
{
    return make( ltl_kind::implies, { std::move( a ), std::move( b ) } );
}
ltl_ptr iff( ltl_ptr a, ltl_ptr b )
{
    return make( ltl_kind::iff, { std::move( a ), std::move( b ) } );
}
ltl_ptr next( ltl_ptr a )
{
    return make( ltl_kind::next, { std::move( a ) } );
}
ltl_ptr until( ltl_ptr a, ltl_ptr b )
{
    return make( ltl_kind::until, { std::move( a ), std::move( b ) } );
}
ltl_ptr eventually( ltl_ptr a )
{
    return make( ltl_kind::eventually, { std::move( a ) } );
}
ltl_ptr always( ltl_ptr a )
{
    return make( ltl_kind::always, { std::move( a ) } );
}

} // namespace ltl_ops

bool same_structure( const ltl_ptr& a, const ltl_ptr& b )
{
    if ( a->kind != b->kind || a->ap != b->ap || a->trace != b->trace || a->args.size() != b->args.size() )
        return false;
    for ( std::size_t k = 0; k < a->args.size(); ++k )
        if ( !same_structure( a->args[k], b->args[k] ) )
            return false;
    return true;
}

// ---- text

namespace
{

int prec( ltl_kind k )
{
    switch ( k )
    {
    case ltl_kind::implies:
        return 1;
    case ltl_kind::iff:
        return 2;
    case ltl_kind::disj:
        return 3;
    case ltl_kind::conj:
        return 4;
    case ltl_kind::until:
        return 5;
    case ltl_kind::neg:
    case ltl_kind::next:
    case ltl_kind::eventually:
    case ltl_kind::always:
        return 6;
    default:
        return 7;
    }
}

void print( std::string& out, const ltl_ptr& f, int min_prec )
{
    bool paren = prec( f->kind ) < min_prec;
    if ( paren )
        out += '(';
    auto infix = [&]( const char* op, int left, int right ) {
        print( out, f->args[0], left );
        out += op;
        print( out, f->args[1], right );
    };
    auto nary = [&]( const char* op ) {
        for ( std::size_t k = 0; k < f->args.size(); ++k )
        {
            if ( k )
                out += op;
            print( out, f->args[k], prec( f->kind ) + 1 );
        }
    };
    auto temporal = [&]( char op ) {
        out += op;
        out += '(';
        print( out, f->args[0], 0 );
        out += ')';
    };
    switch ( f->kind )
    {
    case ltl_kind::tt:
        out += "true";
        break;
    case ltl_kind::ff:
        out += "false";
        break;
    case ltl_kind::atom:
        out += f->ap + "@" + f->trace;
        break;
    case ltl_kind::neg:
        out += '!';
        print( out, f->args[0], 6 );
        break;
    case ltl_kind::conj:
        nary( " & " );
        break;
    case ltl_kind::disj:
        nary( " | " );
        break;
    case ltl_kind::implies:
        infix( " -> ", 2, 1 );
        break;
    case ltl_kind::iff:
        infix( " <-> ", 2, 3 );
        break;
    case ltl_kind::until:
        infix( " U ", 6, 5 );
        break;
    case ltl_kind::next:
        temporal( 'X' );
        break;
    case ltl_kind::eventually:
        temporal( 'F' );
        break;
    case ltl_kind::always:
        temporal( 'G' );
        break;
    }
    if ( paren )
        out += ')';
}

class formula_parser
{
public:
    explicit formula_parser( std::string_view text ) : s_( text ) {}

    hyper_formula parse()
    {
        hyper_formula f;
        for ( ;; )
        {
            skip();
            if ( keyword( "exists" ) )
                f.prefix.push_back( { quantifier::exists, quant_var() } );
            else if ( keyword( "forall" ) )
                f.prefix.push_back( { quantifier::forall, quant_var() } );
            else
                break;
        }
        f.body = implication();
        skip();
        if ( pos_ != s_.size() )
            fail( "unexpected '" + std::string( 1, s_[pos_] ) + "'" );
        return f;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail( const std::string& msg ) const
    {
        std::size_t line = 1, col = 1;
        for ( std::size_t k = 0; k < pos_ && k < s_.size(); ++k )
        {
            if ( s_[k] == '\n' )
            {
                ++line;
                col = 1;
            }
            else
                ++col;
        }
        throw parse_error( { { line, col, msg } } );
    }

    void skip()
    {
        while ( pos_ < s_.size() )
        {
            if ( std::isspace( static_cast<unsigned char>( s_[pos_] ) ) )
                ++pos_;
            else if ( s_[pos_] == '#' || s_.substr( pos_, 2 ) == "//" )
                while ( pos_ < s_.size() && s_[pos_] != '\n' )
                    ++pos_;
            else
                break;
        }
    }

    static bool ident_char( char c ) { return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_'; }

    bool peek( std::string_view tok )
    {
        skip();
        return s_.substr( pos_, tok.size() ) == tok;
    }

    bool accept( std::string_view tok )
    {
        if ( !peek( tok ) )
            return false;
        pos_ += tok.size();
        return true;
    }

    bool keyword( std::string_view kw )
    {
        skip();
        if ( s_.substr( pos_, kw.size() ) != kw )
            return false;
        std::size_t end = pos_ + kw.size();
        if ( end < s_.size() && ( ident_char( s_[end] ) || s_[end] == '@' ) )
            return false;
        // X/F/G are operators unless used as an atom
        std::size_t k = end;
        while ( k < s_.size() && std::isspace( static_cast<unsigned char>( s_[k] ) ) )
            ++k;
        if ( k < s_.size() && s_[k] == '@' )
            return false;
        pos_ = end;
        return true;
    }

    std::string identifier()
    {
        skip();
        std::size_t b = pos_;
        while ( pos_ < s_.size() && ident_char( s_[pos_] ) )
            ++pos_;
        if ( b == pos_ )
            fail( "expected an identifier" );
        return std::string( s_.substr( b, pos_ - b ) );
    }

    std::string quant_var()
    {
        auto v = identifier();
        if ( !accept( "." ) )
            fail( "expected '.' after quantified trace variable" );
        return v;
    }

    ltl_ptr implication()
    {
        auto lhs = equivalence();
        if ( accept( "->" ) )
            return ltl_ops::implies( lhs, implication() );
        return lhs;
    }

    ltl_ptr equivalence()
    {
        auto lhs = disjunction();
        while ( accept( "<->" ) )
            lhs = ltl_ops::iff( lhs, disjunction() );
        return lhs;
    }

    ltl_ptr disjunction()
    {
        std::vector<ltl_ptr> args = { conjunction() };
        while ( accept( "||" ) || accept( "|" ) )
            args.push_back( conjunction() );
        return ltl_ops::disj( std::move( args ) );
    }

    ltl_ptr conjunction()
    {
        std::vector<ltl_ptr> args = { until() };
        while ( accept( "&&" ) || accept( "&" ) )
            args.push_back( until() );
        return ltl_ops::conj( std::move( args ) );
    }

    ltl_ptr until()
    {
        auto lhs = unary();
        if ( keyword( "U" ) )
            return ltl_ops::until( lhs, until() );
        return lhs;
    }

    ltl_ptr unary()
    {
        if ( accept( "!" ) )
            return ltl_ops::neg( unary() );
        if ( keyword( "X" ) )
            return ltl_ops::next( unary() );
        if ( keyword( "F" ) )
            return ltl_ops::eventually( unary() );
        if ( keyword( "G" ) )
            return ltl_ops::always( unary() );
        return primary();
    }

    ltl_ptr primary()
    {
        skip();
        if ( accept( "(" ) )
        {
            auto e = implication();
            if ( !accept( ")" ) )
                fail( "expected ')'" );
            return e;
        }
        if ( keyword( "true" ) )
            return ltl_ops::tt();
        if ( keyword( "false" ) )
            return ltl_ops::ff();
        std::string ap;
        if ( peek( "[" ) )
        {
            std::size_t b = pos_;
            auto e = s_.find( ']', b );
            if ( e == std::string_view::npos )
                fail( "unterminated '['" );
            for ( char c : s_.substr( b, e + 1 - b ) )
                if ( !std::isspace( static_cast<unsigned char>( c ) ) )
                    ap += c;
            pos_ = e + 1;
        }
        else if ( pos_ < s_.size() && ident_char( s_[pos_] ) )
            ap = identifier();
        else
            fail( pos_ < s_.size() ? "unexpected '" + std::string( 1, s_[pos_] ) + "'" : "unexpected end of formula" );
        if ( !accept( "@" ) )
            fail( "expected '@' and a trace variable after " + ap );
        return ltl_ops::atom( ap, identifier() );
    }
};

} // namespace

hyper_formula parse_hyper( std::string_view text )
{
    return formula_parser( text ).parse();
}

std::string to_string( const ltl_ptr& f )
{
    std::string out;
    print( out, f, 0 );
    return out;
}

std::string to_string( const hyper_formula& f )
{
    std::string out;
    for ( const auto& q : f.prefix )
        out += ( q.q == quantifier::exists ? "exists " : "forall " ) + q.var + ". ";
    return out + to_string( f.body );
}

// ---- killing formulas

std::vector<std::string> value_aps( const signature& sig, var_role role )
{
    std::vector<std::string> r;
    for ( const auto& v : sig.group( role ) )
        for ( std::size_t k = 0; k < v.domain.size(); ++k )
            r.push_back( "[" + v.name + "=" + v.domain.value_name( k ) + "]" );
    return r;
}

hyper_formula build_phi( int k, const std::vector<std::string>& input_aps, const std::vector<std::string>& output_aps,
                         phi_shape shape, const std::string& mut_ap )
{
    using namespace ltl_ops;
    auto mut = [&]( const std::string& v, bool on ) { return on ? atom( mut_ap, v ) : neg( atom( mut_ap, v ) ); };
    auto same_inputs = [&]( std::vector<ltl_ptr>& into, const std::vector<std::pair<std::string, std::string>>& pairs ) {
        for ( const auto& i : input_aps )
            for ( const auto& [a, b] : pairs )
                into.push_back( iff( atom( i, a ), atom( i, b ) ) );
    };
    auto diverge = [&]( const std::string& a, const std::string& b ) {
        std::vector<ltl_ptr> d;
        for ( const auto& o : output_aps )
            d.push_back( neg( iff( atom( o, a ), atom( o, b ) ) ) );
        return eventually( disj( std::move( d ) ) );
    };
    // outer: mut polarity of the existential trace; others: the universal ones
    auto assemble = [&]( bool outer, std::vector<ltl_ptr> others, ltl_ptr consequent ) {
        if ( shape == phi_shape::literal )
        {
            others.insert( others.begin(), mut( "p", outer ) );
            return implies( always( conj( std::move( others ) ) ), std::move( consequent ) );
        }
        return conj( { always( mut( "p", outer ) ), implies( always( conj( std::move( others ) ) ), std::move( consequent ) ) } );
    };

    hyper_formula f;
    switch ( k )
    {
    case 1: {
        f.prefix = { { quantifier::exists, "p" }, { quantifier::exists, "q" } };
        std::vector<ltl_ptr> g = { mut( "p", false ), mut( "q", true ) };
        same_inputs( g, { { "p", "q" } } );
        f.body = conj( { always( conj( std::move( g ) ) ), diverge( "p", "q" ) } );
        break;
    }
    case 2: {
        f.prefix = { { quantifier::exists, "p" }, { quantifier::forall, "q" } };
        std::vector<ltl_ptr> g = { mut( "q", false ) };
        same_inputs( g, { { "p", "q" } } );
        f.body = assemble( true, std::move( g ), diverge( "p", "q" ) );
        break;
    }
    case 3: {
        f.prefix = { { quantifier::exists, "p" }, { quantifier::forall, "q" }, { quantifier::forall, "r" } };
        std::vector<ltl_ptr> g = { mut( "q", true ), mut( "r", false ) };
        same_inputs( g, { { "p", "q" }, { "p", "r" } } );
        f.body = assemble( false, std::move( g ), diverge( "q", "r" ) );
        break;
    }
    case 4: {
        f.prefix = { { quantifier::exists, "p" }, { quantifier::forall, "q" } };
        std::vector<ltl_ptr> g = { mut( "q", true ) };
        same_inputs( g, { { "p", "q" } } );
        f.body = assemble( false, std::move( g ), diverge( "p", "q" ) );
        break;
    }
    default:
        throw eval_error( "no killing formula phi" + std::to_string( k ) );
    }
    return f;
}

// ---- propositions

namespace
{

struct ap_ref
{
    var_role role;
    std::size_t var;
    std::int32_t value;
};

ap_ref resolve_ap( const signature& sig, const std::string& name )
{
    auto find_var = [&]( std::string_view v ) -> std::optional<std::pair<var_role, std::size_t>> {
        for ( auto r : { var_role::input, var_role::output, var_role::state } )
            if ( auto i = sig.find( r, v ) )
                return std::pair{ r, *i };
        return std::nullopt;
    };
    if ( name.size() > 2 && name.front() == '[' && name.back() == ']' )
    {
        auto eq = name.find( '=' );
        if ( eq == std::string::npos )
            throw eval_error( "malformed proposition '" + name + "'" );
        auto var = name.substr( 1, eq - 1 );
        auto val = name.substr( eq + 1, name.size() - eq - 2 );
        auto ref = find_var( var );
        if ( !ref )
            throw eval_error( "unknown variable in proposition '" + name + "'" );
        const auto& d = sig.group( ref->first )[ref->second].domain;
        for ( std::size_t k = 0; k < d.size(); ++k )
            if ( d.value_name( k ) == val )
                return { ref->first, ref->second, static_cast<std::int32_t>( k ) };
        throw eval_error( "value outside the domain in proposition '" + name + "'" );
    }
    auto ref = find_var( name );
    if ( !ref || sig.group( ref->first )[ref->second].domain.kind() != domain_kind::boolean )
        throw eval_error( "unknown atomic proposition '" + name + "'" );
    return { ref->first, ref->second, 1 };
}

// propositions and trace variables of a body, in first-use order
struct symbols
{
    std::vector<std::string> aps;
    std::vector<ap_ref> refs;
    std::map<std::string, int> ap_bit;
    std::map<std::string, int> var_index;
};

void collect( const ltl_ptr& f, symbols& sy, const signature& sig )
{
    if ( f->kind == ltl_kind::atom )
    {
        if ( !sy.var_index.count( f->trace ) )
            throw eval_error( "trace variable '" + f->trace + "' is not quantified" );
        if ( !sy.ap_bit.count( f->ap ) )
        {
            if ( sy.aps.size() == 64 )
                throw eval_error( "more than 64 atomic propositions" );
            sy.ap_bit.emplace( f->ap, static_cast<int>( sy.aps.size() ) );
            sy.aps.push_back( f->ap );
            sy.refs.push_back( resolve_ap( sig, f->ap ) );
        }
    }
    for ( const auto& a : f->args )
        collect( a, sy, sig );
}

symbols analyse( const signature& sig, const hyper_formula& f )
{
    symbols sy;
    for ( std::size_t k = 0; k < f.prefix.size(); ++k )
        if ( !sy.var_index.emplace( f.prefix[k].var, static_cast<int>( k ) ).second )
            throw eval_error( "trace variable '" + f.prefix[k].var + "' quantified twice" );
    collect( f.body, sy, sig );
    return sy;
}

std::uint64_t letter_of( const symbols& sy, var_role role, const valuation* v )
{
    std::uint64_t bits = 0;
    if ( !v )
        return 0;
    for ( std::size_t k = 0; k < sy.refs.size(); ++k )
        if ( sy.refs[k].role == role && v->idx[sy.refs[k].var] == sy.refs[k].value )
            bits |= std::uint64_t{ 1 } << k;
    return bits;
}

std::vector<std::uint64_t> letters_of( const symbols& sy, const trace& t )
{
    std::vector<std::uint64_t> r;
    for ( const auto& st : t )
        r.push_back( letter_of( sy, var_role::input, st.input ? &*st.input : nullptr ) |
                     letter_of( sy, var_role::output, &st.output ) | letter_of( sy, var_role::state, &st.state ) );
    return r;
}

// direct bounded semantics over letter sequences
bool sat( const ltl_ptr& f, const symbols& sy, const std::vector<const std::vector<std::uint64_t>*>& tuple, std::size_t pos,
          std::size_t last )
{
    switch ( f->kind )
    {
    case ltl_kind::tt:
        return true;
    case ltl_kind::ff:
        return false;
    case ltl_kind::atom:
        return ( ( *tuple[sy.var_index.at( f->trace )] )[pos] >> sy.ap_bit.at( f->ap ) ) & 1;
    case ltl_kind::neg:
        return !sat( f->args[0], sy, tuple, pos, last );
    case ltl_kind::conj:
        return std::all_of( f->args.begin(), f->args.end(),
                            [&]( const ltl_ptr& a ) { return sat( a, sy, tuple, pos, last ); } );
    case ltl_kind::disj:
        return std::any_of( f->args.begin(), f->args.end(),
                            [&]( const ltl_ptr& a ) { return sat( a, sy, tuple, pos, last ); } );
    case ltl_kind::implies:
        return !sat( f->args[0], sy, tuple, pos, last ) || sat( f->args[1], sy, tuple, pos, last );
    case ltl_kind::iff:
        return sat( f->args[0], sy, tuple, pos, last ) == sat( f->args[1], sy, tuple, pos, last );
    case ltl_kind::next:
        return pos < last && sat( f->args[0], sy, tuple, pos + 1, last );
    case ltl_kind::until:
        for ( std::size_t i = pos; i <= last; ++i )
        {
            if ( sat( f->args[1], sy, tuple, i, last ) )
                return true;
            if ( !sat( f->args[0], sy, tuple, i, last ) )
                return false;
        }
        return false;
    case ltl_kind::eventually:
        for ( std::size_t i = pos; i <= last; ++i )
            if ( sat( f->args[0], sy, tuple, i, last ) )
                return true;
        return false;
    case ltl_kind::always:
        for ( std::size_t i = pos; i <= last; ++i )
            if ( !sat( f->args[0], sy, tuple, i, last ) )
                return false;
        return true;
    }
    return false;
}

// ---- progression over hash-consed formulas

class progressor
{
public:
    static constexpr int TT = 0;
    static constexpr int FF = 1;

    explicit progressor( std::size_t vars ) : vars_( vars )
    {
        node( op::tt, -1, -1, -1 );
        node( op::ff, -1, -1, -1 );
    }

    int compile( const ltl_ptr& f, const symbols& sy )
    {
        switch ( f->kind )
        {
        case ltl_kind::tt:
            return TT;
        case ltl_kind::ff:
            return FF;
        case ltl_kind::atom:
            return node( op::atom, -1, -1, sy.var_index.at( f->trace ) * 64 + sy.ap_bit.at( f->ap ) );
        case ltl_kind::neg:
            return mk_not( compile( f->args[0], sy ) );
        case ltl_kind::conj: {
            int r = TT;
            for ( const auto& a : f->args )
                r = mk_and( r, compile( a, sy ) );
            return r;
        }
        case ltl_kind::disj: {
            int r = FF;
            for ( const auto& a : f->args )
                r = mk_or( r, compile( a, sy ) );
            return r;
        }
        case ltl_kind::implies:
            return mk_or( mk_not( compile( f->args[0], sy ) ), compile( f->args[1], sy ) );
        case ltl_kind::iff: {
            int a = compile( f->args[0], sy ), b = compile( f->args[1], sy );
            return mk_or( mk_and( a, b ), mk_and( mk_not( a ), mk_not( b ) ) );
        }
        case ltl_kind::next:
            return node( op::next, compile( f->args[0], sy ), -1, -1 );
        case ltl_kind::until:
            return node( op::until, compile( f->args[0], sy ), compile( f->args[1], sy ), -1 );
        case ltl_kind::eventually:
            return node( op::eventually, compile( f->args[0], sy ), -1, -1 );
        case ltl_kind::always:
            return node( op::always, compile( f->args[0], sy ), -1, -1 );
        }
        return FF;
    }

    // residual obligation for the rest of the tuple after one position
    int progress( int f, const std::uint64_t* letters, bool last )
    {
        if ( f <= FF )
            return f;
        memo_key key{};
        key[0] = static_cast<std::uint64_t>( f ) << 1 | ( last ? 1 : 0 );
        for ( std::size_t v = 0; v < vars_; ++v )
            key[v + 1] = letters[v];
        auto it = memo_.find( key );
        if ( it != memo_.end() )
            return it->second;
        int r = step( f, letters, last );
        memo_.emplace( key, r );
        return r;
    }

private:
    enum class op : std::uint8_t
    {
        tt,
        ff,
        atom,
        neg,
        conj,
        disj,
        next,
        until,
        eventually,
        always
    };
    struct entry
    {
        op o;
        int a, b, atom;
        bool operator==( const entry& ) const = default;
    };
    struct entry_hash
    {
        std::size_t operator()( const entry& e ) const noexcept
        {
            std::size_t h = static_cast<std::size_t>( e.o );
            for ( int x : { e.a, e.b, e.atom } )
                h = h * 1000003u ^ static_cast<std::size_t>( x + 1 );
            return h;
        }
    };
    using memo_key = std::array<std::uint64_t, 5>;
    struct key_hash
    {
        std::size_t operator()( const memo_key& k ) const noexcept
        {
            std::size_t h = 1469598103934665603ULL;
            for ( auto x : k )
                h = ( h ^ x ) * 1099511628211ULL;
            return h;
        }
    };

    std::size_t vars_;
    std::vector<entry> nodes_;
    std::unordered_map<entry, int, entry_hash> ids_;
    std::unordered_map<memo_key, int, key_hash> memo_;

    int node( op o, int a, int b, int atom )
    {
        entry e{ o, a, b, atom };
        auto [it, fresh] = ids_.emplace( e, static_cast<int>( nodes_.size() ) );
        if ( fresh )
            nodes_.push_back( e );
        return it->second;
    }

    int mk_not( int a )
    {
        if ( a == TT )
            return FF;
        if ( a == FF )
            return TT;
        if ( nodes_[a].o == op::neg )
            return nodes_[a].a;
        return node( op::neg, a, -1, -1 );
    }

    int mk_and( int a, int b )
    {
        if ( a == FF || b == FF )
            return FF;
        if ( a == TT )
            return b;
        if ( b == TT || a == b )
            return a;
        return node( op::conj, std::min( a, b ), std::max( a, b ), -1 );
    }

    int mk_or( int a, int b )
    {
        if ( a == TT || b == TT )
            return TT;
        if ( a == FF )
            return b;
        if ( b == FF || a == b )
            return a;
        return node( op::disj, std::min( a, b ), std::max( a, b ), -1 );
    }

    int step( int f, const std::uint64_t* letters, bool last )
    {
        const entry e = nodes_[f];
        switch ( e.o )
        {
        case op::tt:
            return TT;
        case op::ff:
            return FF;
        case op::atom:
            return ( letters[e.atom / 64] >> ( e.atom % 64 ) ) & 1 ? TT : FF;
        case op::neg:
            return mk_not( progress( e.a, letters, last ) );
        case op::conj: {
            int l = progress( e.a, letters, last );
            return l == FF ? FF : mk_and( l, progress( e.b, letters, last ) );
        }
        case op::disj: {
            int l = progress( e.a, letters, last );
            return l == TT ? TT : mk_or( l, progress( e.b, letters, last ) );
        }
        case op::next:
            return last ? FF : e.a;
        case op::until:
            return mk_or( progress( e.b, letters, last ), mk_and( progress( e.a, letters, last ), last ? FF : f ) );
        case op::eventually:
            return mk_or( progress( e.a, letters, last ), last ? FF : f );
        case op::always:
            return mk_and( progress( e.a, letters, last ), last ? TT : f );
        }
        return FF;
    }
};

// ---- explicit unfolding of the system up to a depth

struct graph
{
    struct edge
    {
        std::uint64_t output;
        int state;
        std::uint64_t letter;  // output and target state part
    };
    std::vector<valuation> inputs;
    std::vector<std::uint64_t> input_letters;
    std::vector<edge> initial;
    std::vector<std::vector<std::vector<edge>>> succ;  // [state][input], empty when not expanded
    std::vector<valuation> states;
};

graph explore( const sts& s, std::size_t depth, const symbols& sy, budget* b )
{
    graph g;
    state_space space( s, b );
    g.inputs = space.inputs();
    for ( const auto& i : g.inputs )
        g.input_letters.push_back( letter_of( sy, var_role::input, &i ) );
    std::unordered_map<std::uint64_t, std::uint64_t> out_letters;
    auto out_letter = [&]( std::uint64_t rank_ ) {
        auto it = out_letters.find( rank_ );
        if ( it == out_letters.end() )
        {
            auto v = unrank( s.sig(), var_role::output, rank_ );
            it = out_letters.emplace( rank_, letter_of( sy, var_role::output, &v ) ).first;
        }
        return it->second;
    };
    std::vector<std::uint64_t> state_letters;
    auto state_letter = [&]( int id ) {
        while ( state_letters.size() <= static_cast<std::size_t>( id ) )
        {
            const auto& v = space.state( static_cast<int>( state_letters.size() ) );
            state_letters.push_back( letter_of( sy, var_role::state, &v ) );
        }
        return state_letters[id];
    };
    auto convert = [&]( const state_space::edge& e ) {
        return graph::edge{ e.output, e.state, out_letter( e.output ) | state_letter( e.state ) };
    };

    std::vector<std::size_t> first_depth;
    std::deque<int> queue;
    auto reach = [&]( int id, std::size_t d ) {
        if ( first_depth.size() <= static_cast<std::size_t>( id ) )
            first_depth.resize( id + 1, SIZE_MAX );
        if ( first_depth[id] == SIZE_MAX )
        {
            first_depth[id] = d;
            queue.push_back( id );
        }
    };
    for ( const auto& e : space.initial() )
    {
        g.initial.push_back( convert( e ) );
        reach( e.state, 0 );
    }
    std::vector<std::vector<std::vector<graph::edge>>> succ;
    while ( !queue.empty() )
    {
        int id = queue.front();
        queue.pop_front();
        if ( first_depth[id] >= depth )
            continue;
        if ( succ.size() <= static_cast<std::size_t>( id ) )
            succ.resize( id + 1 );
        succ[id].resize( g.inputs.size() );
        for ( std::size_t i = 0; i < g.inputs.size(); ++i )
            for ( const auto& e : space.successors( id, i ) )
            {
                succ[id][i].push_back( convert( e ) );
                reach( e.state, first_depth[id] + 1 );
            }
    }
    succ.resize( space.state_count() );
    g.succ = std::move( succ );
    for ( std::size_t k = 0; k < space.state_count(); ++k )
        g.states.push_back( space.state( static_cast<int>( k ) ) );
    return g;
}

struct path_step
{
    int input;  // -1 at position 0
    std::uint64_t output;
    int state;
};

struct leaf
{
    std::vector<std::uint64_t> letters;
    std::vector<path_step> steps;
    std::vector<std::uint32_t> suffix;  // interned letters[pos..]
};

// equal letter suffixes get equal ids, so searches can be shared between leaves
void intern_suffixes( std::vector<leaf>& leaves )
{
    struct pair_hash
    {
        std::size_t operator()( const std::pair<std::uint64_t, std::uint32_t>& k ) const noexcept
        {
            return std::hash<std::uint64_t>{}( k.first * 0x9e3779b97f4a7c15ULL ^ k.second );
        }
    };
    std::unordered_map<std::pair<std::uint64_t, std::uint32_t>, std::uint32_t, pair_hash> ids;
    for ( auto& l : leaves )
    {
        l.suffix.assign( l.letters.size() + 1, 0 );
        for ( std::size_t pos = l.letters.size(); pos-- > 0; )
        {
            auto [it, fresh] =
                ids.emplace( std::pair{ l.letters[pos], l.suffix[pos + 1] }, static_cast<std::uint32_t>( ids.size() + 1 ) );
            l.suffix[pos] = it->second;
        }
    }
}

std::vector<leaf> all_paths( const graph& g, std::size_t depth, budget* b )
{
    std::vector<leaf> out;
    leaf cur;
    auto rec = [&]( auto&& self, int state ) -> void {
        if ( cur.steps.size() == depth + 1 )
        {
            out.push_back( cur );
            if ( b )
                b->charge();
            return;
        }
        for ( std::size_t i = 0; i < g.inputs.size(); ++i )
            for ( const auto& e : g.succ[state][i] )
            {
                cur.letters.push_back( g.input_letters[i] | e.letter );
                cur.steps.push_back( { static_cast<int>( i ), e.output, e.state } );
                self( self, e.state );
                cur.letters.pop_back();
                cur.steps.pop_back();
            }
    };
    for ( const auto& e : g.initial )
    {
        cur.letters = { e.letter };
        cur.steps = { { -1, e.output, e.state } };
        rec( rec, e.state );
    }
    return out;
}

leaf pinned_leaf( const sts& s, const graph& g, const trace& t, std::size_t depth )
{
    auto fail = []() -> leaf { throw eval_error( "pinned trace is not a prefix of the system" ); };
    if ( t.size() != depth + 1 )
        throw eval_error( "pinned trace has the wrong length" );
    leaf l;
    auto match = [&]( const std::vector<graph::edge>& es, std::uint64_t in_letter, int input, const trace_step& st ) {
        auto out = rank( s.sig(), var_role::output, st.output );
        for ( const auto& e : es )
            if ( e.output == out && g.states[e.state] == st.state )
            {
                l.letters.push_back( in_letter | e.letter );
                l.steps.push_back( { input, e.output, e.state } );
                return true;
            }
        return false;
    };
    if ( t[0].input || !match( g.initial, 0, -1, t[0] ) )
        return fail();
    for ( std::size_t j = 1; j < t.size(); ++j )
    {
        if ( !t[j].input )
            return fail();
        auto it = std::find( g.inputs.begin(), g.inputs.end(), *t[j].input );
        if ( it == g.inputs.end() )
            return fail();
        auto i = static_cast<std::size_t>( it - g.inputs.begin() );
        if ( !match( g.succ[l.steps.back().state][i], g.input_letters[i], static_cast<int>( i ), t[j] ) )
            return fail();
    }
    return l;
}

trace to_trace( const sts& s, const graph& g, const leaf& l )
{
    trace t;
    for ( const auto& st : l.steps )
    {
        trace_step ts;
        if ( st.input >= 0 )
            ts.input = g.inputs[st.input];
        ts.output = unrank( s.sig(), var_role::output, st.output );
        ts.state = g.states[st.state];
        t.push_back( std::move( ts ) );
    }
    return t;
}

class evaluator
{
public:
    evaluator( const graph& g, const std::vector<leaf>& leaves, const std::vector<quantified>& prefix, std::size_t fixed,
               std::size_t depth, progressor p, std::atomic<std::uint64_t>& nodes, std::uint64_t limit,
               std::atomic<bool>& stop )
        : g_( g ), leaves_( leaves ), prefix_( prefix ), fixed_( fixed ), depth_( depth ), prog_( std::move( p ) ),
          nodes_( nodes ), limit_( limit ), stop_( stop ), chosen_( prefix.size(), nullptr ),
          letters_( ( depth + 1 ) * prefix.size(), 0 )
    {
    }

    // value of the formula with the first quantifier bound to outer leaf k
    bool with_outer( std::size_t k, int f )
    {
        chosen_[0] = &leaves_[k];
        return fixed_level( 1, f );
    }

private:
    const graph& g_;
    const std::vector<leaf>& leaves_;
    const std::vector<quantified>& prefix_;
    std::size_t fixed_;
    std::size_t depth_;
    progressor prog_;
    std::atomic<std::uint64_t>& nodes_;
    std::uint64_t limit_;
    std::atomic<bool>& stop_;
    std::vector<const leaf*> chosen_;
    std::vector<std::uint64_t> letters_;  // [position][variable]
    std::vector<int> block_state_;

    // result per (position, residual, block states, remaining letters of the fixed traces)
    using memo_key = std::array<std::uint64_t, 4>;
    struct memo_hash
    {
        std::size_t operator()( const memo_key& k ) const noexcept
        {
            std::size_t h = 1469598103934665603ULL;
            for ( auto x : k )
                h = ( h ^ x ) * 1099511628211ULL;
            return h;
        }
    };
    std::unordered_map<memo_key, bool, memo_hash> seen_;

    bool fixed_level( std::size_t v, int f )
    {
        if ( v == fixed_ )
        {
            block_state_.assign( prefix_.size(), -1 );
            return dfs( 0, f );
        }
        bool ex = prefix_[v].q == quantifier::exists;
        for ( const auto& l : leaves_ )
        {
            chosen_[v] = &l;
            if ( fixed_level( v + 1, f ) == ex )
                return ex;
            if ( stop_.load( std::memory_order_relaxed ) )
                return false;
        }
        return !ex;
    }

    void charge()
    {
        if ( nodes_.fetch_add( 1, std::memory_order_relaxed ) + 1 > limit_ )
            stop_.store( true, std::memory_order_relaxed );
    }

    bool dfs( std::size_t pos, int f )
    {
        if ( f == progressor::TT || f == progressor::FF )
            return f == progressor::TT;
        if ( pos > depth_ || stop_.load( std::memory_order_relaxed ) )
            return false;
        memo_key key{ static_cast<std::uint64_t>( pos ) << 40 | static_cast<std::uint64_t>( f ), 0, 0, 0 };
        for ( std::size_t v = fixed_; v < prefix_.size(); ++v )
            key[1] = key[1] << 21 | static_cast<std::uint64_t>( block_state_[v] + 1 );
        for ( std::size_t u = 0; u < fixed_; ++u )
            key[2 + u / 2] |= static_cast<std::uint64_t>( chosen_[u]->suffix[pos] ) << ( 32 * ( u % 2 ) );
        if ( auto it = seen_.find( key ); it != seen_.end() )
            return it->second;
        charge();
        bool ex = fixed_ < prefix_.size() && prefix_[fixed_].q == quantifier::exists;
        bool r = product( pos, f, fixed_, ex );
        seen_.emplace( key, r );
        return r;
    }

    // choose the children of block variables v.. at position pos
    bool product( std::size_t pos, int f, std::size_t v, bool ex )
    {
        if ( v == prefix_.size() )
        {
            auto* row = letters_.data() + pos * prefix_.size();
            for ( std::size_t u = 0; u < fixed_; ++u )
                row[u] = chosen_[u]->letters[pos];
            int r = prog_.progress( f, row, pos == depth_ );
            return dfs( pos + 1, r );
        }
        auto try_edge = [&]( const graph::edge& e, std::uint64_t in_letter ) {
            letters_[pos * prefix_.size() + v] = in_letter | e.letter;
            int prev = block_state_[v];
            block_state_[v] = e.state;
            bool r = product( pos, f, v + 1, ex );
            block_state_[v] = prev;
            return r;
        };
        if ( pos == 0 )
        {
            for ( const auto& e : g_.initial )
                if ( try_edge( e, 0 ) == ex )
                    return ex;
        }
        else
        {
            const auto& out = g_.succ[block_state_[v]];
            for ( std::size_t i = 0; i < out.size(); ++i )
                for ( const auto& e : out[i] )
                    if ( try_edge( e, g_.input_letters[i] ) == ex )
                        return ex;
        }
        return !ex;
    }
};

} // namespace

hyper_verdict eval_bounded( const sts& s, const hyper_formula& f, std::size_t depth, const hyper_options& opts )
{
    if ( f.prefix.empty() )
        throw eval_error( "formula has no trace quantifier" );
    if ( f.prefix.size() > 4 )
        throw eval_error( "at most four trace quantifiers are supported" );
    auto sy = analyse( s.sig(), f );

    budget b( opts.budget_limit );
    auto g = explore( s, depth, sy, &b );
    std::vector<leaf> leaves;
    if ( opts.pin )
        leaves.push_back( pinned_leaf( s, g, *opts.pin, depth ) );
    else
        leaves = all_paths( g, depth, &b );
    intern_suffixes( leaves );

    // trailing block of like quantifiers is explored jointly; the rest is enumerated
    std::size_t fixed = f.prefix.size();
    while ( fixed > 1 && f.prefix[fixed - 1].q == f.prefix.back().q )
        --fixed;
    fixed = std::max<std::size_t>( fixed, 1 );

    progressor base( f.prefix.size() );
    int root = base.compile( f.body, sy );

    hyper_verdict v;
    v.bound = depth;
    v.outer_candidates = leaves.size();
    const bool ex = f.prefix[0].q == quantifier::exists;

    std::atomic<std::uint64_t> nodes{ b.used() };
    std::atomic<bool> stop{ false };
    std::atomic<std::size_t> decisive{ leaves.size() };  // smallest leaf deciding the outer quantifier
    const auto n = static_cast<std::int64_t>( leaves.size() );

    auto run = [&]( evaluator& ev, std::int64_t k ) {
        if ( static_cast<std::size_t>( k ) >= decisive.load( std::memory_order_relaxed ) ||
             stop.load( std::memory_order_relaxed ) )
            return;
        if ( ev.with_outer( static_cast<std::size_t>( k ), root ) == ex && !stop.load( std::memory_order_relaxed ) )
        {
            auto cur = decisive.load();
            while ( static_cast<std::size_t>( k ) < cur && !decisive.compare_exchange_weak( cur, k ) )
                ;
        }
    };

    if ( opts.workers <= 1 )
    {
        evaluator ev( g, leaves, f.prefix, fixed, depth, base, nodes, opts.budget_limit, stop );
        for ( std::int64_t k = 0; k < n; ++k )
            run( ev, k );
    }
    else
    {
#pragma omp parallel num_threads( opts.workers )
        {
            evaluator ev( g, leaves, f.prefix, fixed, depth, base, nodes, opts.budget_limit, stop );
#pragma omp for schedule( dynamic, 64 )
            for ( std::int64_t k = 0; k < n; ++k )
                run( ev, k );
        }
    }
    v.nodes = nodes.load();
    if ( stop.load() )
        throw budget_exhausted( "budget of " + std::to_string( opts.budget_limit ) + " nodes exhausted" );

    bool found = decisive.load() < leaves.size();
    v.holds = ex ? found : !found;
    if ( ex && found )
        v.witness = to_trace( s, g, leaves[decisive.load()] );
    return v;
}

hyper_verdict eval_bounded_reference( const sts& s, const hyper_formula& f, std::size_t depth, budget* b )
{
    if ( f.prefix.empty() )
        throw eval_error( "formula has no trace quantifier" );
    auto sy = analyse( s.sig(), f );
    auto traces = enumerate_traces( s, depth, b );
    std::vector<std::vector<std::uint64_t>> letters;
    for ( const auto& t : traces )
        letters.push_back( letters_of( sy, t ) );

    std::vector<const std::vector<std::uint64_t>*> tuple( f.prefix.size() );
    auto rec = [&]( auto&& self, std::size_t v ) -> bool {
        if ( v == f.prefix.size() )
        {
            if ( b )
                b->charge();
            return sat( f.body, sy, tuple, 0, depth );
        }
        bool ex = f.prefix[v].q == quantifier::exists;
        for ( const auto& l : letters )
        {
            tuple[v] = &l;
            if ( self( self, v + 1 ) == ex )
                return ex;
        }
        return !ex;
    };

    hyper_verdict v;
    v.bound = depth;
    v.outer_candidates = traces.size();
    bool ex = f.prefix[0].q == quantifier::exists;
    for ( std::size_t k = 0; k < traces.size(); ++k )
    {
        tuple[0] = &letters[k];
        if ( rec( rec, 1 ) == ex )
        {
            v.holds = ex;
            if ( ex )
                v.witness = traces[k];
            return v;
        }
    }
    v.holds = !ex;
    return v;
}

bool evaluate_body( const signature& sig, const ltl_ptr& body, const std::map<std::string, trace>& assignment )
{
    hyper_formula f;
    for ( const auto& [name, t] : assignment )
        f.prefix.push_back( { quantifier::exists, name } );
    f.body = body;
    auto sy = analyse( sig, f );
    std::vector<std::vector<std::uint64_t>> letters;
    std::optional<std::size_t> len;
    for ( const auto& [name, t] : assignment )
    {
        if ( t.empty() || ( len && *len != t.size() ) )
            throw eval_error( "trace assignment needs non-empty prefixes of equal length" );
        len = t.size();
        letters.push_back( letters_of( sy, t ) );
    }
    if ( !len )
        throw eval_error( "empty trace assignment" );
    std::vector<const std::vector<std::uint64_t>*> tuple;
    for ( const auto& l : letters )
        tuple.push_back( &l );
    return sat( body, sy, tuple, 0, *len - 1 );
}

test_case witness_to_test( const sts& cm, const trace& w, int phi, budget* b )
{
    if ( phi < 1 || phi > 4 )
        throw eval_error( "no killing formula phi" + std::to_string( phi ) );
    if ( w.empty() )
        throw eval_error( "zero-length witness has no divergence position" );
    auto mi = cm.sig().find( var_role::state, "mut" );
    if ( !mi )
        throw eval_error( "witness is not a trace of a conditional mutant" );
    bool want = phi == 2;
    if ( ( w.front().state.idx[*mi] == 1 ) != want )
        throw eval_error( std::string( "witness of phi" ) + std::to_string( phi ) + " must be a " +
                          ( want ? "mutant" : "original" ) + " trace" );

    auto original = project( cm, false );
    auto mutant = project( cm, true );
    std::vector<valuation> inputs;
    for ( std::size_t j = 1; j < w.size(); ++j )
        inputs.push_back( *w[j].input );
    test_case full;
    if ( want )
    {
        auto t = original_test( original, inputs, b );
        if ( !t )
            throw eval_error( "no original run over the witness inputs" );
        full = *t;
    }
    else
    {
        full.inputs = inputs;
        for ( const auto& st : w )
            full.outputs.push_back( st.output );
    }
    auto mode = phi >= 3 ? kill_mode::definite : kill_mode::potential;
    for ( std::size_t k = 0; k <= inputs.size(); ++k )
    {
        test_case prefix{ { full.inputs.begin(), full.inputs.begin() + k },
                          { full.outputs.begin(), full.outputs.begin() + k + 1 } };
        if ( test_kills( original, mutant, prefix, mode, b ) )
            return prefix;
    }
    throw eval_error( "witness does not kill the mutant at any prefix" );
}

} // namespace mutkill
