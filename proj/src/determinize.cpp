#include "mutkill/determinize.hpp"
#include "mutkill/errors.hpp"
#include "mutkill/trace.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace mutkill
{

namespace
{

std::string fresh_name( const std::set<std::string>& taken, const std::string& base )
{
    if ( !taken.count( base ) )
        return base;
    for ( int i = 1;; ++i )
    {
        auto n = base + "_" + std::to_string( i );
        if ( !taken.count( n ) )
            return n;
    }
}

std::set<std::string> taken_names( const signature& sig )
{
    std::set<std::string> out;
    for ( auto role : { var_role::input, var_role::output, var_role::state } )
        for ( const auto& v : sig.group( role ) )
        {
            out.insert( v.name );
            for ( const auto& l : v.domain.literals() )
                out.insert( l );
        }
    return out;
}

std::vector<variable> sorted_with( std::vector<variable> vars, variable extra )
{
    vars.push_back( std::move( extra ) );
    std::sort( vars.begin(), vars.end(), []( const variable& a, const variable& b ) { return a.name < b.name; } );
    return vars;
}

std::vector<std::size_t> positions_in( const std::vector<variable>& from, const std::vector<variable>& to )
{
    std::vector<std::size_t> pos;
    for ( const auto& v : from )
    {
        auto it = std::find_if( to.begin(), to.end(), [&]( const variable& w ) { return w.name == v.name; } );
        pos.push_back( static_cast<std::size_t>( it - to.begin() ) );
    }
    return pos;
}

std::vector<step> distinct( std::vector<step> v )
{
    std::sort( v.begin(), v.end() );
    v.erase( std::unique( v.begin(), v.end() ), v.end() );
    return v;
}

struct layout
{
    std::size_t mut = 0;
    std::vector<std::size_t> input_pos;  // cm input -> D input
    std::size_t nd_pos = 0;
    std::vector<std::size_t> state_pos;  // cm state -> D state
    std::size_t xtau_pos = 0;
    std::size_t d_inputs = 0;
    std::size_t d_states = 0;

    valuation strip( const valuation& x ) const
    {
        valuation r = x;
        r.idx.erase( r.idx.begin() + static_cast<std::ptrdiff_t>( mut ) );
        return r;
    }
    valuation with_mut( const valuation& x, bool b ) const
    {
        valuation r = x;
        r.idx.insert( r.idx.begin() + static_cast<std::ptrdiff_t>( mut ), b ? 1 : 0 );
        return r;
    }
    step strip( const step& s ) const { return { s.output, strip( s.state ) }; }

    valuation d_input( const valuation& in, std::size_t k ) const
    {
        valuation r{ std::vector<std::int32_t>( d_inputs, 0 ) };
        for ( std::size_t i = 0; i < in.idx.size(); ++i )
            r.idx[input_pos[i]] = in.idx[i];
        r.idx[nd_pos] = static_cast<std::int32_t>( k );
        return r;
    }
    valuation d_state( const valuation& x, bool tau ) const
    {
        valuation r{ std::vector<std::int32_t>( d_states, 0 ) };
        for ( std::size_t i = 0; i < x.idx.size(); ++i )
            r.idx[state_pos[i]] = x.idx[i];
        r.idx[xtau_pos] = tau ? 1 : 0;
        return r;
    }
    valuation cm_input( const valuation& d ) const
    {
        valuation r;
        for ( auto p : input_pos )
            r.idx.push_back( d.idx[p] );
        return r;
    }
    valuation cm_state( const valuation& d ) const
    {
        valuation r;
        for ( auto p : state_pos )
            r.idx.push_back( d.idx[p] );
        return r;
    }
};

layout layout_of( const signature& cm, const signature& d, const std::string& nd, const std::string& xtau )
{
    layout l;
    l.mut = *cm.find( var_role::state, "mut" );
    l.input_pos = positions_in( cm.inputs(), d.inputs() );
    l.nd_pos = *d.find( var_role::input, nd );
    l.state_pos = positions_in( cm.states(), d.states() );
    l.xtau_pos = *d.find( var_role::state, xtau );
    l.d_inputs = d.inputs().size();
    l.d_states = d.states().size();
    return l;
}

// Successors of the conditional mutant at one state and input: the own side,
// and the branch list over both values of mut.
struct point
{
    valuation state;
    valuation input;
    std::vector<step> own;
    std::vector<step> branches;
    bool nondet = false;
};

void append( std::vector<std::int32_t>& row, const valuation& v )
{
    row.insert( row.end(), v.idx.begin(), v.idx.end() );
}

} // namespace

determinized determinize_explicit( const sts& cm, budget* b )
{
    const signature& sig = cm.sig();
    auto mut = sig.find( var_role::state, "mut" );
    if ( !mut || sig.states()[*mut].domain.kind() != domain_kind::boolean )
        throw model_error( "determinize: system has no boolean state 'mut'" );
    const std::size_t mi = *mut;
    auto mut_of = [&]( const valuation& x ) { return x.idx[mi] != 0; };

    auto taken = taken_names( sig );
    std::string nd = fresh_name( taken, "nd" );
    taken.insert( nd );
    std::string xtau = fresh_name( taken, "xtau" );

    // initial choice
    auto init = cm.initial_pairs( b );
    std::size_t per_side[2] = { 0, 0 };
    std::vector<step> init_branches;
    layout tmp;
    tmp.mut = mi;
    for ( const auto& s : init )
    {
        ++per_side[mut_of( s.state )];
        init_branches.push_back( tmp.strip( s ) );
    }
    init_branches = distinct( init_branches );
    bool init_nondet = per_side[0] > 1 || per_side[1] > 1;

    // reachable states and their branching points
    std::vector<point> points;
    std::set<valuation> seen;
    std::deque<valuation> queue;
    for ( const auto& s : init )
        if ( seen.insert( s.state ).second )
            queue.push_back( s.state );
    auto inputs = cm.all_valuations( var_role::input );
    while ( !queue.empty() )
    {
        auto x = queue.front();
        queue.pop_front();
        auto flipped = x;
        flipped.idx[mi] = 1 - flipped.idx[mi];
        for ( const auto& in : inputs )
        {
            point p{ x, in, cm.successors( x, in, b ), {}, false };
            auto other = cm.successors( flipped, in, b );
            p.nondet = p.own.size() > 1 || other.size() > 1;
            for ( const auto& s : p.own )
            {
                p.branches.push_back( tmp.strip( s ) );
                if ( seen.insert( s.state ).second )
                    queue.push_back( s.state );
            }
            for ( const auto& s : other )
                p.branches.push_back( tmp.strip( s ) );
            p.branches = distinct( p.branches );
            points.push_back( std::move( p ) );
        }
    }

    std::size_t degree = 1;
    if ( init_nondet )
        degree = std::max( degree, init_branches.size() );
    for ( const auto& p : points )
        if ( p.nondet )
            degree = std::max( degree, p.branches.size() );

    auto dsig = std::make_shared<const signature>(
        sorted_with( sig.inputs(), { nd, var_domain::integer( 0, static_cast<std::int64_t>( degree ) - 1 ) } ),
        sig.outputs(), sorted_with( sig.states(), { xtau, var_domain::boolean() } ) );
    layout l = layout_of( sig, *dsig, nd, xtau );

    valuation eps;
    for ( const auto& o : sig.outputs() )
        eps.idx.push_back( static_cast<std::int32_t>( *o.domain.index_of_literal( "eps" ) ) );

    determinized d{ sts( dsig, pred::truth( true ), pred::truth( true ) ), nd, xtau, degree, {}, {}, {} };

    auto init_table = std::make_shared<relation_table>();
    for ( std::size_t o = 0; o < dsig->outputs().size(); ++o )
        init_table->slots.push_back( dsig->output_slot( o ) );
    for ( std::size_t s = 0; s < dsig->states().size(); ++s )
        init_table->slots.push_back( dsig->state_slot( s ) );
    auto trans_table = std::make_shared<relation_table>();
    for ( std::size_t i = 0; i < dsig->inputs().size(); ++i )
        trans_table->slots.push_back( dsig->input_slot( i ) );
    for ( std::size_t o = 0; o < dsig->outputs().size(); ++o )
        trans_table->slots.push_back( dsig->output_slot( o ) );
    for ( std::size_t s = 0; s < dsig->states().size(); ++s )
        trans_table->slots.push_back( dsig->state_slot( s ) );
    for ( std::size_t s = 0; s < dsig->states().size(); ++s )
        trans_table->slots.push_back( dsig->next_slot( s ) );

    auto add_row = [&]( const valuation& x, const valuation& in, const valuation& out, const valuation& next ) {
        std::vector<std::int32_t> row;
        append( row, in );
        append( row, out );
        append( row, x );
        append( row, next );
        if ( trans_table->rows.insert( row ).second )
            d.transitions.push_back( { x, in, out, next } );
    };

    // resolve nd at one point: own successors reached by nd = k
    auto resolve = [&]( bool nondet, const std::vector<step>& own, const std::vector<step>& branches, bool side,
                        std::size_t k, const valuation& stay, auto&& emit ) {
        if ( !nondet )
        {
            for ( const auto& s : own )
                emit( s.output, l.d_state( s.state, false ) );
            return;
        }
        const auto& pick = branches[std::min( k, branches.size() - 1 )];
        step full{ pick.output, l.with_mut( pick.state, side ) };
        if ( std::find( own.begin(), own.end(), full ) != own.end() )
            emit( full.output, l.d_state( full.state, false ) );
        else
            emit( eps, stay );
    };

    valuation zero{ std::vector<std::int32_t>( sig.states().size(), 0 ) };
    for ( bool side : { false, true } )
    {
        auto x = zero;
        x.idx[mi] = side ? 1 : 0;
        auto tau = l.d_state( x, true );
        std::vector<std::int32_t> row;
        append( row, eps );
        append( row, tau );
        init_table->rows.insert( row );
        d.initial.push_back( { eps, tau } );

        std::vector<step> own;
        for ( const auto& s : init )
            if ( mut_of( s.state ) == side )
                own.push_back( s );
        for ( const auto& in : inputs )
            for ( std::size_t k = 0; k < degree; ++k )
                resolve( init_nondet, own, init_branches, side, k, tau,
                         [&]( const valuation& out, const valuation& next ) {
                             add_row( tau, l.d_input( in, k ), out, next );
                         } );
    }
    if ( init_nondet )
        d.points.push_back( { std::nullopt, std::nullopt, init_branches } );

    for ( const auto& p : points )
    {
        auto here = l.d_state( p.state, false );
        for ( std::size_t k = 0; k < degree; ++k )
            resolve( p.nondet, p.own, p.branches, mut_of( p.state ), k, here,
                     [&]( const valuation& out, const valuation& next ) {
                         add_row( here, l.d_input( p.input, k ), out, next );
                     } );
    }
    std::set<std::pair<valuation, valuation>> listed;
    for ( const auto& p : points )
        if ( p.nondet && listed.insert( { l.strip( p.state ), p.input } ).second )
            d.points.push_back( { l.strip( p.state ), p.input, p.branches } );

    std::sort( d.initial.begin(), d.initial.end() );
    d.system = sts( dsig, pred::relation( init_table ), pred::relation( trans_table ) );
    return d;
}

trace undo_shift( const sts& cm, const determinized& d, const trace& t )
{
    layout l = layout_of( cm.sig(), d.system.sig(), d.nd, d.xtau );
    trace out;
    for ( const auto& s : t )
    {
        if ( s.state.idx[l.xtau_pos] )
            continue;
        trace_step c;
        if ( !out.empty() && s.input )
            c.input = l.cm_input( *s.input );
        c.output = s.output;
        c.state = l.cm_state( s.state );
        out.push_back( std::move( c ) );
    }
    return out;
}

transform_report verify_transform( const sts& cm, const determinized& d, std::size_t depth,
                                   std::uint64_t budget_limit )
{
    transform_report r;
    budget b( budget_limit );

    auto v = validate( d.system, std::nullopt, std::string( "mut" ), &b );
    r.deterministic = v.deterministic;
    for ( const auto& w : v.witnesses )
        r.problems.push_back( "not deterministic: " + w );

    // every cm prefix, read from position 0, must be a D prefix read from position 1
    layout l = layout_of( cm.sig(), d.system.sig(), d.nd, d.xtau );
    std::set<std::tuple<valuation, std::optional<valuation>, step>> ok_edges, bad_edges;
    auto has_edge = [&]( const valuation& from, const std::optional<valuation>& in, const step& to ) {
        auto key = std::make_tuple( from, in, to );
        if ( ok_edges.count( key ) )
            return true;
        if ( bad_edges.count( key ) )
            return false;
        valuation dfrom;
        std::vector<valuation> ins;
        if ( in )
        {
            dfrom = l.d_state( from, false );
            for ( std::size_t k = 0; k < d.degree; ++k )
                ins.push_back( l.d_input( *in, k ) );
        }
        else
        {
            auto it = std::find_if( d.initial.begin(), d.initial.end(), [&]( const step& s ) {
                return l.cm_state( s.state ).idx[l.mut] == to.state.idx[l.mut];
            } );
            if ( it == d.initial.end() )
                return false;
            dfrom = it->state;
            for ( const auto& ci : cm.all_valuations( var_role::input ) )
                for ( std::size_t k = 0; k < d.degree; ++k )
                    ins.push_back( l.d_input( ci, k ) );
        }
        step want{ to.output, l.d_state( to.state, false ) };
        for ( const auto& di : ins )
        {
            auto succ = d.system.successors( dfrom, di, &b );
            if ( std::find( succ.begin(), succ.end(), want ) != succ.end() )
            {
                ok_edges.insert( key );
                return true;
            }
        }
        bad_edges.insert( key );
        return false;
    };

    r.inclusion = true;
    for ( const auto& t : enumerate_traces( cm, depth, &b ) )
    {
        ++r.prefixes_checked;
        bool found = has_edge( t[0].state, std::nullopt, { t[0].output, t[0].state } );
        for ( std::size_t j = 1; found && j < t.size(); ++j )
            found = has_edge( t[j - 1].state, t[j].input, { t[j].output, t[j].state } );
        if ( !found )
        {
            if ( r.inclusion )
                r.problems.push_back( "prefix missing from D: " + format_trace( cm.sig(), t ) );
            r.inclusion = false;
        }
    }

    auto dv = decide_equivalence( project( d.system, false ), project( d.system, true ), budget_limit );
    auto cv = decide_equivalence( project( cm, false ), project( cm, true ), budget_limit );
    if ( dv.status == verdict_status::unknown )
        r.problems.push_back( "D equivalence undecided: " + dv.note );
    r.d_killable = dv.status == verdict_status::definitely_killable || dv.status == verdict_status::potentially_only;
    r.cm_status = cv.status;
    r.sound = r.d_killable || cv.status == verdict_status::equivalent;
    if ( !r.sound )
        r.problems.push_back( std::string( "D not killable but the mutant is " ) + to_string( cv.status ) );
    return r;
}

// ---- syntactic form

namespace
{

bool contains_set( const expr& e )
{
    if ( e.kind == expr_kind::set )
        return true;
    for ( const auto& a : e.args )
        if ( contains_set( *a ) )
            return true;
    return false;
}

std::size_t max_arity( const expr& e )
{
    std::size_t n = e.kind == expr_kind::set ? e.args.size() : 1;
    for ( const auto& a : e.args )
        n = std::max( n, max_arity( *a ) );
    return n;
}

using branch = std::pair<expr_ptr, expr_ptr>;  // guard (null = true), value

expr_ptr both( const expr_ptr& g, const expr_ptr& h )
{
    if ( !g )
        return h;
    if ( !h )
        return g;
    if ( h->kind == expr_kind::binary && h->op == pred_op::and_ && !h->parens )
        return both( both( g, h->args[0] ), h->args[1] );
    return ast::binary( pred_op::and_, g, h );
}

// Value expression as an if-chain; the last branch is unguarded.
std::vector<branch> branches_of( const expr_ptr& e, const std::string& nd )
{
    std::vector<branch> out;
    if ( e->kind == expr_kind::set )
    {
        for ( std::size_t k = 0; k + 1 < e->args.size(); ++k )
            out.push_back( { ast::binary( pred_op::eq, ast::ident( nd ), ast::int_lit( static_cast<std::int64_t>( k ) ) ),
                             e->args[k] } );
        out.push_back( { nullptr, e->args.back() } );
        return out;
    }
    if ( e->kind == expr_kind::ite )
    {
        for ( std::size_t i = 0; i + 1 < e->args.size(); i += 2 )
            for ( auto& [h, w] : branches_of( e->args[i + 1], nd ) )
                out.push_back( { both( e->args[i], h ), w } );
        auto tail = branches_of( e->args.back(), nd );
        out.insert( out.end(), tail.begin(), tail.end() );
        return out;
    }
    if ( e->kind == expr_kind::ternary && contains_set( *e ) )
    {
        for ( auto& [h, w] : branches_of( e->args[1], nd ) )
            out.push_back( { both( e->args[0], h ), w } );
        auto tail = branches_of( e->args[2], nd );
        out.insert( out.end(), tail.begin(), tail.end() );
        return out;
    }
    out.push_back( { nullptr, e } );
    return out;
}

expr_ptr chain( const std::vector<branch>& bs )
{
    std::vector<branch> kept;
    for ( const auto& b : bs )
    {
        kept.push_back( b );
        if ( !b.first )
            break;
    }
    if ( kept.size() == 1 )
        return kept.front().second;
    std::vector<expr_ptr> args;
    for ( std::size_t i = 0; i + 1 < kept.size(); ++i )
    {
        args.push_back( kept[i].first );
        args.push_back( kept[i].second );
    }
    args.push_back( kept.back().second );
    return ast::ite( std::move( args ) );
}

expr_ptr first_value( const var_domain& d )
{
    switch ( d.kind() )
    {
    case domain_kind::boolean:
        return ast::bool_lit( false );
    case domain_kind::integer:
        return ast::int_lit( d.lo() );
    case domain_kind::enumeration:
        return ast::ident( d.literals().front() );
    }
    return ast::bool_lit( false );
}

section* last_section( model_ast& m, section_kind k )
{
    section* found = nullptr;
    for ( auto& s : m.sections )
        if ( s.kind == k )
            found = &s;
    return found;
}

section& ensure_section( model_ast& m, section_kind k )
{
    if ( auto* s = last_section( m, k ) )
        return *s;
    section fresh;
    fresh.kind = k;
    auto at = std::find_if( m.sections.begin(), m.sections.end(),
                            [&]( const section& s ) { return static_cast<int>( s.kind ) > static_cast<int>( k ); } );
    return *m.sections.insert( at, fresh );
}

} // namespace

std::size_t set_choice_degree( const model_ast& m )
{
    std::size_t n = 1;
    for ( const auto& s : m.sections )
        for ( const auto& a : s.assigns )
            if ( !( s.kind == section_kind::init && a.target == "mut" ) )
                n = std::max( n, max_arity( *a.rhs ) );
    return n;
}

model_ast determinize_syntactic( const model_ast& m )
{
    std::set<std::string> taken;
    bool lift = false;
    for ( const auto& s : m.sections )
    {
        for ( const auto& d : s.decls )
        {
            taken.insert( d.name );
            for ( const auto& l : d.domain.literals() )
                taken.insert( l );
        }
        if ( s.kind == section_kind::init )
            for ( const auto& a : s.assigns )
                if ( a.target != "mut" && contains_set( *a.rhs ) )
                    lift = true;
    }
    const std::string nd = fresh_name( taken, "nd" );
    taken.insert( nd );
    const std::string xtau = fresh_name( taken, "xtau" );
    const std::size_t degree = set_choice_degree( m );

    model_ast out = m;
    ensure_section( out, section_kind::input )
        .decls.push_back( { nd, var_domain::integer( 0, static_cast<std::int64_t>( degree ) - 1 ), {} } );

    if ( !lift )
    {
        for ( auto& s : out.sections )
            if ( s.kind == section_kind::next )
                for ( auto& a : s.assigns )
                    if ( contains_set( *a.rhs ) )
                        a.rhs = chain( branches_of( a.rhs, nd ) );
        return out;
    }

    std::map<std::string, var_domain> domains;
    for ( const auto& s : m.sections )
        for ( const auto& d : s.decls )
            domains.emplace( d.name, d.domain );
    std::map<std::string, expr_ptr> init_rhs;
    for ( const auto& s : m.sections )
        if ( s.kind == section_kind::init )
            for ( const auto& a : s.assigns )
                if ( a.target != "mut" )
                    init_rhs[a.target] = a.rhs;

    ensure_section( out, section_kind::state ).decls.push_back( { xtau, var_domain::boolean(), {} } );
    std::set<std::string> outputs;
    for ( const auto* d : m.declarations( section_kind::output ) )
        outputs.insert( d->name );

    for ( auto& s : out.sections )
    {
        if ( s.kind == section_kind::init )
            for ( auto& a : s.assigns )
            {
                if ( a.target == "mut" )
                    continue;
                a.rhs = outputs.count( a.target ) ? ast::ident( "eps" ) : first_value( domains.at( a.target ) );
            }
        if ( s.kind == section_kind::next )
            for ( auto& a : s.assigns )
            {
                auto it = init_rhs.find( a.target );
                if ( it == init_rhs.end() )
                {
                    if ( contains_set( *a.rhs ) )
                        a.rhs = chain( branches_of( a.rhs, nd ) );
                    continue;
                }
                std::vector<branch> bs;
                for ( auto& [h, w] : branches_of( it->second, nd ) )
                    bs.push_back( { both( ast::ident( xtau ), h ), w } );
                auto tail = branches_of( a.rhs, nd );
                bs.insert( bs.end(), tail.begin(), tail.end() );
                a.rhs = chain( bs );
                init_rhs.erase( it );
            }
    }
    if ( !init_rhs.empty() )
        throw model_error( "determinize: '" + init_rhs.begin()->first + "' has an init but no next assignment" );

    ensure_section( out, section_kind::init ).assigns.push_back( { xtau, ast::bool_lit( true ), {} } );
    ensure_section( out, section_kind::next ).assigns.push_back( { xtau, ast::bool_lit( false ), {} } );
    return out;
}

} // namespace mutkill
