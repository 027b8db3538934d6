#include "mutkill/mutation.hpp"
#include "mutkill/elaborate.hpp"
#include "mutkill/errors.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace mutkill
{

const char* operator_name( mutation_operator op )
{
    switch ( op )
    {
    case mutation_operator::swap_binary_plus_minus:
        return "SwapBinaryPlusMinus";
    case mutation_operator::swap_unary_plus_minus:
        return "SwapUnaryPlusMinus";
    case mutation_operator::swap_eq_neq:
        return "SwapEqNeq";
    case mutation_operator::swap_relational:
        return "SwapRelational";
    case mutation_operator::drop_not:
        return "DropNot";
    case mutation_operator::insert_not:
        return "InsertNot";
    case mutation_operator::swap_bool_connective:
        return "SwapBoolConnective";
    case mutation_operator::replace_int_constant:
        return "ReplaceIntConstant";
    case mutation_operator::custom:
        return "Custom";
    }
    return "?";
}

const std::vector<mutation_operator>& catalogue()
{
    static const std::vector<mutation_operator> ops = {
        mutation_operator::swap_binary_plus_minus, mutation_operator::swap_unary_plus_minus,
        mutation_operator::swap_eq_neq,            mutation_operator::swap_relational,
        mutation_operator::drop_not,               mutation_operator::insert_not,
        mutation_operator::swap_bool_connective,   mutation_operator::replace_int_constant };
    return ops;
}

std::optional<mutation_operator> operator_from_name( std::string_view name )
{
    for ( auto op : catalogue() )
        if ( name == operator_name( op ) )
            return op;
    if ( name == "Custom" )
        return mutation_operator::custom;
    return std::nullopt;
}

namespace
{

const char* op_word( pred_op op )
{
    switch ( op )
    {
    case pred_op::add:
    case pred_op::pos:
        return "plus";
    case pred_op::sub:
    case pred_op::neg:
        return "minus";
    case pred_op::eq:
        return "eq";
    case pred_op::ne:
        return "neq";
    case pred_op::lt:
        return "lt";
    case pred_op::le:
        return "le";
    case pred_op::gt:
        return "gt";
    case pred_op::ge:
        return "ge";
    case pred_op::and_:
        return "and";
    case pred_op::or_:
        return "or";
    case pred_op::xor_:
        return "xor";
    case pred_op::xnor:
        return "xnor";
    default:
        return "op";
    }
}

expr_ptr with_op( const expr& e, pred_op op )
{
    auto c = std::make_shared<expr>( e );
    c->op = op;
    return c;
}

expr_ptr replace_at( const expr_ptr& root, const std::vector<std::size_t>& path, std::size_t depth, expr_ptr repl )
{
    if ( depth == path.size() )
        return repl;
    auto c = std::make_shared<expr>( *root );
    c->args[path[depth]] = replace_at( root->args[path[depth]], path, depth + 1, std::move( repl ) );
    return c;
}

struct candidate
{
    mutation_operator op;
    std::string variant;
    std::size_t offset;
    expr_ptr node;
};

void candidates_for( const expr& e, bool guard, std::vector<candidate>& out )
{
    auto add = [&]( mutation_operator op, std::string variant, std::size_t offset, expr_ptr n ) {
        out.push_back( { op, std::move( variant ), offset, std::move( n ) } );
    };
    if ( guard )
        add( mutation_operator::insert_not, "insert", e.span.begin, ast::unary( pred_op::not_, std::make_shared<expr>( e ) ) );

    switch ( e.kind )
    {
    case expr_kind::int_lit:
    {
        auto c = e.int_value;
        std::pair<const char*, std::int64_t> vs[] = { { "zero", 0 }, { "one", 1 }, { "plus1", c + 1 }, { "minus1", c - 1 } };
        for ( auto [name, v] : vs )
            if ( v != c )
            {
                auto n = ast::int_lit( v );
                if ( e.parens )
                {
                    auto p = std::make_shared<expr>( *n );
                    p->parens = true;
                    n = p;
                }
                add( mutation_operator::replace_int_constant, name, e.span.begin, n );
            }
        break;
    }
    case expr_kind::unary:
        if ( e.op == pred_op::not_ )
        {
            auto inner = std::make_shared<expr>( *e.args[0] );
            inner->parens = inner->parens || e.parens;
            add( mutation_operator::drop_not, "drop", e.op_span.begin, inner );
        }
        else
        {
            auto to = e.op == pred_op::neg ? pred_op::pos : pred_op::neg;
            add( mutation_operator::swap_unary_plus_minus, op_word( to ), e.op_span.begin, with_op( e, to ) );
        }
        break;
    case expr_kind::binary:
        switch ( e.op )
        {
        case pred_op::add:
        case pred_op::sub:
        {
            auto to = e.op == pred_op::add ? pred_op::sub : pred_op::add;
            add( mutation_operator::swap_binary_plus_minus, op_word( to ), e.op_span.begin, with_op( e, to ) );
            break;
        }
        case pred_op::eq:
        case pred_op::ne:
        {
            auto to = e.op == pred_op::eq ? pred_op::ne : pred_op::eq;
            add( mutation_operator::swap_eq_neq, op_word( to ), e.op_span.begin, with_op( e, to ) );
            break;
        }
        case pred_op::lt:
        case pred_op::le:
        case pred_op::gt:
        case pred_op::ge:
            for ( auto to : { pred_op::lt, pred_op::le, pred_op::gt, pred_op::ge } )
                if ( to != e.op )
                    add( mutation_operator::swap_relational, op_word( to ), e.op_span.begin, with_op( e, to ) );
            break;
        case pred_op::and_:
        case pred_op::or_:
        case pred_op::xor_:
        case pred_op::xnor:
            for ( auto to : { pred_op::and_, pred_op::or_, pred_op::xor_, pred_op::xnor } )
                if ( to != e.op )
                    add( mutation_operator::swap_bool_connective, op_word( to ), e.op_span.begin, with_op( e, to ) );
            break;
        default:
            break;
        }
        break;
    default:
        break;
    }
}

struct site_visit
{
    const expr* node;
    std::vector<std::size_t> path;
    bool guard;
};

void walk( const expr& e, std::vector<std::size_t>& path, bool guard, std::vector<site_visit>& out )
{
    out.push_back( { &e, path, guard } );
    for ( std::size_t i = 0; i < e.args.size(); ++i )
    {
        bool g = e.kind == expr_kind::ite && i % 2 == 0 && i + 1 < e.args.size();
        path.push_back( i );
        walk( *e.args[i], path, g, out );
        path.pop_back();
    }
}

mutation make_mutation( const model_ast& m, std::size_t s, std::size_t a, std::vector<std::size_t> path,
                        mutation_operator op, std::string variant, std::size_t offset, expr_ptr repl )
{
    mutation mu;
    mu.op = op;
    mu.variant = std::move( variant );
    mu.site = { s, a, std::move( path ) };
    const auto& asg = m.sections[s].assigns[a];
    mu.block = m.sections[s].kind;
    mu.target = asg.target;
    const auto& node = node_at( m, mu.site );
    mu.span = node.span;
    mu.original = render( node );
    mu.replacement = render( *repl );
    mu.replacement_node = std::move( repl );
    mu.id = std::string( operator_name( op ) ) + "-" + mu.variant + "@" + std::to_string( offset );
    return mu;
}

} // namespace

const expr& node_at( const model_ast& m, const site_path& site )
{
    const expr* e = m.sections.at( site.section ).assigns.at( site.item ).rhs.get();
    for ( auto i : site.path )
        e = e->args.at( i ).get();
    return *e;
}

model_ast apply_mutation( const model_ast& m, const mutation& mu )
{
    model_ast out = m;
    auto& asg = out.sections.at( mu.site.section ).assigns.at( mu.site.item );
    asg.rhs = replace_at( asg.rhs, mu.site.path, 0, mu.replacement_node );
    return out;
}

std::vector<mutation> enumerate_mutations( const model_ast& m, const mutation_options& opts )
{
    std::vector<mutation> out;
    std::unordered_set<std::string> seen = { render( m ) };
    for ( std::size_t s = 0; s < m.sections.size(); ++s )
    {
        const auto& sec = m.sections[s];
        if ( sec.kind == section_kind::init && !opts.include_init_sites )
            continue;
        for ( std::size_t a = 0; a < sec.assigns.size(); ++a )
        {
            std::vector<site_visit> visits;
            std::vector<std::size_t> path;
            walk( *sec.assigns[a].rhs, path, false, visits );
            for ( const auto& v : visits )
            {
                std::vector<candidate> cands;
                candidates_for( *v.node, v.guard, cands );
                for ( auto& c : cands )
                {
                    if ( !opts.ops.empty() && !opts.ops.count( c.op ) )
                        continue;
                    auto mu = make_mutation( m, s, a, v.path, c.op, c.variant, c.offset, c.node );
                    if ( !seen.insert( render( apply_mutation( m, mu ) ) ).second )
                        continue;
                    out.push_back( std::move( mu ) );
                }
            }
        }
    }
    std::stable_sort( out.begin(), out.end(), []( const mutation& x, const mutation& y ) {
        auto ox = std::stoull( x.id.substr( x.id.rfind( '@' ) + 1 ) );
        auto oy = std::stoull( y.id.substr( y.id.rfind( '@' ) + 1 ) );
        return ox < oy;
    } );
    return out;
}

mutation custom_mutation( const model_ast& m, std::size_t offset, std::string_view replacement,
                          std::optional<std::size_t> end )
{
    for ( std::size_t s = 0; s < m.sections.size(); ++s )
        for ( std::size_t a = 0; a < m.sections[s].assigns.size(); ++a )
        {
            std::vector<site_visit> visits;
            std::vector<std::size_t> path;
            walk( *m.sections[s].assigns[a].rhs, path, false, visits );
            for ( const auto& v : visits )
                if ( v.node->span.begin == offset && ( !end || v.node->span.end == *end ) )
                    return make_mutation( m, s, a, v.path, mutation_operator::custom, "expr", offset,
                                          parse_expression( replacement ) );
        }
    throw model_error( "no expression starts at offset " + std::to_string( offset ) );
}

conditional_mutant build_conditional_mutant( const model_ast& m, const mutation& mu )
{
    for ( const auto& sec : m.sections )
        for ( const auto& d : sec.decls )
            if ( d.name == "mut" )
                throw model_error( "model already declares 'mut'" );

    model_ast c = m;
    const auto& old = node_at( m, mu.site );
    auto old_copy = std::make_shared<expr>( old );
    old_copy->parens = false;
    auto repl = std::make_shared<expr>( *mu.replacement_node );
    repl->parens = false;
    auto wrapped = std::make_shared<expr>( *ast::ternary( ast::ident( "mut" ), repl, old_copy ) );
    auto& asg = c.sections.at( mu.site.section ).assigns.at( mu.site.item );
    asg.rhs = replace_at( asg.rhs, mu.site.path, 0, wrapped );

    auto last_of = [&]( section_kind k ) -> section* {
        section* found = nullptr;
        for ( auto& sec : c.sections )
            if ( sec.kind == k )
                found = &sec;
        return found;
    };
    declaration flag{ "mut", var_domain::boolean(), {} };
    if ( auto* st = last_of( section_kind::state ) )
        st->decls.push_back( flag );
    else
    {
        section fresh;
        fresh.kind = section_kind::state;
        fresh.decls.push_back( flag );
        auto first_block = std::find_if( c.sections.begin(), c.sections.end(), []( const section& s ) {
            return s.kind == section_kind::init || s.kind == section_kind::next;
        } );
        c.sections.insert( first_block, fresh );
    }
    for ( auto k : { section_kind::init, section_kind::next } )
    {
        assignment a{ "mut",
                      k == section_kind::init ? ast::set( { ast::bool_lit( false ), ast::bool_lit( true ) } )
                                              : ast::ident( "mut" ),
                      {} };
        if ( auto* sec = last_of( k ) )
            sec->assigns.push_back( a );
        else
        {
            section fresh;
            fresh.kind = k;
            fresh.assigns.push_back( a );
            c.sections.push_back( fresh );
        }
    }

    try
    {
        auto system = elaborate( c );
        return { m, mu, std::move( c ), std::move( system ) };
    }
    catch ( const model_error& e )
    {
        throw model_error( "mutation inapplicable at " + mu.id + ": " + e.what() );
    }
}

sts project( const sts& cm, bool mut_value, const std::string& flag )
{
    const auto& sig = cm.sig();
    auto mi = sig.find( var_role::state, flag );
    if ( !mi )
        throw model_error( "no state variable '" + flag + "' to project away" );
    std::vector<variable> states;
    for ( std::size_t i = 0; i < sig.states().size(); ++i )
        if ( i != *mi )
            states.push_back( sig.states()[i] );
    auto nsig = std::make_shared<const signature>( sig.inputs(), sig.outputs(), states );

    std::vector<slot_target> target( sig.slot_count() );
    for ( std::size_t i = 0; i < sig.inputs().size(); ++i )
        target[sig.input_slot( i )].new_slot = nsig->input_slot( i );
    for ( std::size_t o = 0; o < sig.outputs().size(); ++o )
        target[sig.output_slot( o )].new_slot = nsig->output_slot( o );
    for ( std::size_t x = 0; x < sig.states().size(); ++x )
    {
        if ( x == *mi )
        {
            target[sig.state_slot( x )].fixed_index = mut_value ? 1 : 0;
            target[sig.next_slot( x )].fixed_index = mut_value ? 1 : 0;
            continue;
        }
        std::size_t nx = x < *mi ? x : x - 1;
        target[sig.state_slot( x )].new_slot = nsig->state_slot( nx );
        target[sig.next_slot( x )].new_slot = nsig->next_slot( nx );
    }
    return sts( nsig, remap( cm.init(), sig, target ), remap( cm.trans(), sig, target ) );
}

sts project( const conditional_mutant& cm, bool mut_value )
{
    return project( cm.system, mut_value );
}

} // namespace mutkill
