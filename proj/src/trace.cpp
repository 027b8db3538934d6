#include "mutkill/trace.hpp"
#include "mutkill/errors.hpp"

namespace mutkill
{

std::vector<trace> enumerate_traces( const sts& s, std::size_t depth, budget* b )
{
    std::vector<trace> out;
    auto inputs = s.all_valuations( var_role::input );
    trace cur;

    auto extend = [&]( auto&& self ) -> void {
        if ( cur.size() == depth + 1 )
        {
            if ( b )
                b->charge();
            out.push_back( cur );
            return;
        }
        for ( const auto& in : inputs )
            for ( auto& st : s.successors( cur.back().state, in, b ) )
            {
                if ( b )
                    b->charge();
                cur.push_back( { in, std::move( st.output ), std::move( st.state ) } );
                self( self );
                cur.pop_back();
            }
    };

    for ( auto& st : s.initial_pairs( b ) )
    {
        cur.push_back( { std::nullopt, std::move( st.output ), std::move( st.state ) } );
        extend( extend );
        cur.pop_back();
    }
    return out;
}

std::vector<std::string> names_of( const signature& sig, std::initializer_list<var_role> roles )
{
    std::vector<std::string> out;
    for ( auto r : roles )
        for ( const auto& v : sig.group( r ) )
            out.push_back( v.name );
    return out;
}

projected_trace restrict( const signature& sig, const trace& t, const std::vector<std::string>& names )
{
    projected_trace p;
    for ( const auto& n : names )
    {
        bool found = false;
        for ( auto r : { var_role::input, var_role::output, var_role::state } )
            if ( auto i = sig.find( r, n ) )
            {
                p.vars.push_back( { r, *i } );
                found = true;
                break;
            }
        if ( !found )
            throw model_error( "cannot restrict to undeclared variable '" + n + "'" );
    }
    for ( const auto& st : t )
    {
        std::vector<std::int32_t> row;
        for ( const auto& v : p.vars )
        {
            switch ( v.role )
            {
            case var_role::input:
                row.push_back( st.input ? st.input->idx[v.index] : -1 );
                break;
            case var_role::output:
                row.push_back( st.output.idx[v.index] );
                break;
            case var_role::state:
                row.push_back( st.state.idx[v.index] );
                break;
            }
        }
        p.steps.push_back( std::move( row ) );
    }
    return p;
}

ap_labeling default_labeling( const signature& sig, std::initializer_list<var_role> roles )
{
    ap_labeling out;
    for ( auto r : roles )
        for ( std::size_t k = 0; k < sig.group( r ).size(); ++k )
        {
            const auto& v = sig.group( r )[k];
            int slot = sig.group_slot( r, k );
            for ( std::size_t i = 0; i < v.domain.size(); ++i )
                out.push_back( { "[" + v.name + "=" + v.domain.value_name( i ) + "]",
                                 pred::equals( slot, sig.slot_value( slot, static_cast<std::int32_t>( i ) ) ) } );
        }
    return out;
}

namespace
{

bool reads_input( const signature& sig, const predicate& p )
{
    std::vector<int> slots;
    collect_slots( p, slots );
    for ( int s : slots )
    {
        if ( sig.slot_primed( s ) )
            throw model_error( "atomic propositions must be unprimed" );
        if ( sig.slot_role( s ) == var_role::input )
            return true;
    }
    return false;
}

template <typename F>
void label_positions( const signature& sig, const trace& t, const ap_labeling& labels, F&& on_hit )
{
    std::vector<bool> needs_input;
    for ( const auto& l : labels )
        needs_input.push_back( reads_input( sig, l.pred ) );
    environment env( sig );
    for ( std::size_t j = 0; j < t.size(); ++j )
    {
        env.clear();
        if ( t[j].input )
            env.bind_group( var_role::input, *t[j].input );
        env.bind_group( var_role::output, t[j].output );
        env.bind_group( var_role::state, t[j].state );
        for ( std::size_t k = 0; k < labels.size(); ++k )
        {
            if ( needs_input[k] && !t[j].input )
                continue;
            if ( holds( labels[k].pred, env ) )
                on_hit( j, k );
        }
    }
}

} // namespace

std::vector<std::set<std::string>> ap_trace( const signature& sig, const trace& t, const ap_labeling& labels )
{
    std::vector<std::set<std::string>> out( t.size() );
    label_positions( sig, t, labels, [&]( std::size_t j, std::size_t k ) { out[j].insert( labels[k].name ); } );
    return out;
}

std::vector<std::uint64_t> ap_letters( const signature& sig, const trace& t, const ap_labeling& labels )
{
    if ( labels.size() > 64 )
        throw model_error( "more than 64 atomic propositions" );
    std::vector<std::uint64_t> out( t.size(), 0 );
    label_positions( sig, t, labels, [&]( std::size_t j, std::size_t k ) { out[j] |= std::uint64_t{ 1 } << k; } );
    return out;
}

std::string format_trace( const signature& sig, const trace& t )
{
    std::string s;
    for ( std::size_t j = 0; j < t.size(); ++j )
    {
        s += std::to_string( j ) + ": in=" +
             ( t[j].input ? format_valuation( sig, var_role::input, *t[j].input ) : std::string( "-" ) ) +
             " out=" + format_valuation( sig, var_role::output, t[j].output ) +
             " x=" + format_valuation( sig, var_role::state, t[j].state ) + "\n";
    }
    return s;
}

} // namespace mutkill
