#include "mutkill/sts.hpp"
#include "mutkill/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace mutkill
{

sts::sts( signature_ptr sig, predicate init, predicate trans )
    : sig_( std::move( sig ) ), init_( std::move( init ) ), trans_( std::move( trans ) )
{
    const auto& s = *sig_;
    std::vector<int> init_unknowns, trans_unknowns, trans_fixed;
    for ( std::size_t o = 0; o < s.outputs().size(); ++o )
    {
        init_unknowns.push_back( s.output_slot( o ) );
        trans_unknowns.push_back( s.output_slot( o ) );
    }
    for ( std::size_t x = 0; x < s.states().size(); ++x )
    {
        init_unknowns.push_back( s.state_slot( x ) );
        trans_unknowns.push_back( s.next_slot( x ) );
        trans_fixed.push_back( s.state_slot( x ) );
    }
    for ( std::size_t i = 0; i < s.inputs().size(); ++i )
        trans_fixed.push_back( s.input_slot( i ) );

    init_schedule_ = make_schedule( s, init_, init_unknowns, {} );
    trans_schedule_ = make_schedule( s, trans_, trans_unknowns, trans_fixed );
}

sts::schedule sts::make_schedule( const signature& sig, const predicate& p, std::vector<int> unknowns,
                                  const std::vector<int>& allowed_fixed )
{
    schedule s;
    s.unknowns = std::move( unknowns );
    s.after.resize( s.unknowns.size() );

    std::vector<predicate> parts;
    flatten_conjuncts( p, parts );
    for ( const auto& c : parts )
    {
        std::vector<int> slots;
        collect_slots( c, slots );
        int last = -1;
        for ( int slot : slots )
        {
            auto it = std::find( s.unknowns.begin(), s.unknowns.end(), slot );
            if ( it != s.unknowns.end() )
            {
                last = std::max( last, static_cast<int>( it - s.unknowns.begin() ) );
                continue;
            }
            if ( std::find( allowed_fixed.begin(), allowed_fixed.end(), slot ) == allowed_fixed.end() )
                throw model_error( "predicate refers to '" + sig.slot_name( slot ) + "' which is not available here" );
        }
        if ( last < 0 )
            s.ground.push_back( c );
        else
            s.after[last].push_back( c );
    }
    return s;
}

std::vector<step> sts::solve( const schedule& sc, environment& env, budget* b ) const
{
    std::vector<step> out;
    for ( const auto& g : sc.ground )
        if ( !holds( g, env ) )
            return out;

    const auto& s = *sig_;
    const std::size_t n = sc.unknowns.size();
    const std::size_t n_out = s.outputs().size();
    std::vector<std::size_t> sizes( n );
    for ( std::size_t k = 0; k < n; ++k )
        sizes[k] = s.slot_variable( sc.unknowns[k] ).domain.size();

    auto emit = [&] {
        step st;
        st.output.idx.resize( n_out );
        st.state.idx.resize( n - n_out );
        for ( std::size_t k = 0; k < n; ++k )
        {
            auto v = env.get( sc.unknowns[k] );
            if ( k < n_out )
                st.output.idx[k] = v;
            else
                st.state.idx[k - n_out] = v;
        }
        out.push_back( std::move( st ) );
    };

    if ( n == 0 )
    {
        emit();
        return out;
    }

    std::vector<std::int32_t> cur( n, -1 );
    std::size_t k = 0;
    while ( true )
    {
        ++cur[k];
        if ( cur[k] >= static_cast<std::int32_t>( sizes[k] ) )
        {
            env.unbind( sc.unknowns[k] );
            cur[k] = -1;
            if ( k == 0 )
                break;
            --k;
            continue;
        }
        if ( b )
            b->charge();
        env.bind( sc.unknowns[k], cur[k] );
        bool ok = true;
        for ( const auto& c : sc.after[k] )
            if ( !holds( c, env ) )
            {
                ok = false;
                break;
            }
        if ( !ok )
            continue;
        if ( k + 1 == n )
            emit();
        else
            ++k;
    }
    return out;
}

std::vector<step> sts::initial_pairs( budget* b ) const
{
    environment env( *sig_ );
    auto r = solve( init_schedule_, env, b );
    if ( r.empty() )
        throw model_error( "no initial pair satisfies init" );
    return r;
}

std::vector<step> sts::successors( const valuation& state, const valuation& input, budget* b ) const
{
    environment env( *sig_ );
    env.bind_group( var_role::state, state );
    env.bind_group( var_role::input, input );
    return solve( trans_schedule_, env, b );
}

std::vector<valuation> sts::all_valuations( var_role role ) const
{
    const auto& vars = sig_->group( role );
    std::vector<valuation> out;
    valuation v;
    v.idx.assign( vars.size(), 0 );
    while ( true )
    {
        out.push_back( v );
        std::size_t k = vars.size();
        while ( k > 0 )
        {
            --k;
            if ( ++v.idx[k] < static_cast<std::int32_t>( vars[k].domain.size() ) )
                break;
            v.idx[k] = 0;
            if ( k == 0 )
                return out;
        }
        if ( vars.empty() )
            return out;
    }
}

std::uint64_t rank( const signature& sig, var_role role, const valuation& v )
{
    const auto& vars = sig.group( role );
    std::uint64_t r = 0;
    for ( std::size_t k = 0; k < vars.size(); ++k )
        r = r * vars[k].domain.size() + static_cast<std::uint64_t>( v.idx[k] );
    return r;
}

valuation unrank( const signature& sig, var_role role, std::uint64_t r )
{
    const auto& vars = sig.group( role );
    valuation v;
    v.idx.assign( vars.size(), 0 );
    for ( std::size_t k = vars.size(); k-- > 0; )
    {
        v.idx[k] = static_cast<std::int32_t>( r % vars[k].domain.size() );
        r /= vars[k].domain.size();
    }
    return v;
}

std::string format_valuation( const signature& sig, var_role role, const valuation& v )
{
    const auto& vars = sig.group( role );
    std::string s = "(";
    for ( std::size_t k = 0; k < vars.size(); ++k )
    {
        if ( k )
            s += ", ";
        s += vars[k].name + "=" + vars[k].domain.value_name( v.idx[k] );
    }
    return s + ")";
}

state_space::state_space( const sts& s, budget* b ) : sts_( &s ), budget_( b ), inputs_( s.all_valuations( var_role::input ) )
{
}

int state_space::intern( const valuation& state )
{
    auto [it, fresh] = ids_.emplace( state, static_cast<int>( states_.size() ) );
    if ( fresh )
    {
        states_.push_back( state );
        succ_.emplace_back( inputs_.size() );
    }
    return it->second;
}

const std::vector<state_space::edge>& state_space::initial()
{
    if ( !initial_ )
    {
        std::vector<edge> es;
        for ( const auto& st : sts_->initial_pairs( budget_ ) )
            es.push_back( { rank( sts_->sig(), var_role::output, st.output ), intern( st.state ) } );
        initial_ = std::move( es );
    }
    return *initial_;
}

const std::vector<state_space::edge>& state_space::successors( int state, std::size_t input )
{
    if ( !succ_[state][input] )
    {
        std::vector<edge> es;
        // copy: intern() may grow states_
        valuation from = states_[state];
        for ( const auto& st : sts_->successors( from, inputs_[input], budget_ ) )
            es.push_back( { rank( sts_->sig(), var_role::output, st.output ), intern( st.state ) } );
        succ_[state][input] = std::move( es );
    }
    return *succ_[state][input];
}

validation_report validate( const sts& s, std::optional<std::size_t> depth, std::optional<std::string> frozen,
                            budget* b )
{
    validation_report rep;
    const auto& sig = s.sig();
    std::optional<std::size_t> frozen_idx;
    if ( frozen )
    {
        frozen_idx = sig.find( var_role::state, *frozen );
        if ( !frozen_idx )
            throw model_error( "unknown state variable '" + *frozen + "'" );
    }

    std::vector<step> init;
    try
    {
        init = s.initial_pairs( b );
    }
    catch ( const model_error& )
    {
        rep.total = false;
        rep.deterministic = false;
        rep.witnesses.push_back( "no initial pair" );
        return rep;
    }

    std::map<std::int32_t, int> per_frozen;
    for ( const auto& st : init )
        ++per_frozen[frozen_idx ? st.state.idx[*frozen_idx] : 0];
    for ( const auto& [k, count] : per_frozen )
        if ( count > 1 )
        {
            rep.deterministic = false;
            rep.witnesses.push_back( std::to_string( count ) + " initial pairs" +
                                     ( frozen_idx ? " for " + *frozen + "=" + sig.states()[*frozen_idx].domain.value_name( k ) : "" ) );
        }

    state_space space( s, b );
    std::deque<std::pair<int, std::size_t>> queue;
    std::set<int> seen;
    for ( const auto& e : space.initial() )
        if ( seen.insert( e.state ).second )
            queue.emplace_back( e.state, 0 );
    while ( !queue.empty() )
    {
        auto [id, d] = queue.front();
        queue.pop_front();
        rep.depth_reached = std::max( rep.depth_reached, d );
        if ( depth && d >= *depth )
            continue;
        for ( std::size_t i = 0; i < space.inputs().size(); ++i )
        {
            const auto& es = space.successors( id, i );
            if ( es.empty() )
            {
                rep.total = false;
                rep.witnesses.push_back( "no successor at " + format_valuation( sig, var_role::state, space.state( id ) ) +
                                         " on " + format_valuation( sig, var_role::input, space.inputs()[i] ) );
            }
            if ( es.size() > 1 )
            {
                rep.deterministic = false;
                rep.witnesses.push_back( std::to_string( es.size() ) + " successors at " +
                                         format_valuation( sig, var_role::state, space.state( id ) ) + " on " +
                                         format_valuation( sig, var_role::input, space.inputs()[i] ) );
            }
            for ( const auto& e : es )
                if ( seen.insert( e.state ).second )
                    queue.emplace_back( e.state, d + 1 );
        }
    }
    rep.reachable_states = seen.size();
    return rep;
}

} // namespace mutkill
