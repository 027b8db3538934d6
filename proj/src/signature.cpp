#include "mutkill/signature.hpp"
#include "mutkill/errors.hpp"

#include <algorithm>
#include <set>

namespace mutkill
{

namespace
{
void sort_by_name( std::vector<variable>& vars )
{
    std::sort( vars.begin(), vars.end(), []( const variable& a, const variable& b ) { return a.name < b.name; } );
}
} // namespace

signature::signature( std::vector<variable> inputs, std::vector<variable> outputs, std::vector<variable> states,
                      std::vector<std::string> extra_symbols )
    : inputs_( std::move( inputs ) ), outputs_( std::move( outputs ) ), states_( std::move( states ) )
{
    sort_by_name( inputs_ );
    sort_by_name( outputs_ );
    sort_by_name( states_ );

    std::set<std::string> seen;
    for ( const auto* group : { &inputs_, &outputs_, &states_ } )
        for ( const auto& v : *group )
            if ( !seen.insert( v.name ).second )
                throw model_error( "variable '" + v.name + "' declared twice" );

    auto intern = [this]( const std::string& lit ) {
        if ( symbol_ids_.emplace( lit, static_cast<std::int64_t>( symbols_.size() ) ).second )
            symbols_.push_back( lit );
    };
    for ( const auto* group : { &inputs_, &outputs_, &states_ } )
        for ( const auto& v : *group )
            for ( const auto& lit : v.domain.literals() )
                intern( lit );
    for ( const auto& lit : extra_symbols )
        intern( lit );

    auto add_slot = [this]( const variable& v, var_role role, bool primed ) {
        slot_info info;
        info.var = &v;
        info.role = role;
        info.primed = primed;
        for ( std::size_t i = 0; i < v.domain.size(); ++i )
        {
            switch ( v.domain.kind() )
            {
            case domain_kind::boolean:
                info.values.push_back( value::of_bool( i != 0 ) );
                break;
            case domain_kind::integer:
                info.values.push_back( value::of_int( v.domain.lo() + static_cast<std::int64_t>( i ) ) );
                break;
            case domain_kind::enumeration:
                info.values.push_back( value::of_enum( symbol_ids_.at( v.domain.literals()[i] ) ) );
                break;
            }
        }
        slots_.push_back( std::move( info ) );
    };
    for ( const auto& v : inputs_ )
        add_slot( v, var_role::input, false );
    for ( const auto& v : outputs_ )
        add_slot( v, var_role::output, false );
    for ( const auto& v : states_ )
        add_slot( v, var_role::state, false );
    for ( const auto& v : states_ )
        add_slot( v, var_role::state, true );
}

const std::vector<variable>& signature::group( var_role role ) const
{
    switch ( role )
    {
    case var_role::input:
        return inputs_;
    case var_role::output:
        return outputs_;
    case var_role::state:
        break;
    }
    return states_;
}

int signature::group_slot( var_role role, std::size_t i ) const
{
    switch ( role )
    {
    case var_role::input:
        return input_slot( i );
    case var_role::output:
        return output_slot( i );
    case var_role::state:
        break;
    }
    return state_slot( i );
}

std::optional<std::size_t> signature::find( var_role role, std::string_view name ) const
{
    const auto& g = group( role );
    auto it = std::lower_bound( g.begin(), g.end(), name,
                                []( const variable& v, std::string_view n ) { return v.name < n; } );
    if ( it == g.end() || it->name != name )
        return std::nullopt;
    return static_cast<std::size_t>( it - g.begin() );
}

bool signature::declares( std::string_view name ) const
{
    return find( var_role::input, name ) || find( var_role::output, name ) || find( var_role::state, name );
}

std::optional<int> signature::find_slot( std::string_view name, bool primed ) const
{
    if ( auto s = find( var_role::state, name ) )
        return primed ? next_slot( *s ) : state_slot( *s );
    if ( auto o = find( var_role::output, name ) )
        return output_slot( *o );
    if ( primed )
        return std::nullopt;
    if ( auto i = find( var_role::input, name ) )
        return input_slot( *i );
    return std::nullopt;
}

std::string signature::slot_name( int slot ) const
{
    return slots_[slot].var->name + ( slots_[slot].primed ? "'" : "" );
}

std::optional<std::int32_t> signature::index_of_value( int slot, const value& v ) const
{
    const auto& vals = slots_[slot].values;
    for ( std::size_t i = 0; i < vals.size(); ++i )
        if ( vals[i] == v )
            return static_cast<std::int32_t>( i );
    return std::nullopt;
}

std::optional<std::int64_t> signature::symbol( std::string_view literal ) const
{
    auto it = symbol_ids_.find( std::string( literal ) );
    if ( it == symbol_ids_.end() )
        return std::nullopt;
    return it->second;
}

std::string signature::format( const value& v ) const
{
    switch ( v.type )
    {
    case value_type::boolean:
        return v.v ? "true" : "false";
    case value_type::integer:
        return std::to_string( v.v );
    case value_type::enumeration:
        return symbols_.at( static_cast<std::size_t>( v.v ) );
    }
    return {};
}

std::optional<std::uint64_t> signature::group_cardinality( var_role role ) const
{
    std::uint64_t n = 1;
    for ( const auto& v : group( role ) )
    {
        if ( n > ( std::uint64_t{ 1 } << 62 ) / v.domain.size() )
            return std::nullopt;
        n *= v.domain.size();
    }
    return n;
}

} // namespace mutkill
