#include "mutkill/domain.hpp"
#include "mutkill/errors.hpp"

#include <algorithm>
#include <sstream>

namespace mutkill
{

namespace
{
std::string join_diagnostics( const std::vector<diagnostic>& diags )
{
    std::ostringstream os;
    for ( std::size_t i = 0; i < diags.size(); ++i )
    {
        if ( i )
            os << '\n';
        if ( diags[i].line )
            os << diags[i].line << ':' << diags[i].column << ": ";
        os << diags[i].message;
    }
    return os.str();
}
} // namespace

parse_error::parse_error( std::vector<diagnostic> diags )
    : std::runtime_error( join_diagnostics( diags ) ), diags_( std::move( diags ) )
{
}

var_domain var_domain::boolean()
{
    return var_domain{};
}

var_domain var_domain::enumeration( std::vector<std::string> literals )
{
    if ( literals.empty() )
        throw model_error( "enumeration domain needs at least one literal" );
    var_domain d;
    d.kind_ = domain_kind::enumeration;
    d.literals_ = std::move( literals );
    d.lo_ = 0;
    d.hi_ = static_cast<std::int64_t>( d.literals_.size() ) - 1;
    return d;
}

var_domain var_domain::integer( std::int64_t lo, std::int64_t hi )
{
    if ( lo > hi )
        throw model_error( "integer domain has lo > hi" );
    var_domain d;
    d.kind_ = domain_kind::integer;
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
}

std::size_t var_domain::size() const
{
    switch ( kind_ )
    {
    case domain_kind::boolean:
        return 2;
    case domain_kind::enumeration:
        return literals_.size();
    case domain_kind::integer:
        return static_cast<std::size_t>( hi_ - lo_ + 1 );
    }
    return 0;
}

std::optional<std::size_t> var_domain::index_of_literal( std::string_view lit ) const
{
    if ( kind_ == domain_kind::boolean )
    {
        if ( lit == "false" )
            return 0;
        if ( lit == "true" )
            return 1;
        return std::nullopt;
    }
    if ( kind_ != domain_kind::enumeration )
        return std::nullopt;
    auto it = std::find( literals_.begin(), literals_.end(), lit );
    if ( it == literals_.end() )
        return std::nullopt;
    return static_cast<std::size_t>( it - literals_.begin() );
}

std::optional<std::size_t> var_domain::index_of_int( std::int64_t v ) const
{
    if ( kind_ != domain_kind::integer || v < lo_ || v > hi_ )
        return std::nullopt;
    return static_cast<std::size_t>( v - lo_ );
}

std::string var_domain::value_name( std::size_t index ) const
{
    switch ( kind_ )
    {
    case domain_kind::boolean:
        return index ? "true" : "false";
    case domain_kind::enumeration:
        return literals_.at( index );
    case domain_kind::integer:
        return std::to_string( lo_ + static_cast<std::int64_t>( index ) );
    }
    return {};
}

std::string var_domain::type_name() const
{
    switch ( kind_ )
    {
    case domain_kind::boolean:
        return "bool";
    case domain_kind::enumeration:
    {
        std::string s = "enum {";
        for ( std::size_t i = 0; i < literals_.size(); ++i )
            s += ( i ? ", " : "" ) + literals_[i];
        return s + "}";
    }
    case domain_kind::integer:
        return "int[" + std::to_string( lo_ ) + ".." + std::to_string( hi_ ) + "]";
    }
    return {};
}

const char* to_string( value_type t )
{
    switch ( t )
    {
    case value_type::boolean:
        return "bool";
    case value_type::integer:
        return "int";
    case value_type::enumeration:
        return "enum";
    }
    return "?";
}

} // namespace mutkill
