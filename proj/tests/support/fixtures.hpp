#pragma once

#include "mutkill/ast.hpp"
#include "mutkill/elaborate.hpp"

#include <fstream>
#include <sstream>
#include <string>

#ifndef MUTKILL_MODEL_DIR
#define MUTKILL_MODEL_DIR "models"
#endif

namespace mutkill::testing
{

inline std::string read_file( const std::string& path )
{
    std::ifstream in( path );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string beverage_source()
{
    return read_file( std::string( MUTKILL_MODEL_DIR ) + "/beverage.rm" );
}

inline model_ast beverage_ast()
{
    return parse_model( beverage_source() );
}

inline valuation val( const signature& sig, var_role role, std::initializer_list<std::string> values )
{
    valuation v;
    std::size_t k = 0;
    for ( const auto& s : values )
    {
        const auto& d = sig.group( role ).at( k++ ).domain;
        std::optional<std::size_t> i;
        if ( d.kind() == domain_kind::enumeration )
            i = d.index_of_literal( s );
        else if ( d.kind() == domain_kind::boolean )
            i = s == "true" ? 1 : 0;
        else
            i = d.index_of_int( std::stoll( s ) );
        v.idx.push_back( static_cast<std::int32_t>( i.value() ) );
    }
    return v;
}

} // namespace mutkill::testing
