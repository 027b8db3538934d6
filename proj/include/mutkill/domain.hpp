#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mutkill
{

enum class domain_kind
{
    boolean,
    enumeration,
    integer
};

// Finite value domain of one variable. Values are addressed by their index
// in domain order (false < true, declaration order, ascending integers).
class var_domain
{
public:
    static var_domain boolean();
    static var_domain enumeration( std::vector<std::string> literals );
    static var_domain integer( std::int64_t lo, std::int64_t hi );

    [[nodiscard]] domain_kind kind() const { return kind_; }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] const std::vector<std::string>& literals() const { return literals_; }
    [[nodiscard]] std::int64_t lo() const { return lo_; }
    [[nodiscard]] std::int64_t hi() const { return hi_; }

    [[nodiscard]] std::optional<std::size_t> index_of_literal( std::string_view lit ) const;
    [[nodiscard]] std::optional<std::size_t> index_of_int( std::int64_t v ) const;
    [[nodiscard]] std::string value_name( std::size_t index ) const;
    [[nodiscard]] std::string type_name() const;

    bool operator==( const var_domain& ) const = default;

private:
    domain_kind kind_ = domain_kind::boolean;
    std::vector<std::string> literals_;
    std::int64_t lo_ = 0;
    std::int64_t hi_ = 1;
};

enum class value_type
{
    boolean,
    integer,
    enumeration
};

// Runtime value during predicate evaluation. Enumeration values hold a
// symbol id from the owning signature.
struct value
{
    value_type type = value_type::boolean;
    std::int64_t v = 0;

    static value of_bool( bool b ) { return { value_type::boolean, b ? 1 : 0 }; }
    static value of_int( std::int64_t i ) { return { value_type::integer, i }; }
    static value of_enum( std::int64_t sym ) { return { value_type::enumeration, sym }; }

    bool operator==( const value& ) const = default;
    auto operator<=>( const value& ) const = default;
};

[[nodiscard]] const char* to_string( value_type t );

// Assignment of domain indices to one group of variables (inputs, outputs
// or states), ordered like the group. Comparison is the canonical order.
struct valuation
{
    std::vector<std::int32_t> idx;

    bool operator==( const valuation& ) const = default;
    auto operator<=>( const valuation& ) const = default;
};

} // namespace mutkill
