#pragma once

#include "domain.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mutkill
{

enum class var_role
{
    input,
    output,
    state
};

struct variable
{
    std::string name;
    var_domain domain;

    bool operator==( const variable& ) const = default;
};

// Variable layout shared by an STS and every predicate over it.
//
// Each group is kept sorted by name, which fixes the canonical valuation
// order. Slots are laid out as [inputs | outputs | states | next states];
// primed output references resolve to the output slot itself, since the
// output in a transition is the one produced by that transition.
class signature
{
public:
    signature( std::vector<variable> inputs, std::vector<variable> outputs, std::vector<variable> states,
               std::vector<std::string> extra_symbols = {} );
    signature( const signature& ) = delete;
    signature& operator=( const signature& ) = delete;

    [[nodiscard]] const std::vector<variable>& inputs() const { return inputs_; }
    [[nodiscard]] const std::vector<variable>& outputs() const { return outputs_; }
    [[nodiscard]] const std::vector<variable>& states() const { return states_; }
    [[nodiscard]] const std::vector<variable>& group( var_role role ) const;

    [[nodiscard]] int input_slot( std::size_t i ) const { return static_cast<int>( i ); }
    [[nodiscard]] int output_slot( std::size_t o ) const { return static_cast<int>( inputs_.size() + o ); }
    [[nodiscard]] int state_slot( std::size_t s ) const
    {
        return static_cast<int>( inputs_.size() + outputs_.size() + s );
    }
    [[nodiscard]] int next_slot( std::size_t s ) const
    {
        return static_cast<int>( inputs_.size() + outputs_.size() + states_.size() + s );
    }
    [[nodiscard]] int group_slot( var_role role, std::size_t i ) const;
    [[nodiscard]] std::size_t slot_count() const { return slots_.size(); }

    [[nodiscard]] std::optional<int> find_slot( std::string_view name, bool primed ) const;
    [[nodiscard]] std::optional<std::size_t> find( var_role role, std::string_view name ) const;
    [[nodiscard]] bool declares( std::string_view name ) const;

    [[nodiscard]] const variable& slot_variable( int slot ) const { return *slots_[slot].var; }
    [[nodiscard]] var_role slot_role( int slot ) const { return slots_[slot].role; }
    [[nodiscard]] bool slot_primed( int slot ) const { return slots_[slot].primed; }
    [[nodiscard]] std::string slot_name( int slot ) const;
    [[nodiscard]] const value& slot_value( int slot, std::int32_t index ) const { return slots_[slot].values[index]; }
    [[nodiscard]] std::optional<std::int32_t> index_of_value( int slot, const value& v ) const;

    [[nodiscard]] std::optional<std::int64_t> symbol( std::string_view literal ) const;
    [[nodiscard]] const std::string& symbol_name( std::int64_t id ) const { return symbols_[id]; }
    [[nodiscard]] std::string format( const value& v ) const;

    // Number of valuations of a group, or nullopt beyond 2^62.
    [[nodiscard]] std::optional<std::uint64_t> group_cardinality( var_role role ) const;

private:
    struct slot_info
    {
        const variable* var = nullptr;
        var_role role = var_role::input;
        bool primed = false;
        std::vector<value> values;
    };

    std::vector<variable> inputs_;
    std::vector<variable> outputs_;
    std::vector<variable> states_;
    std::vector<slot_info> slots_;
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, std::int64_t> symbol_ids_;
};

using signature_ptr = std::shared_ptr<const signature>;

} // namespace mutkill
