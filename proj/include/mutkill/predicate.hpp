#pragma once

#include "signature.hpp"

#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

namespace mutkill
{

enum class pred_op
{
    constant,
    var,
    not_,
    neg,
    pos,
    add,
    sub,
    and_,
    or_,
    implies,
    iff,
    xor_,
    xnor,
    eq,
    ne,
    lt,
    le,
    gt,
    ge,
    ite,      // args: g1, v1, g2, v2, ..., else
    set,      // only inside member
    member,   // args: var ref, set expression
    relation  // explicit table over a list of slots
};

struct index_tuple_hash
{
    std::size_t operator()( const std::vector<std::int32_t>& t ) const noexcept;
};

// Finite relation given by its rows of domain indices.
struct relation_table
{
    std::vector<int> slots;
    std::unordered_set<std::vector<std::int32_t>, index_tuple_hash> rows;
};

struct pred_node;
using predicate = std::shared_ptr<const pred_node>;

struct pred_node
{
    pred_op op = pred_op::constant;
    value constant{};
    int slot = -1;
    std::vector<predicate> args;
    std::shared_ptr<const relation_table> table;
};

namespace pred
{
predicate constant( value v );
predicate truth( bool b );
predicate var( int slot );
predicate unary( pred_op op, predicate a );
predicate binary( pred_op op, predicate a, predicate b );
predicate ite( std::vector<predicate> args );
predicate set( std::vector<predicate> elements );
predicate member( predicate var_ref, predicate set_expr );
predicate relation( std::shared_ptr<const relation_table> table );
// n-ary conjunction/disjunction folded left; empty gives true/false.
predicate conj( std::vector<predicate> parts );
predicate disj( std::vector<predicate> parts );
predicate equals( int slot, const value& v );
predicate equals_expr( int slot, predicate e );
} // namespace pred

// Slot assignment of domain indices; -1 marks an unbound slot.
class environment
{
public:
    explicit environment( const signature& sig );

    void bind( int slot, std::int32_t index ) { slots_[slot] = index; }
    void unbind( int slot ) { slots_[slot] = -1; }
    [[nodiscard]] std::int32_t get( int slot ) const { return slots_[slot]; }
    [[nodiscard]] const signature& sig() const { return *sig_; }

    void bind_group( var_role role, const valuation& v, bool primed = false );
    void clear();

private:
    const signature* sig_;
    std::vector<std::int32_t> slots_;
};

[[nodiscard]] value evaluate( const predicate& p, const environment& env );
[[nodiscard]] bool holds( const predicate& p, const environment& env );
[[nodiscard]] std::vector<value> evaluate_set( const predicate& p, const environment& env );

// Appends every slot referenced by p (var nodes and relation columns).
void collect_slots( const predicate& p, std::vector<int>& out );

// Top-level conjuncts of p.
void flatten_conjuncts( const predicate& p, std::vector<predicate>& out );

// Rewrites var nodes through `target`: either a new slot or a fixed domain
// index of the old slot (turned into a constant). Relation rows are
// filtered on fixed columns and the columns dropped.
struct slot_target
{
    int new_slot = -1;
    std::int32_t fixed_index = -1;
};
[[nodiscard]] predicate remap( const predicate& p, const signature& from, const std::vector<slot_target>& target );

[[nodiscard]] std::string to_string( const predicate& p, const signature& sig );

} // namespace mutkill
