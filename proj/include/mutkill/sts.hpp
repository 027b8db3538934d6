#pragma once

#include "errors.hpp"
#include "predicate.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mutkill
{

constexpr std::uint64_t default_budget = 10'000'000;

// Node counter shared by one enumeration or search.
class budget
{
public:
    explicit budget( std::uint64_t limit = default_budget ) : limit_( limit ) {}

    void charge( std::uint64_t n = 1 )
    {
        used_ += n;
        if ( used_ > limit_ )
            throw budget_exhausted( "budget of " + std::to_string( limit_ ) + " nodes exhausted" );
    }
    [[nodiscard]] std::uint64_t used() const { return used_; }
    [[nodiscard]] std::uint64_t limit() const { return limit_; }

private:
    std::uint64_t limit_;
    std::uint64_t used_ = 0;
};

// (output, state) produced by init or by one transition.
struct step
{
    valuation output;
    valuation state;

    bool operator==( const step& ) const = default;
    auto operator<=>( const step& ) const = default;
};

// Finite-domain symbolic transition system <I, O, X, init, trans>.
class sts
{
public:
    sts( signature_ptr sig, predicate init, predicate trans );

    [[nodiscard]] const signature& sig() const { return *sig_; }
    [[nodiscard]] const signature_ptr& sig_ptr() const { return sig_; }
    [[nodiscard]] const predicate& init() const { return init_; }
    [[nodiscard]] const predicate& trans() const { return trans_; }

    // Every (O, X) satisfying init, canonical order. Throws model_error if none.
    [[nodiscard]] std::vector<step> initial_pairs( budget* b = nullptr ) const;
    // Every (O, X') with I, O, X, X' satisfying trans, canonical order.
    [[nodiscard]] std::vector<step> successors( const valuation& state, const valuation& input,
                                                budget* b = nullptr ) const;

    // All valuations of a group in canonical order.
    [[nodiscard]] std::vector<valuation> all_valuations( var_role role ) const;

private:
    struct schedule
    {
        std::vector<int> unknowns;
        std::vector<predicate> ground;                 // checked before any assignment
        std::vector<std::vector<predicate>> after;     // after[k]: checked once unknowns[0..k] are set
    };

    static schedule make_schedule( const signature& sig, const predicate& p, std::vector<int> unknowns,
                                   const std::vector<int>& allowed_fixed );
    std::vector<step> solve( const schedule& s, environment& env, budget* b ) const;

    signature_ptr sig_;
    predicate init_;
    predicate trans_;
    schedule init_schedule_;
    schedule trans_schedule_;
};

// Mixed-radix rank of a group valuation (first variable most significant).
[[nodiscard]] std::uint64_t rank( const signature& sig, var_role role, const valuation& v );
[[nodiscard]] valuation unrank( const signature& sig, var_role role, std::uint64_t r );

[[nodiscard]] std::string format_valuation( const signature& sig, var_role role, const valuation& v );

// Lazily explored state graph with memoized successors, keyed by interned ids.
class state_space
{
public:
    struct edge
    {
        std::uint64_t output;  // rank of the output valuation
        int state;
    };

    explicit state_space( const sts& s, budget* b = nullptr );

    [[nodiscard]] const sts& system() const { return *sts_; }
    [[nodiscard]] const std::vector<valuation>& inputs() const { return inputs_; }
    [[nodiscard]] const std::vector<edge>& initial();
    [[nodiscard]] const std::vector<edge>& successors( int state, std::size_t input );

    int intern( const valuation& state );
    [[nodiscard]] const valuation& state( int id ) const { return states_[id]; }
    [[nodiscard]] std::size_t state_count() const { return states_.size(); }

private:
    const sts* sts_;
    budget* budget_;
    std::vector<valuation> inputs_;
    std::vector<valuation> states_;
    std::map<valuation, int> ids_;
    std::optional<std::vector<edge>> initial_;
    std::deque<std::vector<std::optional<std::vector<edge>>>> succ_;
};

struct validation_report
{
    bool deterministic = true;
    bool total = true;
    std::size_t reachable_states = 0;
    std::size_t depth_reached = 0;
    std::vector<std::string> witnesses;
};

// Checks determinism and totality over states reachable within `depth`
// steps (to the fixpoint if absent). With `frozen`, determinism is judged
// per value of that state variable (one initial pair per value).
[[nodiscard]] validation_report validate( const sts& s, std::optional<std::size_t> depth = std::nullopt,
                                          std::optional<std::string> frozen = std::nullopt, budget* b = nullptr );

} // namespace mutkill
