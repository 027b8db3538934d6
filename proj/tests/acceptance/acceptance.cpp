// One line per acceptance criterion; exit status 1 if any fails.

#include "corpus.hpp"
#include "fixtures.hpp"

#include "mutkill/determinize.hpp"
#include "mutkill/elaborate.hpp"
#include "mutkill/hyper.hpp"
#include "mutkill/killability.hpp"
#include "mutkill/trace.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace mutkill;
using namespace mutkill::testing;

namespace
{

using clock_type = std::chrono::steady_clock;

double since( clock_type::time_point t0 )
{
    return std::chrono::duration<double>( clock_type::now() - t0 ).count();
}

struct outcome
{
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report( int n, const std::string& title, const std::function<outcome()>& body )
{
    outcome o;
    try
    {
        o = body();
    }
    catch ( const std::exception& e )
    {
        o = { false, std::string( "exception: " ) + e.what() };
    }
    if ( !o.pass )
        ++failures;
    std::printf( "criterion %d %s: %s (%s)\n", n, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str() );
    std::fflush( stdout );
}

std::string fmt( const char* f, double x )
{
    char b[64];
    std::snprintf( b, sizeof b, f, x );
    return b;
}

conditional_mutant beverage_mutant( std::size_t offset, const std::string& replacement )
{
    auto m = beverage_ast();
    return build_conditional_mutant( m, custom_mutation( m, offset, replacement ) );
}

std::size_t fill_literal()
{
    auto src = beverage_source();
    std::string needle = "(in = fill) : 2";
    return src.find( needle ) + needle.size() - 1;
}

std::size_t drink_choice()
{
    return beverage_source().find( "{coff, tea}" );
}

constexpr std::size_t corpus_size = 200;
constexpr std::size_t bound = 5;

const std::vector<instance>& corpus()
{
    static const auto c = make_corpus( corpus_size, 20240501 );
    return c;
}

struct search_pair
{
    search_result potential;
    search_result definite;
};

const std::vector<search_pair>& searches()
{
    static const auto s = [] {
        std::vector<search_pair> out;
        for ( const auto& inst : corpus() )
            out.push_back( { search_potential( inst.original, inst.mutant, bound ),
                             search_definite( inst.original, inst.mutant, bound ) } );
        return out;
    }();
    return s;
}

hyper_formula phi( int k, const sts& s )
{
    return build_phi( k, value_aps( s.sig(), var_role::input ), value_aps( s.sig(), var_role::output ) );
}

std::vector<std::int32_t> flat( const projected_trace& p )
{
    std::vector<std::int32_t> v;
    for ( const auto& s : p.steps )
        v.insert( v.end(), s.begin(), s.end() );
    return v;
}

} // namespace

int main()
{
    report( 1, "fill-constant 2->1 mutant of the beverage machine is definitely killable", [] {
        auto t0 = clock_type::now();
        auto cm = beverage_mutant( fill_literal(), "1" );
        auto o = project( cm, false );
        auto m = project( cm, true );
        auto v = bounded_verdict( o, m, 7 );
        double secs = since( t0 );
        if ( v.status != verdict_status::definitely_killable || !v.definite_witness )
            return outcome{ false, std::string( "verdict " ) + to_string( v.status ) };
        const auto& t = *v.definite_witness;
        const auto& sig = o.sig();
        auto name = [&]( const valuation& out ) { return sig.outputs()[0].domain.value_name( out.idx[0] ); };
        auto last = name( t.outputs.back() );
        auto mlast = v.mutant_outputs.empty() ? std::string( "?" ) : name( v.mutant_outputs.back() );
        bool shape = ( last == "coff" || last == "tea" ) && mlast == "eps";
        bool kills = test_kills( o, m, t, kill_mode::definite );
        bool ok = t.length() <= 7 && shape && kills && secs < 1.0;
        return outcome{ ok, "witness length " + std::to_string( t.length() ) + ", final output " + last +
                                " vs mutant " + mlast + ", re-verified " + ( kills ? "yes" : "no" ) + ", " +
                                fmt( "%.3f s", secs ) };
    } );

    report( 2, "choice-widening fill mutant is potentially-only, coffee-only mutant is equivalent", [] {
        auto t0 = clock_type::now();
        auto a = decide_equivalence( beverage_mutant( fill_literal(), "{1, 2}" ) );
        double ta = since( t0 );
        t0 = clock_type::now();
        auto b = decide_equivalence( beverage_mutant( drink_choice(), "coff" ) );
        double tb = since( t0 );
        bool ok = a.status == verdict_status::potentially_only && b.status == verdict_status::equivalent &&
                  !b.bound && !b.exhausted && ta < 5 && tb < 5;
        return outcome{ ok, std::string( "{1, 2}: " ) + to_string( a.status ) + fmt( " in %.3f s", ta ) +
                                ", coffee-only: " + to_string( b.status ) + ( b.bound ? " (bounded)" : " (fixpoint)" ) +
                                fmt( " in %.3f s", tb ) };
    } );

    report( 3, "search verdicts equal the brute-force oracle on the random corpus", [] {
        auto t0 = clock_type::now();
        const auto& c = corpus();
        const auto& s = searches();
        std::size_t agree = 0, pk = 0, dk = 0;
        for ( std::size_t k = 0; k < c.size(); ++k )
        {
            auto o = brute_force_oracle( c[k].original, c[k].mutant, bound );
            auto sp = s[k].potential.killed ? std::optional<std::size_t>( s[k].potential.kill_depth ) : std::nullopt;
            auto sd = s[k].definite.killed ? std::optional<std::size_t>( s[k].definite.kill_depth ) : std::nullopt;
            if ( sp == o.potential_depth && sd == o.definite_depth )
                ++agree;
            else
                std::printf( "  mismatch on instance seed %llu\n", static_cast<unsigned long long>( c[k].seed ) );
            pk += sp.has_value();
            dk += sd.has_value();
        }
        double secs = since( t0 );
        bool ok = c.size() >= 200 && agree == c.size() && secs < 300;
        return outcome{ ok, std::to_string( agree ) + "/" + std::to_string( c.size() ) + " agree at bound " +
                                std::to_string( bound ) + " (" + std::to_string( pk ) + " potential, " +
                                std::to_string( dk ) + " definite kills), " + fmt( "%.2f s incl. corpus", secs ) };
    } );

    report( 4, "definite kill implies potential kill; they coincide for deterministic mutants", [] {
        const auto& c = corpus();
        const auto& s = searches();
        std::size_t implied = 0, det = 0, det_agree = 0;
        for ( std::size_t k = 0; k < c.size(); ++k )
        {
            bool p = s[k].potential.killed, d = s[k].definite.killed;
            implied += !d || p;
            if ( c[k].mutant_deterministic )
            {
                ++det;
                det_agree += p == d;
            }
        }
        bool ok = implied == c.size() && det_agree == det && det > 0;
        return outcome{ ok, std::to_string( implied ) + "/" + std::to_string( c.size() ) + " implications, " +
                                std::to_string( det_agree ) + "/" + std::to_string( det ) +
                                " deterministic-mutant instances coincide" };
    } );

    report( 5, "bounded killing formulas agree with killability verdicts", [] {
        auto t0 = clock_type::now();
        const auto& c = corpus();
        const auto& s = searches();
        std::size_t checks = 0, agree = 0, witnesses = 0, good_witnesses = 0;
        std::size_t strat_det = 0;
        std::ostringstream bad;
        for ( std::size_t k = 0; k < c.size(); ++k )
        {
            const auto& inst = c[k];
            bool pk = s[k].potential.killed, dk = s[k].definite.killed;
            std::vector<std::pair<int, bool>> cases{ { 2, pk }, { 3, dk } };
            if ( inst.original_deterministic )
            {
                ++strat_det;
                cases.push_back( { 1, pk } );
                cases.push_back( { 4, dk } );
            }
            for ( auto [n, expect] : cases )
            {
                auto f = phi( n, inst.cm.system );
                auto v = eval_bounded( inst.cm.system, f, bound );
                ++checks;
                if ( v.holds == expect )
                    ++agree;
                else if ( bad.tellp() < 200 )
                    bad << " phi" << n << "@seed" << inst.seed;
                if ( !v.holds || !v.witness )
                    continue;
                ++witnesses;
                hyper_options pin;
                pin.pin = *v.witness;
                bool again = eval_bounded( inst.cm.system, f, bound, pin ).holds;
                bool verifies = false;
                try
                {
                    auto t = witness_to_test( inst.cm.system, *v.witness, n );
                    verifies = test_kills( inst.original, inst.mutant, t, n >= 3 ? kill_mode::definite : kill_mode::potential );
                }
                catch ( const std::exception& )
                {
                }
                good_witnesses += again && verifies;
            }
        }
        double secs = since( t0 );
        bool ok = agree == checks && good_witnesses == witnesses;
        return outcome{ ok, std::to_string( agree ) + "/" + std::to_string( checks ) + " verdicts agree (" +
                                std::to_string( strat_det ) + " deterministic-original instances also check phi1, phi4), " +
                                std::to_string( good_witnesses ) + "/" + std::to_string( witnesses ) +
                                " witnesses re-evaluate and verify, " + fmt( "%.2f s", secs ) + bad.str() };
    } );

    report( 6, "determinized conditional mutants pass the transformation checks", [] {
        auto t0 = clock_type::now();
        const auto& c = corpus();
        std::size_t det = 0, incl = 0, sound = 0, over = 0;
        for ( const auto& inst : c )
        {
            auto d = determinize_explicit( inst.cm.system );
            auto r = verify_transform( inst.cm.system, d, 4 );
            det += r.deterministic;
            incl += r.inclusion;
            sound += r.sound;
            over += r.d_killable && r.cm_status == verdict_status::equivalent;
        }
        auto cm = beverage_mutant( drink_choice(), "coff" );
        auto d = determinize_explicit( cm.system );
        auto r = verify_transform( cm.system, d, 4 );
        bool exhibit = r.d_killable && r.cm_status == verdict_status::equivalent;
        bool ok = det == c.size() && incl == c.size() && sound == c.size() && exhibit;
        return outcome{ ok, "deterministic " + std::to_string( det ) + ", inclusion " + std::to_string( incl ) +
                                ", sound " + std::to_string( sound ) + " of " + std::to_string( c.size() ) + "; " +
                                std::to_string( over ) + " corpus over-approximations; coffee-only mutant " +
                                ( exhibit ? "is" : "is not" ) + " killable after determinization but equivalent, " +
                                fmt( "%.2f s", since( t0 ) ) };
    } );

    report( 7, "trace-assignment properties hold on 1000 sampled assignments", [] {
        using namespace ltl_ops;
        const auto& c = corpus();
        std::mt19937_64 rng( 99 );
        std::size_t ok_count = 0, same_inputs = 0, diverging = 0, orig_members = 0, mut_members = 0;
        const std::size_t samples = 1000;
        std::map<std::pair<std::size_t, std::size_t>, std::vector<trace>> cache;
        std::map<std::pair<std::size_t, std::size_t>, std::set<std::vector<std::int32_t>>> orig_set, mut_set;
        for ( std::size_t k = 0; k < samples; ++k )
        {
            std::size_t which = std::uniform_int_distribution<std::size_t>( 0, c.size() - 1 )( rng );
            std::size_t n = std::uniform_int_distribution<std::size_t>( 0, 4 )( rng );
            const auto& inst = c[which];
            const auto& sig = inst.cm.system.sig();
            auto key = std::make_pair( which, n );
            auto plain = names_of( inst.original.sig(), { var_role::input, var_role::output, var_role::state } );
            if ( !cache.count( key ) )
            {
                cache[key] = enumerate_traces( inst.cm.system, n );
                for ( const auto& t : enumerate_traces( inst.original, n ) )
                    orig_set[key].insert( flat( restrict( inst.original.sig(), t, plain ) ) );
                for ( const auto& t : enumerate_traces( inst.mutant, n ) )
                    mut_set[key].insert( flat( restrict( inst.mutant.sig(), t, plain ) ) );
            }
            const auto& ts = cache[key];
            const auto& p = ts[std::uniform_int_distribution<std::size_t>( 0, ts.size() - 1 )( rng )];
            auto inputs_of = [&]( const trace& t ) { return restrict( sig, t, names_of( sig, { var_role::input } ) ); };
            auto outputs_of = [&]( const trace& t ) { return restrict( sig, t, names_of( sig, { var_role::output } ) ); };
            const trace* q = &ts[std::uniform_int_distribution<std::size_t>( 0, ts.size() - 1 )( rng )];
            if ( std::bernoulli_distribution( 0.5 )( rng ) )
            {
                std::vector<const trace*> same;
                for ( const auto& t : ts )
                    if ( inputs_of( t ).steps == inputs_of( p ).steps )
                        same.push_back( &t );
                q = same[std::uniform_int_distribution<std::size_t>( 0, same.size() - 1 )( rng )];
            }
            std::map<std::string, trace> assignment{ { "p", p }, { "q", *q } };

            std::vector<ltl_ptr> in_iff, out_diff;
            for ( const auto& ap : value_aps( sig, var_role::input ) )
                in_iff.push_back( iff( atom( ap, "p" ), atom( ap, "q" ) ) );
            for ( const auto& ap : value_aps( sig, var_role::output ) )
                out_diff.push_back( neg( iff( atom( ap, "p" ), atom( ap, "q" ) ) ) );

            bool never_mut = evaluate_body( sig, always( neg( atom( "mut", "p" ) ) ), assignment );
            bool always_mut = evaluate_body( sig, always( atom( "mut", "p" ) ), assignment );
            bool eq_in = evaluate_body( sig, always( conj( in_iff ) ), assignment );
            bool diff_out = evaluate_body( sig, eventually( disj( out_diff ) ), assignment );

            auto mut_slot = *sig.find( var_role::state, "mut" );
            bool all_false = true, all_true = true;
            for ( const auto& st : p )
            {
                all_false &= st.state.idx[mut_slot] == 0;
                all_true &= st.state.idx[mut_slot] == 1;
            }
            auto rp = flat( restrict( sig, p, plain ) );
            bool in_orig = orig_set[key].count( rp ) != 0;
            bool in_mut = mut_set[key].count( rp ) != 0;
            orig_members += in_orig;
            mut_members += in_mut;

            bool item1 = ( !never_mut || in_orig ) && ( never_mut == ( all_false && in_orig ) );
            bool item2 = ( !always_mut || in_mut ) && ( always_mut == ( all_true && in_mut ) );
            bool item3 = eq_in == ( inputs_of( p ).steps == inputs_of( *q ).steps );
            bool item4 = diff_out == ( outputs_of( p ).steps != outputs_of( *q ).steps );
            same_inputs += eq_in;
            diverging += diff_out;
            ok_count += item1 && item2 && item3 && item4;
        }
        bool ok = ok_count == samples;
        return outcome{ ok, std::to_string( ok_count ) + "/" + std::to_string( samples ) + " samples (" +
                                std::to_string( same_inputs ) + " equal-input pairs, " + std::to_string( diverging ) +
                                " diverging pairs, " + std::to_string( orig_members ) + " original and " +
                                std::to_string( mut_members ) + " mutant memberships)" };
    } );

    report( 8, "parser and printer round trip", [] {
        std::mt19937_64 rng( 8 );
        std::size_t same = 0;
        const std::size_t n = 100;
        for ( std::size_t k = 0; k < n; ++k )
        {
            auto m = random_ast( rng );
            try
            {
                same += same_structure( parse_model( render( m ) ), m );
            }
            catch ( const std::exception& )
            {
            }
        }
        auto once = render( parse_model( beverage_source() ) );
        auto twice = render( parse_model( once ) );
        bool ok = same == n && once == twice;
        return outcome{ ok, std::to_string( same ) + "/" + std::to_string( n ) + " generated models survive, beverage " +
                                ( once == twice ? "idempotent" : "not idempotent" ) };
    } );

    report( 9, "beverage mutation catalogue", [] {
        auto m = beverage_ast();
        auto muts = enumerate_mutations( m );
        // which operator classes have a site, read off the syntax tree directly
        std::set<mutation_operator> expected;
        std::function<void( const expr& )> walk = [&]( const expr& e ) {
            if ( e.kind == expr_kind::int_lit )
                expected.insert( mutation_operator::replace_int_constant );
            if ( e.kind == expr_kind::unary && e.op == pred_op::not_ )
                expected.insert( mutation_operator::drop_not );
            if ( e.kind == expr_kind::unary && ( e.op == pred_op::neg || e.op == pred_op::pos ) )
                expected.insert( mutation_operator::swap_unary_plus_minus );
            if ( e.kind == expr_kind::binary )
                switch ( e.op )
                {
                case pred_op::add:
                case pred_op::sub:
                    expected.insert( mutation_operator::swap_binary_plus_minus );
                    break;
                case pred_op::eq:
                case pred_op::ne:
                    expected.insert( mutation_operator::swap_eq_neq );
                    expected.insert( mutation_operator::insert_not );
                    break;
                case pred_op::lt:
                case pred_op::le:
                case pred_op::gt:
                case pred_op::ge:
                    expected.insert( mutation_operator::swap_relational );
                    expected.insert( mutation_operator::insert_not );
                    break;
                case pred_op::and_:
                case pred_op::or_:
                    expected.insert( mutation_operator::swap_bool_connective );
                    expected.insert( mutation_operator::insert_not );
                    break;
                default:
                    break;
                }
            for ( const auto& a : e.args )
                walk( *a );
        };
        for ( const auto& s : m.sections )
            for ( const auto& a : s.assigns )
                walk( *a.rhs );

        std::set<mutation_operator> got;
        std::set<std::string> ids, texts;
        std::map<std::size_t, std::set<std::string>> constants;
        auto src = beverage_source();
        texts.insert( render( m ) );
        bool dup = false;
        for ( const auto& mu : muts )
        {
            got.insert( mu.op );
            dup |= !ids.insert( mu.id ).second;
            dup |= !texts.insert( render( apply_mutation( m, mu ) ) ).second;
            if ( mu.op == mutation_operator::replace_int_constant && mu.original == "2" )
                constants[mu.span.begin].insert( mu.replacement );
        }
        bool classes = got == expected;
        bool consts = !constants.empty();
        for ( const auto& [off, reps] : constants )
            consts &= reps.count( "0" ) && reps.count( "1" ) && reps.count( "3" );
        bool ok = classes && consts && !dup;
        return outcome{ ok, std::to_string( muts.size() ) + " mutants, " + std::to_string( got.size() ) + "/" +
                                std::to_string( expected.size() ) + " applicable operator classes, " +
                                std::to_string( constants.size() ) + " literal-2 sites with {0,1,3}" +
                                ( consts ? "" : " MISSING" ) + ", duplicates " + ( dup ? "found" : "none" ) };
    } );

    std::printf( "%d criteria failed\n", failures );
    return failures ? 1 : 0;
}
