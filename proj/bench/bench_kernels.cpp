// serial reference vs OpenMP kernels on the beverage machine

#include "fixtures.hpp"

#include "mutkill/hyper.hpp"
#include "mutkill/killability.hpp"
#include "mutkill/mutation.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <algorithm>

using namespace mutkill;
using namespace mutkill::testing;

namespace
{

conditional_mutant fill_mutant()
{
    auto m = beverage_ast();
    auto src = beverage_source();
    std::string needle = "(in = fill) : 2";
    return build_conditional_mutant( m, custom_mutation( m, src.find( needle ) + needle.size() - 1, "1" ) );
}

void score( benchmark::State& st )
{
    auto m = beverage_ast();
    auto muts = enumerate_mutations( m );
    score_options opts;
    opts.workers = static_cast<int>( st.range( 0 ) );
    for ( auto _ : st )
        benchmark::DoNotOptimize( mutation_score( m, muts, opts ) );
    st.counters["mutants"] = static_cast<double>( muts.size() );
}

hyper_formula phi( int k, const sts& s )
{
    return build_phi( k, value_aps( s.sig(), var_role::input ), value_aps( s.sig(), var_role::output ) );
}

void hyper_reference( benchmark::State& st )
{
    auto cm = fill_mutant();
    auto f = phi( static_cast<int>( st.range( 0 ) ), cm.system );
    for ( auto _ : st )
        benchmark::DoNotOptimize( eval_bounded_reference( cm.system, f, 4 ) );
}

void hyper_fast( benchmark::State& st )
{
    auto cm = fill_mutant();
    auto f = phi( static_cast<int>( st.range( 0 ) ), cm.system );
    hyper_options opts;
    opts.workers = static_cast<int>( st.range( 1 ) );
    for ( auto _ : st )
        benchmark::DoNotOptimize( eval_bounded( cm.system, f, 4, opts ) );
}

const int threads = std::max( 2, omp_get_max_threads() );

} // namespace

BENCHMARK( score )->Arg( 1 )->Arg( threads )->Unit( benchmark::kMillisecond );
BENCHMARK( hyper_reference )->Arg( 2 )->Arg( 4 )->Unit( benchmark::kMillisecond );
BENCHMARK( hyper_fast )->Args( { 2, 1 } )->Args( { 2, threads } )->Args( { 4, 1 } )->Args( { 4, threads } )->Unit(
    benchmark::kMillisecond );

BENCHMARK_MAIN();
