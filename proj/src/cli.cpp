#include "mutkill/cli.hpp"
#include "mutkill/determinize.hpp"
#include "mutkill/elaborate.hpp"
#include "mutkill/errors.hpp"
#include "mutkill/hyper.hpp"
#include "mutkill/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mutkill
{

namespace
{

std::string read_text( const std::string& path )
{
    std::ifstream in( path );
    if ( !in )
        throw model_error( "cannot read " + path );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text( const std::string& dir, const std::string& name, const std::string& text )
{
    std::filesystem::create_directories( dir );
    auto path = std::filesystem::path( dir ) / name;
    std::ofstream f( path );
    if ( !f )
        throw model_error( "cannot write " + path.string() );
    f << text;
}

kill_mode mode_of( const std::string& m )
{
    return m == "potential" ? kill_mode::potential : kill_mode::definite;
}

mutation_options mutation_opts( const run_config& cfg )
{
    mutation_options o;
    o.include_init_sites = cfg.include_init;
    for ( const auto& name : cfg.ops )
    {
        auto op = operator_from_name( name );
        if ( !op || *op == mutation_operator::custom )
            throw model_error( "unknown mutation operator '" + name + "'" );
        o.ops.insert( *op );
    }
    return o;
}

// catalogue id, or @offset=replacement for a hand-written mutation
mutation find_mutant( const model_ast& m, const run_config& cfg )
{
    if ( cfg.mutant.empty() )
        throw model_error( "no --mutant given" );
    if ( cfg.mutant.front() == '@' )
    {
        auto eq = cfg.mutant.find( '=' );
        if ( eq == std::string::npos )
            throw model_error( "custom mutant must read @offset=replacement" );
        std::size_t offset = 0;
        try
        {
            offset = std::stoul( cfg.mutant.substr( 1, eq - 1 ) );
        }
        catch ( const std::exception& )
        {
            throw model_error( "bad offset in '" + cfg.mutant + "'" );
        }
        return custom_mutation( m, offset, cfg.mutant.substr( eq + 1 ) );
    }
    mutation_options all;
    for ( const auto& mu : enumerate_mutations( m, all ) )
        if ( mu.id == cfg.mutant )
            return mu;
    throw model_error( "no mutant with id '" + cfg.mutant + "'" );
}

judge_fn judge_for( const run_config& cfg )
{
    if ( cfg.mode == "equivalence" )
        return [&cfg]( const conditional_mutant& cm ) { return decide_equivalence( cm, cfg.budget ); };
    if ( cfg.mode == "hyper" )
        return [&cfg]( const conditional_mutant& cm ) {
            return hyper_judge( cm, cfg.bound, cfg.budget, cfg.determinize );
        };
    return {};
}

std::string format_test( const signature& sig, const test_case& t )
{
    std::ostringstream o;
    o << "  0: " << format_valuation( sig, var_role::output, t.outputs[0] ) << "\n";
    for ( std::size_t j = 0; j < t.inputs.size(); ++j )
        o << "  " << j + 1 << ": " << format_valuation( sig, var_role::input, t.inputs[j] ) << " / "
          << format_valuation( sig, var_role::output, t.outputs[j + 1] ) << "\n";
    return o.str();
}

json trace_json( const signature& sig, const trace& t )
{
    json a = json::array();
    for ( const auto& s : t )
        a.push_back( { { "input", s.input ? to_json( sig, var_role::input, *s.input ) : json( nullptr ) },
                       { "output", to_json( sig, var_role::output, s.output ) },
                       { "state", to_json( sig, var_role::state, s.state ) } } );
    return a;
}

run_info info_of( const run_config& cfg )
{
    return { cfg.model, cfg.bound, cfg.mode, cfg.workers, cfg.seed, cfg.budget };
}

exit_code cmd_validate( const run_config& cfg, const model_ast& m, std::ostream& out )
{
    auto s = elaborate( m );
    budget b( cfg.budget );
    auto r = validate( s, cfg.depth, std::nullopt, &b );
    if ( cfg.format == "text" )
    {
        out << "deterministic: " << ( r.deterministic ? "yes" : "no" ) << "\n"
            << "total: " << ( r.total ? "yes" : "no" ) << "\n"
            << "reachable states: " << r.reachable_states << "\n";
        for ( const auto& w : r.witnesses )
            out << "  " << w << "\n";
    }
    else
        out << to_json( r ).dump( 2 ) << "\n";
    return exit_code::ok;
}

exit_code cmd_mutants( const run_config& cfg, const model_ast& m, std::ostream& out )
{
    std::string lines;
    for ( const auto& mu : enumerate_mutations( m, mutation_opts( cfg ) ) )
        lines += to_json( mu ).dump() + "\n";
    if ( !cfg.out_dir.empty() )
        write_text( cfg.out_dir, "mutants.jsonl", lines );
    else
        out << lines;
    return exit_code::ok;
}

exit_code cmd_kill( const run_config& cfg, const model_ast& m, std::ostream& out )
{
    auto sys = elaborate( m );
    auto mu = find_mutant( m, cfg );
    auto cm = build_conditional_mutant( m, mu );
    kill_verdict v;
    if ( cfg.mode == "equivalence" )
        v = decide_equivalence( cm, cfg.budget );
    else if ( cfg.mode == "hyper" )
        v = hyper_judge( cm, cfg.bound, cfg.budget, cfg.determinize, cfg.workers );
    else
        v = bounded_verdict( project( cm, false ), project( cm, true ), cfg.bound, cfg.budget );

    std::optional<test_case> test = cfg.mode == "potential" ? v.potential_witness : v.witness;
    if ( cfg.format == "text" )
    {
        out << mu.id << ": " << to_string( v.status );
        if ( v.bound )
            out << " (bound " << *v.bound << ")";
        out << "\n";
        if ( test )
            out << format_test( sys.sig(), *test );
        if ( !v.note.empty() )
            out << v.note << "\n";
    }
    else
    {
        json o;
        o["mutant"] = to_json( mu );
        o["verdict"] = to_json( sys.sig(), v );
        o["test"] = test ? to_json( sys.sig(), *test ) : json( nullptr );
        out << o.dump( 2 ) << "\n";
    }
    return v.exhausted ? exit_code::budget : exit_code::ok;
}

score_report score_all( const run_config& cfg, const model_ast& m )
{
    score_options o;
    o.bound = cfg.bound;
    o.budget_limit = cfg.budget;
    o.workers = cfg.workers;
    o.suite_mode = mode_of( cfg.mode );
    o.judge = judge_for( cfg );
    return mutation_score( m, enumerate_mutations( m, mutation_opts( cfg ) ), o );
}

std::string suite_lines( const signature& sig, const score_report& r )
{
    std::string lines;
    for ( const auto& e : r.suite )
        lines += to_json( sig, e ).dump() + "\n";
    return lines;
}

exit_code budget_code( const score_report& r )
{
    return r.aggregate.resource_limit ? exit_code::budget : exit_code::ok;
}

exit_code cmd_testsuite( const run_config& cfg, const model_ast& m, std::ostream& out )
{
    auto sys = elaborate( m );
    auto r = score_all( cfg, m );
    auto lines = suite_lines( sys.sig(), r );
    if ( !cfg.out_dir.empty() )
        write_text( cfg.out_dir, "tests.jsonl", lines );
    else
        out << lines;
    return budget_code( r );
}

exit_code cmd_score( const run_config& cfg, const model_ast& m, std::ostream& out )
{
    auto sys = elaborate( m );
    auto r = score_all( cfg, m );
    auto info = info_of( cfg );
    auto report = report_json( info, sys.sig(), r ).dump( 2 ) + "\n";
    auto summary = human_summary( info, r );
    if ( !cfg.out_dir.empty() )
    {
        write_text( cfg.out_dir, "report.json", report );
        write_text( cfg.out_dir, "tests.jsonl", suite_lines( sys.sig(), r ) );
        write_text( cfg.out_dir, "summary.txt", summary );
    }
    out << ( cfg.format == "text" ? summary : report );
    return budget_code( r );
}

exit_code cmd_determinize( const run_config& cfg, const model_ast& m, std::ostream& out )
{
    if ( cfg.format == "json" && !cfg.mutant.empty() )
    {
        auto cm = build_conditional_mutant( m, find_mutant( m, cfg ) );
        budget b( cfg.budget );
        auto d = determinize_explicit( cm.system, &b );
        json o;
        o["mutant"] = cm.applied.id;
        o["system"] = to_json( d );
        o["checks"] = to_json( verify_transform( cm.system, d, std::min<std::size_t>( cfg.bound, 4 ), cfg.budget ) );
        auto text = o.dump( 2 ) + "\n";
        if ( !cfg.out_dir.empty() )
            write_text( cfg.out_dir, "determinized.json", text );
        else
            out << text;
        return exit_code::ok;
    }
    model_ast src = m;
    if ( !cfg.mutant.empty() )
        src = build_conditional_mutant( m, find_mutant( m, cfg ) ).ast;
    auto text = render( determinize_syntactic( src ) );
    if ( !cfg.out_dir.empty() )
        write_text( cfg.out_dir, "determinized.rm", text );
    else
        out << text;
    return exit_code::ok;
}

exit_code cmd_hyper( const run_config& cfg, const model_ast& m, std::ostream& out )
{
    std::optional<conditional_mutant> cm;
    std::optional<determinized> d;
    if ( !cfg.mutant.empty() )
        cm = build_conditional_mutant( m, find_mutant( m, cfg ) );
    if ( cfg.determinize )
    {
        if ( !cm )
            throw model_error( "--determinize needs --mutant" );
        budget b( cfg.budget );
        d = determinize_explicit( cm->system, &b );
    }
    const sts system = d ? d->system : cm ? cm->system : elaborate( m );

    hyper_formula f;
    if ( cfg.phi )
        f = build_phi( cfg.phi, value_aps( system.sig(), var_role::input ), value_aps( system.sig(), var_role::output ) );
    else if ( !cfg.formula.empty() )
        f = parse_hyper( read_text( cfg.formula ) );
    else
        throw model_error( "hyper needs a formula file or --phi" );

    hyper_options o;
    o.workers = cfg.workers;
    o.budget_limit = cfg.budget;
    auto v = eval_bounded( system, f, cfg.bound, o );

    json r;
    r["formula"] = to_string( f );
    r["bound"] = v.bound;
    r["holds"] = v.holds;
    r["nodes"] = v.nodes;
    r["witness"] = v.witness ? trace_json( system.sig(), *v.witness ) : json( nullptr );
    if ( v.holds && v.witness && cm && !d && cfg.phi )
    {
        auto t = witness_to_test( cm->system, *v.witness, cfg.phi );
        r["test"] = to_json( project( *cm, false ).sig(), t );
        r["test_mode"] = cfg.phi >= 3 ? "definite" : "potential";
    }
    if ( cfg.format == "text" )
    {
        out << r["formula"].get<std::string>() << "\n"
            << ( v.holds ? "holds" : "does not hold" ) << " at bound " << v.bound << "\n";
        if ( v.witness )
            out << format_trace( system.sig(), *v.witness ) << "\n";
    }
    else
        out << r.dump( 2 ) << "\n";
    return exit_code::ok;
}

// shortest prefix of the test that kills in the given mode
std::optional<test_case> killing_prefix( const sts& original, const sts& mutant, const test_case& t, kill_mode mode,
                                         budget* b )
{
    for ( std::size_t k = 0; k <= t.inputs.size(); ++k )
    {
        test_case p{ { t.inputs.begin(), t.inputs.begin() + static_cast<std::ptrdiff_t>( k ) },
                     { t.outputs.begin(), t.outputs.begin() + static_cast<std::ptrdiff_t>( k + 1 ) } };
        try
        {
            if ( test_kills( original, mutant, p, mode, b ) )
                return p;
        }
        catch ( const model_error& )
        {
            return std::nullopt;  // not a run of the original
        }
    }
    return std::nullopt;
}

} // namespace

kill_verdict hyper_judge( const conditional_mutant& cm, std::size_t bound, std::uint64_t budget_limit, bool determinize,
                          int workers )
{
    kill_verdict v;
    v.status = verdict_status::unknown;
    v.bound = bound;
    hyper_options o;
    o.workers = workers;
    o.budget_limit = budget_limit;
    budget b( budget_limit );

    if ( !determinize )
    {
        const auto& sig = cm.system.sig();
        auto ins = value_aps( sig, var_role::input );
        auto outs = value_aps( sig, var_role::output );
        // a witness can hold vacuously when a projection deadlocks within the bound
        auto convert = [&]( const hyper_verdict& h, int k ) -> std::optional<test_case> {
            if ( !h.holds )
                return std::nullopt;
            try
            {
                return witness_to_test( cm.system, *h.witness, k, &b );
            }
            catch ( const eval_error& )
            {
                v.note += ( v.note.empty() ? "" : "; " ) + std::string( "phi" ) + std::to_string( k ) +
                          " witness does not kill (a projection has no run over its inputs)";
                return std::nullopt;
            }
        };
        auto h3 = eval_bounded( cm.system, build_phi( 3, ins, outs ), bound, o );
        v.nodes += h3.nodes;
        v.definite_witness = convert( h3, 3 );
        auto h2 = eval_bounded( cm.system, build_phi( 2, ins, outs ), bound, o );
        v.nodes += h2.nodes;
        v.potential_witness = convert( h2, 2 );
        if ( v.definite_witness )
        {
            v.status = verdict_status::definitely_killable;
            v.witness = v.definite_witness;
        }
        else if ( v.potential_witness )
        {
            v.status = verdict_status::potentially_only;
            v.witness = v.potential_witness;
        }
        return v;
    }

    auto d = determinize_explicit( cm.system, &b );
    const auto& sig = d.system.sig();
    auto h1 = eval_bounded( d.system,
                            build_phi( 1, value_aps( sig, var_role::input ), value_aps( sig, var_role::output ) ),
                            bound + 1, o );
    v.nodes = h1.nodes;
    if ( !h1.holds )
        return v;
    auto w = undo_shift( cm.system, d, *h1.witness );
    test_case t;
    t.outputs.push_back( w.at( 0 ).output );
    for ( std::size_t j = 1; j < w.size(); ++j )
    {
        t.inputs.push_back( *w[j].input );
        t.outputs.push_back( w[j].output );
    }
    auto original = project( cm, false );
    auto mutant = project( cm, true );
    if ( auto p = killing_prefix( original, mutant, t, kill_mode::definite, &b ) )
    {
        v.status = verdict_status::definitely_killable;
        v.definite_witness = v.witness = p;
    }
    else if ( auto q = killing_prefix( original, mutant, t, kill_mode::potential, &b ) )
    {
        v.status = verdict_status::potentially_only;
        v.potential_witness = v.witness = q;
    }
    else
        v.note = "determinized system kills, the mutant is not killed by that test";
    return v;
}

exit_code run( const run_config& cfg, std::ostream& out, std::ostream& err )
{
    try
    {
        auto m = parse_model( read_text( cfg.model ) );
        if ( cfg.command == "validate" )
            return cmd_validate( cfg, m, out );
        if ( cfg.command == "mutants" )
            return cmd_mutants( cfg, m, out );
        if ( cfg.command == "kill" )
            return cmd_kill( cfg, m, out );
        if ( cfg.command == "testsuite" )
            return cmd_testsuite( cfg, m, out );
        if ( cfg.command == "score" )
            return cmd_score( cfg, m, out );
        if ( cfg.command == "determinize" )
            return cmd_determinize( cfg, m, out );
        if ( cfg.command == "hyper" )
            return cmd_hyper( cfg, m, out );
        throw model_error( "unknown command '" + cfg.command + "'" );
    }
    catch ( const budget_exhausted& e )
    {
        err << "error: " << e.what() << "\n";
        return exit_code::budget;
    }
    catch ( const parse_error& e )
    {
        err << cfg.model << ": " << e.what() << "\n";
        return exit_code::model_error;
    }
    catch ( const std::exception& e )
    {
        err << "error: " << e.what() << "\n";
        return exit_code::model_error;
    }
}

int run_cli( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
    run_config cfg;
    CLI::App app{ "mutation-based test generation for finite-state models" };
    app.require_subcommand( 1 );

    auto common = [&]( CLI::App* c ) {
        c->add_option( "model", cfg.model, "model file (.rm)" )->required();
        c->add_option( "--budget", cfg.budget, "node budget per search" )->check( CLI::PositiveNumber );
        c->add_option( "--format", cfg.format, "json or text" )->check( CLI::IsMember( { "json", "text" } ) );
        c->add_option( "--out", cfg.out_dir, "output directory" );
        c->add_option( "--seed", cfg.seed, "recorded in reports" );
    };
    auto checking = [&]( CLI::App* c ) {
        c->add_option( "--bound", cfg.bound, "search depth" )->check( CLI::NonNegativeNumber );
        c->add_option( "--mode", cfg.mode, "potential, definite, equivalence or hyper" )
            ->check( CLI::IsMember( { "potential", "definite", "equivalence", "hyper" } ) );
        c->add_option( "--workers", cfg.workers, "parallel workers" )->check( CLI::PositiveNumber );
        c->add_flag( "--determinize", cfg.determinize, "hyper mode: phi1 on the determinized system" );
    };
    auto selecting = [&]( CLI::App* c ) {
        c->add_option( "--ops", cfg.ops, "operator names" )->delimiter( ',' );
        c->add_flag( "!--no-init", cfg.include_init, "skip init-block sites" );
    };

    auto* v = app.add_subcommand( "validate", "determinism and totality" );
    common( v );
    v->add_option( "--depth", cfg.depth, "depth limit" );
    auto* mu = app.add_subcommand( "mutants", "mutation catalogue as JSON lines" );
    common( mu );
    selecting( mu );
    auto* k = app.add_subcommand( "kill", "verdict for one mutant" );
    common( k );
    checking( k );
    k->add_option( "--mutant", cfg.mutant, "mutant id, or @offset=replacement" )->required();
    auto* ts = app.add_subcommand( "testsuite", "deduplicated killing tests" );
    common( ts );
    checking( ts );
    selecting( ts );
    auto* sc = app.add_subcommand( "score", "mutation score report" );
    common( sc );
    checking( sc );
    selecting( sc );
    auto* de = app.add_subcommand( "determinize", "emit the determinized model" );
    common( de );
    de->add_option( "--mutant", cfg.mutant, "determinize this conditional mutant" );
    de->add_option( "--bound", cfg.bound, "depth for the checks (at most 4)" );
    auto* hy = app.add_subcommand( "hyper", "evaluate a hyperproperty at a bound" );
    common( hy );
    hy->add_option( "formula", cfg.formula, "formula file" );
    hy->add_option( "--phi", cfg.phi, "built-in killing formula 1-4" )->check( CLI::Range( 1, 4 ) );
    hy->add_option( "--mutant", cfg.mutant, "evaluate on this conditional mutant" );
    hy->add_option( "--bound", cfg.bound, "prefix depth" );
    hy->add_option( "--workers", cfg.workers, "parallel workers" )->check( CLI::PositiveNumber );
    hy->add_flag( "--determinize", cfg.determinize, "evaluate on the determinized conditional mutant" );

    std::vector<std::string> rev( args.rbegin(), args.rend() );
    try
    {
        app.parse( rev );
    }
    catch ( const CLI::ParseError& e )
    {
        int code = app.exit( e, out, err );
        return code == 0 ? 0 : static_cast<int>( exit_code::model_error );
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return static_cast<int>( run( cfg, out, err ) );
}

} // namespace mutkill
