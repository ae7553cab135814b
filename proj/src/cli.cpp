#include "iac/cli.hpp"

#include "iac/document.hpp"
#include "iac/eval.hpp"
#include "iac/report.hpp"
#include "iac/verifier.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace iac
{

namespace
{

/// Failure that maps to `exit_usage`.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw UsageError( path + ": cannot read file" );
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file( const std::string& path, const std::string& text, std::ostream& out )
{
    if ( path.empty() || path == "-" )
    {
        out << text;
        return;
    }
    std::ofstream f( path, std::ios::binary );
    if ( !f || !( f << text ) )
        throw UsageError( path + ": cannot write file" );
}

ParsedDocument load( const std::string& path )
{
    std::string text = read_file( path );
    try
    {
        return parse_document( text );
    }
    catch ( const ParseError& e )
    {
        throw UsageError( path + ":" + e.what() );
    }
}

std::string render( const std::string& file, const Diagnostic& d )
{
    std::string s = file + ":";
    if ( d.pos )
        s += to_string( *d.pos ) + ":";
    return s + " " + d.location + ": " + d.message;
}

struct Selected
{
    std::string file;
    InterfaceAutomaton automaton;
    std::vector<Diagnostic> diagnostics;  // of the selected automaton only
};

/// `path` or `path#Name`; a bare path must hold exactly one automaton.
Selected select( const std::string& arg )
{
    std::string path = arg, name;
    if ( auto hash = arg.rfind( '#' ); hash != std::string::npos )
    {
        path = arg.substr( 0, hash );
        name = arg.substr( hash + 1 );
    }
    ParsedDocument parsed = load( path );
    const auto& automata = parsed.document.automata;
    const InterfaceAutomaton* chosen = nullptr;
    if ( !name.empty() )
    {
        chosen = parsed.document.find( name );
        if ( !chosen )
            throw UsageError( path + ": no automaton named " + name );
    }
    else if ( automata.size() == 1 )
        chosen = &automata.front();
    else
        throw UsageError( path + ": holds " + std::to_string( automata.size() )
                          + " automata; pick one with FILE#NAME" );
    Selected s{ path, *chosen, {} };
    for ( const auto& d : parsed.diagnostics )
        if ( d.location == chosen->name || d.location.rfind( chosen->name + ": ", 0 ) == 0 )
            s.diagnostics.push_back( d );
    return s;
}

std::uint64_t budget_from_env()
{
    const char* text = std::getenv( enum_budget_env );
    if ( !text || !*text )
        return default_enum_budget;
    std::uint64_t n = 0;
    const char* end = text + std::char_traits<char>::length( text );
    auto [ ptr, ec ] = std::from_chars( text, end, n );
    if ( ec != std::errc{} || ptr != end )
        throw UsageError( std::string( enum_budget_env ) + ": not a non-negative integer: " + text );
    return n;
}

// ---------------------------------------------------------------------------

int cmd_lint( const std::vector<std::string>& files, std::ostream& out, std::ostream& err )
{
    int code = exit_ok;
    for ( const auto& f : files )
    {
        try
        {
            ParsedDocument parsed = load( f );
            for ( const auto& d : parsed.diagnostics )
                out << render( f, d ) << "\n";
            if ( parsed.diagnostics.empty() )
                out << f << ": ok, " << parsed.document.automata.size() << " automata\n";
            else
                code = std::max( code, int( exit_failure ) );
        }
        catch ( const UsageError& e )
        {
            err << e.what() << "\n";
            code = exit_usage;
        }
    }
    return code;
}

struct CheckOutcome
{
    int code = exit_ok;
    std::string text;
    std::string error;
    std::optional<CheckEntry> entry;
};

CheckOutcome check_pair( const std::string& left, const std::string& right, const VerifierOptions& options,
                         bool witness )
{
    CheckOutcome o;
    try
    {
        Selected a = select( left );
        Selected b = select( right );
        if ( !a.diagnostics.empty() || !b.diagnostics.empty() )
        {
            for ( const Selected* s : { &a, &b } )
                for ( const auto& d : s->diagnostics )
                    o.text += render( s->file, d ) + "\n";
            o.code = exit_failure;
            return o;
        }
        CheckEntry entry{ a.file, b.file, check_compatibility( a.automaton, b.automaton, options ) };
        o.text = report_text( entry, witness );
        o.code = entry.report.verdict == Verdict::Compatible ? exit_ok : exit_failure;
        o.entry = std::move( entry );
    }
    catch ( const UsageError& e )
    {
        o.error = std::string( e.what() ) + "\n";
        o.code = exit_usage;
    }
    return o;
}

int cmd_check( const std::vector<std::string>& files, const VerifierOptions& options, const std::string& report,
               bool witness, std::ostream& out, std::ostream& err )
{
    if ( files.size() < 2 || files.size() % 2 != 0 )
        throw UsageError( "check: expected pairs of files, got " + std::to_string( files.size() ) + " argument(s)" );
    std::vector<std::future<CheckOutcome>> jobs;
    for ( std::size_t i = 0; i < files.size(); i += 2 )
        jobs.push_back( std::async( std::launch::async, check_pair, files[ i ], files[ i + 1 ], options, witness ) );

    int code = exit_ok;
    std::vector<CheckEntry> entries;
    for ( auto& job : jobs )
    {
        CheckOutcome o = job.get();
        out << o.text;
        err << o.error;
        code = std::max( code, o.code );
        if ( o.entry )
            entries.push_back( std::move( *o.entry ) );
    }
    if ( !report.empty() )
        write_file( report, report_json( entries ), out );
    return code;
}

int cmd_product( const std::string& left, const std::string& right, bool qualify, const std::string& output,
                 std::ostream& out, std::ostream& err )
{
    Selected a = select( left );
    Selected b = select( right );
    if ( !a.diagnostics.empty() || !b.diagnostics.empty() )
    {
        for ( const Selected* s : { &a, &b } )
            for ( const auto& d : s->diagnostics )
                err << render( s->file, d ) << "\n";
        return exit_failure;
    }
    if ( qualify )
    {
        a.automaton = qualify_hidden( a.automaton );
        b.automaton = qualify_hidden( b.automaton );
    }
    try
    {
        ProductResult p = product( a.automaton, b.automaton );
        ContractDocument doc;
        doc.metadata = { { "left", a.automaton.name }, { "right", b.automaton.name } };
        doc.automata.push_back( std::move( p.automaton ) );
        write_file( output, print_document( doc ), out );
        return exit_ok;
    }
    catch ( const NotComposable& e )
    {
        err << e.report().summary() << "\n";
        err << "conflicts: {";
        std::string sep;
        for ( const auto& l : e.report().conflicts() )
        {
            err << sep << l.str();
            sep = ", ";
        }
        err << "}\n";
    }
    catch ( const CompositionError& e )
    {
        err << e.what() << "\n";
    }
    return exit_failure;
}

int cmd_dot( const std::string& file, const std::string& output, std::ostream& out )
{
    Selected a = select( file );
    write_file( output, export_dot( a.automaton ), out );
    return exit_ok;
}

std::pair<std::string, Value> binding( const std::string& text )
{
    auto eq = text.find( '=' );
    if ( eq == std::string::npos || eq == 0 )
        throw UsageError( "binding '" + text + "' is not of the form name=value" );
    std::string name = text.substr( 0, eq );
    try
    {
        return { name, evaluate( parse_expr( text.substr( eq + 1 ), {} ), {} ) };
    }
    catch ( const std::exception& e )
    {
        throw UsageError( "binding for " + name + ": " + e.what() );
    }
}

bool is_constraint_text( const std::string& text )
{
    std::istringstream in( text );
    std::string word;
    in >> word;
    return word == "context" || word == "pre" || word == "post" || word == "inv";
}

int cmd_eval( const std::string& text, const std::vector<std::string>& binds, const std::vector<std::string>& olds,
              const std::string& file, std::ostream& out, std::ostream& err )
{
    std::vector<VariableDecl> declared;
    std::map<std::string, Domain> types;
    if ( !file.empty() )
    {
        Selected a = select( file );
        declared = a.automaton.variables;
        types = a.automaton.type_table();
    }

    Valuation v;
    for ( const auto& b : binds )
        v.current.insert( binding( b ) );
    if ( !olds.empty() )
    {
        v.old.emplace();
        for ( const auto& b : olds )
            v.old->insert( binding( b ) );
    }

    // bound names without a declaration are typed as opaque
    std::vector<VariableDecl> decls = declared;
    auto known = [ & ]( const std::string& n ) {
        return std::any_of( decls.begin(), decls.end(), [ & ]( const VariableDecl& d ) { return d.name == n; } );
    };
    for ( const auto* m : { &v.current, v.old ? &*v.old : nullptr } )
        if ( m )
            for ( const auto& [ n, _ ] : *m )
                if ( !known( n ) )
                    decls.push_back( { n, Domain::opaque() } );

    try
    {
        NamedConstraint c;
        if ( is_constraint_text( text ) )
            c = parse_constraint( text, decls, types );
        else
        {
            c.kind = ConstraintKind::Post;
            c.body = parse_expr( text, decls, true );
        }

        std::vector<VariableDecl> scope = constraint_scope( c, declared );
        Valuation checked;
        for ( const auto& d : scope )
            if ( auto it = v.current.find( d.name ); it != v.current.end() )
                checked.current.insert( *it );
        for ( const auto& problem : check_valuation( checked, scope ) )
            throw UsageError( problem );

        if ( !v.old && !free_variables( c.body ).old.empty() )
            v.old.emplace();
        const bool holds = eval_bool( c.body, v );
        out << ( holds ? "true" : "false" ) << "\n";
        return holds ? exit_ok : exit_failure;
    }
    catch ( const ParseError& e )
    {
        err << "error: " << e.what() << "\n";
    }
    catch ( const EvalError& e )
    {
        err << "evaluation error: " << e.what() << "\n";
    }
    return exit_usage;
}

} // namespace

int run_cli( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Compatibility checker for extended interface automata", "iacheck" };
    app.require_subcommand( 1 );

    std::vector<std::string> lint_files;
    auto* lint = app.add_subcommand( "lint", "Parse and validate .ia files" );
    lint->add_option( "files", lint_files, "Documents to check" )->required();

    std::vector<std::string> check_files;
    VerifierOptions options;
    std::optional<std::uint64_t> budget;
    std::string report_path;
    bool witness = false;
    auto* check = app.add_subcommand( "check", "Check pairs of automata for compatibility" );
    check->add_option( "files", check_files, "LEFT RIGHT [LEFT RIGHT ...], each FILE or FILE#NAME" )->required();
    check->add_flag( "--qualify-hidden", options.qualify_hidden, "Prefix hidden actions with their automaton name" );
    check->add_flag( "--strict-deadlock", options.strict_deadlock, "Count deadlock states as having all guards false" );
    check->add_option( "--enum-budget", budget, "Maximum valuations enumerated per constraint" );
    check->add_option( "--report", report_path, "Write the JSON report to this path ('-' for standard output)" );
    check->add_flag( "--witness", witness, "Print a trace to an illegal state" );

    std::string product_left, product_right, product_out;
    bool product_qualify = false;
    auto* prod = app.add_subcommand( "product", "Write the synchronized product as an .ia document" );
    prod->add_option( "left", product_left )->required();
    prod->add_option( "right", product_right )->required();
    prod->add_option( "-o,--output", product_out, "Output path (default: standard output)" );
    prod->add_flag( "--qualify-hidden", product_qualify, "Prefix hidden actions with their automaton name" );

    std::string dot_file, dot_out;
    auto* dot = app.add_subcommand( "dot", "Export an automaton as a Graphviz graph" );
    dot->add_option( "file", dot_file )->required();
    dot->add_option( "-o,--output", dot_out, "Output path (default: standard output)" );

    std::string eval_text, eval_file;
    std::vector<std::string> binds, olds;
    auto* eval = app.add_subcommand( "eval", "Evaluate a constraint or expression" );
    eval->add_option( "constraint", eval_text, "Expression or full constraint text" )->required();
    eval->add_option( "--bind", binds, "Current-state binding name=value" );
    eval->add_option( "--old", olds, "Pre-state binding name=value" );
    eval->add_option( "--file", eval_file, "Take variable declarations from this automaton (FILE or FILE#NAME)" );

    try
    {
        std::vector<std::string> reversed( args.rbegin(), args.rend() );
        app.parse( reversed );
    }
    catch ( const CLI::ParseError& e )
    {
        int code = app.exit( e, out, err );
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if ( *lint )
            return cmd_lint( lint_files, out, err );
        if ( *check )
        {
            options.enum_budget = budget ? *budget : budget_from_env();
            return cmd_check( check_files, options, report_path, witness, out, err );
        }
        if ( *prod )
            return cmd_product( product_left, product_right, product_qualify, product_out, out, err );
        if ( *dot )
            return cmd_dot( dot_file, dot_out, out );
        if ( *eval )
            return cmd_eval( eval_text, binds, olds, eval_file, out, err );
    }
    catch ( const UsageError& e )
    {
        err << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

} // namespace iac
