#include "iac/report.hpp"

#include <json.hpp>

#include <sstream>

namespace iac
{

namespace
{

using Json = nlohmann::ordered_json;

Json labels( const std::set<ActionLabel>& xs )
{
    Json out = Json::array();
    for ( const auto& x : xs )
        out.push_back( x.str() );
    return out;
}

Json labels( const std::vector<ActionLabel>& xs )
{
    return labels( std::set<ActionLabel>( xs.begin(), xs.end() ) );
}

Json strings( const std::set<std::string>& xs )
{
    Json out = Json::array();
    for ( const auto& x : xs )
        out.push_back( x );
    return out;
}

Json valuation( const std::map<std::string, Value>& m )
{
    Json out = Json::object();
    for ( const auto& [ k, v ] : m )
        out[ k ] = to_string( v );
    return out;
}

Json transition( const Transition& t )
{
    Json out{ { "source", t.source }, { "action", t.action.str() }, { "target", t.target } };
    out[ "pre" ] = t.pre ? Json( *t.pre ) : Json();
    out[ "post" ] = t.post ? Json( *t.post ) : Json();
    return out;
}

Json pair_json( const ProductResult& p, const std::string& state )
{
    const auto& [ l, r ] = p.pair_of.at( state );
    return Json::array( { l, r } );
}

Json check_json( const CheckEntry& entry )
{
    const CompatReport& r = entry.report;
    Json out;
    out[ "left" ] = { { "file", entry.left_file }, { "automaton", r.left } };
    out[ "right" ] = { { "file", entry.right_file }, { "automaton", r.right } };
    out[ "options" ] = { { "qualify_hidden", r.options.qualify_hidden },
                         { "strict_deadlock", r.options.strict_deadlock },
                         { "enum_budget", r.options.enum_budget } };
    out[ "composability" ] = { { "composable", r.composability.composable() },
                               { "inputs_clash", labels( r.composability.inputs_clash ) },
                               { "outputs_clash", labels( r.composability.outputs_clash ) },
                               { "left_hidden_clash", labels( r.composability.left_hidden_clash ) },
                               { "right_hidden_clash", labels( r.composability.right_hidden_clash ) },
                               { "conflicts", labels( r.composability.conflicts() ) } };
    out[ "shared" ] = labels( r.shared );

    if ( r.product )
    {
        const InterfaceAutomaton& a = r.product->automaton;
        Json states = Json::array();
        for ( const auto& s : a.states )
            states.push_back( { { "id", s }, { "pair", pair_json( *r.product, s ) } } );
        Json steps = Json::array();
        for ( const auto& t : a.transitions )
            steps.push_back( transition( t ) );
        out[ "product" ] = { { "name", a.name },
                             { "states", std::move( states ) },
                             { "initials", a.initials },
                             { "inputs", labels( a.inputs ) },
                             { "outputs", labels( a.outputs ) },
                             { "hidden", labels( a.hidden ) },
                             { "transitions", std::move( steps ) } };
    }
    else
        out[ "product" ] = nullptr;

    Json illegal = Json::array();
    for ( const auto& s : r.illegal.states )
    {
        Json reasons = Json::array();
        for ( const auto& why : r.illegal.reasons.at( s ) )
        {
            if ( why.kind == IllegalReason::Kind::UnreceivedOutput )
                reasons.push_back(
                    { { "kind", "unreceived_output" }, { "action", why.action.str() }, { "sender", to_string( why.sender ) } } );
            else
                reasons.push_back( { { "kind", "all_guards_false" }, { "disabled", why.disabled } } );
        }
        illegal.push_back( { { "state", s }, { "pair", pair_json( *r.product, s ) }, { "reasons", std::move( reasons ) } } );
    }
    out[ "illegal" ] = std::move( illegal );

    Json guards = Json::object();
    for ( const auto& [ name, v ] : r.illegal.guard_verdicts )
    {
        Json g{ { "verdict", to_string( v.verdict ) }, { "evaluated", v.evaluated } };
        g[ "note" ] = v.note.empty() ? Json() : Json( v.note );
        if ( v.witness )
        {
            Json w{ { "current", valuation( v.witness->current ) } };
            w[ "old" ] = v.witness->old ? valuation( *v.witness->old ) : Json();
            g[ "witness" ] = std::move( w );
        }
        else
            g[ "witness" ] = nullptr;
        guards[ name ] = std::move( g );
    }
    out[ "guard_verdicts" ] = std::move( guards );
    out[ "bad" ] = strings( r.bad );

    if ( r.pruned )
        out[ "pruned" ] = { { "states", r.pruned->states },
                            { "initials", r.pruned->initials },
                            { "transitions", r.pruned->transitions.size() } };
    else
        out[ "pruned" ] = nullptr;

    out[ "verdict" ] = to_string( r.verdict );
    out[ "cause" ] = to_string( r.cause );
    out[ "message" ] = r.message;

    if ( r.witness && r.product )
    {
        Json steps = Json::array();
        for ( std::size_t i : r.witness->transitions )
            steps.push_back( transition( r.product->automaton.transitions[ i ] ) );
        out[ "witness" ] = { { "states", r.witness->states }, { "transitions", std::move( steps ) } };
    }
    else
        out[ "witness" ] = nullptr;
    return out;
}

std::string join( const std::set<ActionLabel>& xs )
{
    std::string s;
    for ( const auto& x : xs )
        s += ( s.empty() ? "" : ", " ) + x.str();
    return s;
}

} // namespace

std::string report_json( const std::vector<CheckEntry>& checks )
{
    Json doc;
    doc[ "schema" ] = report_schema_id;
    doc[ "version" ] = report_schema_version;
    doc[ "checks" ] = Json::array();
    for ( const auto& c : checks )
        doc[ "checks" ].push_back( check_json( c ) );
    return doc.dump( 2 ) + "\n";
}

std::string format_trace( const Trace& t, const ProductResult& p )
{
    auto name = [ & ]( const std::string& s ) {
        auto it = p.pair_of.find( s );
        return it == p.pair_of.end() ? s : "(" + it->second.first + ", " + it->second.second + ")";
    };
    const InterfaceAutomaton& a = p.automaton;
    std::string out = name( t.states.front() );
    for ( std::size_t k = 0; k < t.transitions.size(); ++k )
    {
        const Transition& step = a.transitions[ t.transitions[ k ] ];
        std::string label = step.action.str();
        if ( auto c = a.class_of( step.action ) )
            label += suffix( *c );
        out += " -" + label + "-> " + name( t.states[ k + 1 ] );
    }
    return out;
}

std::string report_text( const CheckEntry& entry, bool with_witness )
{
    const CompatReport& r = entry.report;
    std::ostringstream out;
    out << r.left << " (" << entry.left_file << ") with " << r.right << " (" << entry.right_file << ")\n";
    out << "  composable: " << ( r.composability.composable() ? "yes" : "no" ) << "\n";
    if ( !r.composability.composable() )
        out << "  conflicts: {" << join( r.composability.conflicts() ) << "}\n";
    else
        out << "  shared: {" << join( r.shared ) << "}\n";
    if ( r.product )
    {
        out << "  product: " << r.product->automaton.states.size() << " states, "
            << r.product->automaton.transitions.size() << " transitions\n";
        out << "  illegal: " << r.illegal.states.size() << ", bad: " << r.bad.size() << "\n";
        for ( const auto& [ name, v ] : r.illegal.guard_verdicts )
            if ( v.verdict == Falsity::Unknown )
                out << "  unknown guard " << name << ": " << v.note << "\n";
        if ( r.pruned )
            out << "  pruned: " << r.pruned->states.size() << " states, " << r.pruned->transitions.size()
                << " transitions\n";
    }
    out << "  verdict: " << to_string( r.verdict );
    if ( r.cause != Cause::None )
        out << " (" << to_string( r.cause ) << ")";
    out << "\n  " << r.message << "\n";
    if ( with_witness && r.witness && r.product )
    {
        out << "  witness: " << format_trace( *r.witness, *r.product ) << "\n";
        const std::string& last = r.witness->states.back();
        for ( const auto& why : r.illegal.reasons.at( last ) )
        {
            if ( why.kind == IllegalReason::Kind::UnreceivedOutput )
                out << "    " << why.action.str() << " sent by " << ( why.sender == Side::Left ? r.left : r.right )
                    << " is not accepted by " << ( why.sender == Side::Left ? r.right : r.left ) << "\n";
            else
                out << "    every outgoing step has an unsatisfiable pre- or postcondition\n";
        }
    }
    return out.str();
}

} // namespace iac
