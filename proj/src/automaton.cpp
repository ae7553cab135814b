#include "iac/automaton.hpp"

#include <algorithm>
#include <sstream>

namespace iac
{

std::string to_string( const ActionLabel& a )
{
    return a.str();
}

std::string to_string( ActionClass c )
{
    switch ( c )
    {
    case ActionClass::Input: return "input";
    case ActionClass::Output: return "output";
    case ActionClass::Hidden: return "hidden";
    }
    return "?";
}

char suffix( ActionClass c )
{
    switch ( c )
    {
    case ActionClass::Input: return '?';
    case ActionClass::Output: return '!';
    case ActionClass::Hidden: return ';';
    }
    return ' ';
}

std::string to_string( const Transition& t )
{
    std::string s = t.source + " -[" + t.action.str();
    if ( t.pre )
        s += " pre " + *t.pre;
    if ( t.post )
        s += " post " + *t.post;
    return s + "]-> " + t.target;
}

std::string to_string( const Diagnostic& d )
{
    std::string s;
    if ( d.pos )
        s += to_string( *d.pos ) + ": ";
    if ( !d.location.empty() )
        s += d.location + ": ";
    return s + d.message;
}

bool InterfaceAutomaton::has_state( const std::string& s ) const
{
    return std::find( states.begin(), states.end(), s ) != states.end();
}

std::optional<ActionClass> InterfaceAutomaton::class_of( const ActionLabel& a ) const
{
    for ( ActionClass c : { ActionClass::Input, ActionClass::Output, ActionClass::Hidden } )
    {
        const auto& sigma = alphabet( c );
        if ( std::find( sigma.begin(), sigma.end(), a ) != sigma.end() )
            return c;
    }
    return std::nullopt;
}

const std::vector<ActionLabel>& InterfaceAutomaton::alphabet( ActionClass c ) const
{
    switch ( c )
    {
    case ActionClass::Input: return inputs;
    case ActionClass::Output: return outputs;
    case ActionClass::Hidden: break;
    }
    return hidden;
}

std::set<ActionLabel> InterfaceAutomaton::actions() const
{
    std::set<ActionLabel> all( inputs.begin(), inputs.end() );
    all.insert( outputs.begin(), outputs.end() );
    all.insert( hidden.begin(), hidden.end() );
    return all;
}

namespace
{

const NamedConstraint* find_named( const std::vector<NamedConstraint>& registry, const std::string& name )
{
    auto it = std::find_if( registry.begin(), registry.end(), [ & ]( const NamedConstraint& c ) { return c.name == name; } );
    return it == registry.end() ? nullptr : &*it;
}

} // namespace

const NamedConstraint* InterfaceAutomaton::precondition( const std::string& n ) const
{
    return find_named( preconditions, n );
}

const NamedConstraint* InterfaceAutomaton::postcondition( const std::string& n ) const
{
    return find_named( postconditions, n );
}

std::map<std::string, Domain> InterfaceAutomaton::type_table() const
{
    std::map<std::string, Domain> table;
    for ( const auto& t : types )
        table[ t.name ] = t.domain;
    return table;
}

std::vector<Diagnostic> validate( const InterfaceAutomaton& a )
{
    std::vector<Diagnostic> out;
    auto report = [ & ]( std::string location, std::string message, std::string key = "automaton" ) {
        out.push_back( Diagnostic{ std::move( message ), std::move( location ), std::move( key ), std::nullopt } );
    };

    std::set<std::string> seen_states;
    for ( const auto& s : a.states )
        if ( !seen_states.insert( s ).second )
            report( "state " + s, "duplicate state: " + s, "state:" + s );
    if ( a.initials.empty() )
        report( a.name, "initial set empty" );
    for ( const auto& s : a.initials )
        if ( !seen_states.count( s ) )
            report( "state " + s, "initial state not declared: " + s, "initial" );

    std::map<ActionLabel, int> membership;
    for ( ActionClass c : { ActionClass::Input, ActionClass::Output, ActionClass::Hidden } )
    {
        std::set<ActionLabel> local;
        for ( const auto& l : a.alphabet( c ) )
        {
            if ( !local.insert( l ).second )
                report( a.name, "duplicate " + to_string( c ) + " action: " + l.str(), "action:" + l.str() );
            else
                ++membership[ l ];
        }
    }
    for ( const auto& [ l, count ] : membership )
        if ( count > 1 )
            report( a.name, "alphabets not disjoint: " + l.str(), "action:" + l.str() );

    for ( const auto& t : a.types )
        if ( auto err = check_domain( t.domain ) )
            report( "type " + t.name, *err, "type:" + t.name );
    std::set<std::string> seen_vars;
    for ( const auto& v : a.variables )
    {
        if ( !seen_vars.insert( v.name ).second )
            report( "variable " + v.name, "duplicate variable: " + v.name, "variable:" + v.name );
        if ( auto err = check_domain( v.domain ) )
            report( "variable " + v.name, *err, "variable:" + v.name );
    }

    auto check_registry = [ & ]( const std::vector<NamedConstraint>& registry, ConstraintKind kind ) {
        std::set<std::string> names;
        for ( const auto& c : registry )
        {
            const std::string where = "constraint " + c.name;
            if ( !names.insert( c.name ).second )
                report( where, "duplicate constraint name: " + c.name, "constraint:" + c.name );
            if ( c.kind != kind )
                report( where, "registered as " + to_string( kind ) + " but declared " + to_string( c.kind ),
                        "constraint:" + c.name );
            try
            {
                resolve( c.body, make_scope( constraint_scope( c, a.variables ) ), c.kind == ConstraintKind::Post );
            }
            catch ( const ParseError& err )
            {
                report( where, err.detail(), "constraint:" + c.name );
            }
        }
    };
    check_registry( a.preconditions, ConstraintKind::Pre );
    check_registry( a.postconditions, ConstraintKind::Post );
    check_registry( a.invariants, ConstraintKind::Inv );

    for ( std::size_t i = 0; i < a.transitions.size(); ++i )
    {
        const Transition& t = a.transitions[ i ];
        const std::string where = "transition " + std::to_string( i + 1 ) + " (" + to_string( t ) + ")";
        const std::string key = "transition:" + std::to_string( i );
        if ( !seen_states.count( t.source ) )
            report( where, "unknown source state: " + t.source, key );
        if ( !seen_states.count( t.target ) )
            report( where, "unknown target state: " + t.target, key );
        if ( !membership.count( t.action ) )
            report( where, "action not declared: " + t.action.str(), key );
        if ( t.pre && !a.precondition( *t.pre ) )
            report( where, "unknown precondition: " + *t.pre, key );
        if ( t.post && !a.postcondition( *t.post ) )
            report( where, "unknown postcondition: " + *t.post, key );
    }
    return out;
}

std::set<ActionLabel> enabled_actions( const InterfaceAutomaton& a, const std::string& s, ActionClass c )
{
    if ( !a.has_state( s ) )
        throw StateNotFound( "state not found: " + s );
    const auto& sigma = a.alphabet( c );
    std::set<ActionLabel> out;
    for ( const auto& t : a.transitions )
        if ( t.source == s && std::find( sigma.begin(), sigma.end(), t.action ) != sigma.end() )
            out.insert( t.action );
    return out;
}

bool ComposabilityReport::composable() const
{
    return inputs_clash.empty() && outputs_clash.empty() && left_hidden_clash.empty() && right_hidden_clash.empty();
}

std::set<ActionLabel> ComposabilityReport::conflicts() const
{
    std::set<ActionLabel> all = inputs_clash;
    all.insert( outputs_clash.begin(), outputs_clash.end() );
    all.insert( left_hidden_clash.begin(), left_hidden_clash.end() );
    all.insert( right_hidden_clash.begin(), right_hidden_clash.end() );
    return all;
}

namespace
{

std::string join( const std::set<ActionLabel>& xs )
{
    std::string s;
    for ( const auto& x : xs )
        s += ( s.empty() ? "" : ", " ) + x.str();
    return s;
}

std::set<ActionLabel> intersect( const std::set<ActionLabel>& a, const std::set<ActionLabel>& b )
{
    std::set<ActionLabel> out;
    std::set_intersection( a.begin(), a.end(), b.begin(), b.end(), std::inserter( out, out.end() ) );
    return out;
}

std::set<ActionLabel> as_set( const std::vector<ActionLabel>& v )
{
    return { v.begin(), v.end() };
}

} // namespace

std::string ComposabilityReport::summary() const
{
    if ( composable() )
        return left + " and " + right + " are composable";
    std::ostringstream out;
    out << left << " and " << right << " are not composable:";
    if ( !inputs_clash.empty() )
        out << " shared inputs {" << join( inputs_clash ) << "};";
    if ( !outputs_clash.empty() )
        out << " shared outputs {" << join( outputs_clash ) << "};";
    if ( !left_hidden_clash.empty() )
        out << " hidden in " << left << " and used by " << right << " {" << join( left_hidden_clash ) << "};";
    if ( !right_hidden_clash.empty() )
        out << " hidden in " << right << " and used by " << left << " {" << join( right_hidden_clash ) << "};";
    std::string s = out.str();
    s.pop_back();
    return s;
}

ComposabilityReport composable( const InterfaceAutomaton& a1, const InterfaceAutomaton& a2 )
{
    ComposabilityReport r;
    r.left = a1.name;
    r.right = a2.name;
    r.inputs_clash = intersect( as_set( a1.inputs ), as_set( a2.inputs ) );
    r.outputs_clash = intersect( as_set( a1.outputs ), as_set( a2.outputs ) );
    r.left_hidden_clash = intersect( as_set( a1.hidden ), a2.actions() );
    r.right_hidden_clash = intersect( a1.actions(), as_set( a2.hidden ) );
    return r;
}

NotComposable::NotComposable( ComposabilityReport report )
    : std::runtime_error( "not composable: " + report.summary() ), _report( std::move( report ) )
{
}

std::set<ActionLabel> shared( const InterfaceAutomaton& a1, const InterfaceAutomaton& a2 )
{
    auto report = composable( a1, a2 );
    if ( !report.composable() )
        throw NotComposable( std::move( report ) );
    auto out = intersect( as_set( a1.inputs ), as_set( a2.outputs ) );
    auto other = intersect( as_set( a2.inputs ), as_set( a1.outputs ) );
    out.insert( other.begin(), other.end() );
    return out;
}

InterfaceAutomaton qualify_hidden( const InterfaceAutomaton& a )
{
    InterfaceAutomaton q = a;
    std::set<ActionLabel> local( a.hidden.begin(), a.hidden.end() );
    for ( auto& h : q.hidden )
        if ( h.ns.empty() )
            h.ns = a.name;
    for ( auto& t : q.transitions )
        if ( t.action.ns.empty() && local.count( t.action ) )
            t.action.ns = a.name;
    return q;
}

} // namespace iac
