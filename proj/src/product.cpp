#include "iac/product.hpp"

#include <algorithm>
#include <deque>

namespace iac
{

std::optional<std::string> ProductResult::state_of( const std::string& left, const std::string& right ) const
{
    for ( const auto& [ id, pair ] : pair_of )
        if ( pair.first == left && pair.second == right )
            return id;
    return std::nullopt;
}

std::string conjunction_name( const std::string& a, const std::string& b )
{
    return a < b ? a + "_and_" + b : b + "_and_" + a;
}

namespace
{

template <typename T, typename Key, typename Same>
void merge_by_name( std::vector<T>& into, const std::vector<T>& from, Key key, Same same, const char* what )
{
    for ( const T& item : from )
    {
        auto it = std::find_if( into.begin(), into.end(), [ & ]( const T& x ) { return key( x ) == key( item ); } );
        if ( it == into.end() )
            into.push_back( item );
        else if ( !same( *it, item ) )
            throw CompositionError( std::string( what ) + " '" + key( item ) + "' is declared differently by the operands" );
    }
}

void merge_decls( std::vector<VariableDecl>& into, const std::vector<VariableDecl>& from, const char* what )
{
    merge_by_name(
        into, from, []( const VariableDecl& d ) { return d.name; },
        []( const VariableDecl& a, const VariableDecl& b ) { return same_structure( a.domain, b.domain ); }, what );
}

NamedConstraint conjoin( const NamedConstraint& a, const NamedConstraint& b, const std::string& contract )
{
    const NamedConstraint& first = a.name < b.name ? a : b;
    const NamedConstraint& second = a.name < b.name ? b : a;
    NamedConstraint c;
    c.name = conjunction_name( a.name, b.name );
    c.kind = a.kind;
    ConstraintContext ctx;
    ctx.contract = contract;
    if ( first.context )
        ctx.params = first.context->params;
    if ( second.context )
        merge_decls( ctx.params, second.context->params, "parameter" );
    if ( !ctx.params.empty() )
        ctx.operation = "sync";
    c.context = std::move( ctx );
    c.body = Expr::binary( Op::And, first.body, second.body );
    return c;
}

std::vector<NamedConstraint> registry_union( const std::vector<NamedConstraint>& r1, const std::vector<NamedConstraint>& r2,
                                             const std::string& contract, bool with_pairs )
{
    std::vector<NamedConstraint> out = r1;
    merge_by_name(
        out, r2, []( const NamedConstraint& c ) { return c.name; },
        []( const NamedConstraint& a, const NamedConstraint& b ) { return a.body == b.body && a.kind == b.kind; },
        "constraint" );
    if ( with_pairs )
        for ( const auto& c1 : r1 )
            for ( const auto& c2 : r2 )
            {
                if ( c1.name == c2.name )
                    continue;
                NamedConstraint c = conjoin( c1, c2, contract );
                if ( std::none_of( out.begin(), out.end(), [ & ]( const NamedConstraint& x ) { return x.name == c.name; } ) )
                    out.push_back( std::move( c ) );
            }
    return out;
}

std::optional<std::string> combine( const std::optional<std::string>& a, const std::optional<std::string>& b )
{
    if ( a && b )
        return *a == *b ? *a : conjunction_name( *a, *b );
    return a ? a : b;
}

std::map<std::string, std::vector<std::size_t>> outgoing( const InterfaceAutomaton& a )
{
    std::map<std::string, std::vector<std::size_t>> out;
    for ( std::size_t i = 0; i < a.transitions.size(); ++i )
        out[ a.transitions[ i ].source ].push_back( i );
    return out;
}

} // namespace

ProductResult product( const InterfaceAutomaton& a1, const InterfaceAutomaton& a2 )
{
    const std::set<ActionLabel> sync = shared( a1, a2 );

    ProductResult r;
    r.shared = sync;
    InterfaceAutomaton& p = r.automaton;
    p.name = a1.name + "_x_" + a2.name;

    p.types = a1.types;
    merge_by_name(
        p.types, a2.types, []( const TypeDecl& t ) { return t.name; },
        []( const TypeDecl& a, const TypeDecl& b ) { return same_structure( a.domain, b.domain ); }, "type" );
    p.variables = a1.variables;
    merge_decls( p.variables, a2.variables, "variable" );

    auto open = [ & ]( const std::vector<ActionLabel>& x, const std::vector<ActionLabel>& y ) {
        std::vector<ActionLabel> out;
        for ( const auto* side : { &x, &y } )
            for ( const auto& l : *side )
                if ( !sync.count( l ) )
                    out.push_back( l );
        return out;
    };
    p.inputs = open( a1.inputs, a2.inputs );
    p.outputs = open( a1.outputs, a2.outputs );
    p.hidden = a1.hidden;
    p.hidden.insert( p.hidden.end(), a2.hidden.begin(), a2.hidden.end() );
    p.hidden.insert( p.hidden.end(), sync.begin(), sync.end() );

    p.preconditions = registry_union( a1.preconditions, a2.preconditions, p.name, true );
    p.postconditions = registry_union( a1.postconditions, a2.postconditions, p.name, true );
    p.invariants = registry_union( a1.invariants, a2.invariants, p.name, false );

    const auto out1 = outgoing( a1 );
    const auto out2 = outgoing( a2 );
    static const std::vector<std::size_t> none;
    auto edges = []( const auto& table, const std::string& s ) -> const std::vector<std::size_t>& {
        auto it = table.find( s );
        return it == table.end() ? none : it->second;
    };

    std::map<std::pair<std::string, std::string>, std::string> ids;
    std::set<std::string> taken;
    std::deque<std::pair<std::string, std::string>> queue;
    auto visit = [ & ]( const std::string& s1, const std::string& s2 ) -> const std::string& {
        auto key = std::make_pair( s1, s2 );
        if ( auto it = ids.find( key ); it != ids.end() )
            return it->second;
        std::string id = s1 + "__" + s2;
        for ( int n = 2; taken.count( id ); ++n )
            id = s1 + "__" + s2 + "_" + std::to_string( n );
        taken.insert( id );
        p.states.push_back( id );
        r.pair_of[ id ] = key;
        queue.push_back( key );
        return ids.emplace( key, id ).first->second;
    };

    for ( const auto& i1 : a1.initials )
        for ( const auto& i2 : a2.initials )
            p.initials.push_back( visit( i1, i2 ) );

    while ( !queue.empty() )
    {
        auto [ s1, s2 ] = queue.front();
        queue.pop_front();
        const std::string from = ids.at( { s1, s2 } );

        for ( std::size_t i : edges( out1, s1 ) )
        {
            const Transition& t = a1.transitions[ i ];
            if ( sync.count( t.action ) )
                continue;
            std::string to = visit( t.target, s2 );
            p.transitions.push_back( Transition{ from, t.pre, t.action, t.post, to } );
            r.origin.push_back( { i, std::nullopt } );
        }
        for ( std::size_t j : edges( out2, s2 ) )
        {
            const Transition& t = a2.transitions[ j ];
            if ( sync.count( t.action ) )
                continue;
            std::string to = visit( s1, t.target );
            p.transitions.push_back( Transition{ from, t.pre, t.action, t.post, to } );
            r.origin.push_back( { std::nullopt, j } );
        }
        for ( std::size_t i : edges( out1, s1 ) )
        {
            const Transition& t1 = a1.transitions[ i ];
            if ( !sync.count( t1.action ) )
                continue;
            for ( std::size_t j : edges( out2, s2 ) )
            {
                const Transition& t2 = a2.transitions[ j ];
                if ( t2.action != t1.action )
                    continue;
                std::string to = visit( t1.target, t2.target );
                p.transitions.push_back( Transition{ from, combine( t1.pre, t2.pre ), t1.action,
                                                     combine( t1.post, t2.post ), to } );
                r.origin.push_back( { i, j } );
            }
        }
    }
    return r;
}

} // namespace iac
