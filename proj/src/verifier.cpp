#include "iac/verifier.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace iac
{

std::string to_string( Side s )
{
    return s == Side::Left ? "left" : "right";
}

std::string to_string( Verdict v )
{
    return v == Verdict::Compatible ? "compatible" : "incompatible";
}

std::string to_string( Cause c )
{
    switch ( c )
    {
    case Cause::None: return "none";
    case Cause::NotComposable: return "not_composable";
    case Cause::VariableConflict: return "variable_conflict";
    case Cause::EmptyProduct: return "empty_product";
    }
    return "?";
}

namespace
{

using Enabled = std::map<std::string, std::set<ActionLabel>>;

Enabled enabled_table( const InterfaceAutomaton& a, ActionClass c )
{
    Enabled table;
    for ( const auto& s : a.states )
        table[ s ] = enabled_actions( a, s, c );
    return table;
}

bool guard_false( const std::optional<std::string>& name, const std::vector<NamedConstraint>& registry,
                  const InterfaceAutomaton& p, const VerifierOptions& options, IllegalStateSet& out )
{
    if ( !name )
        return false;
    auto cached = out.guard_verdicts.find( *name );
    if ( cached == out.guard_verdicts.end() )
    {
        auto it = std::find_if( registry.begin(), registry.end(), [ & ]( const NamedConstraint& c ) { return c.name == *name; } );
        FalsityResult verdict;
        if ( it == registry.end() )
            verdict.note = "constraint '" + *name + "' is not registered";
        else
            verdict = is_false( it->body, constraint_scope( *it, p.variables ), options.enum_budget );
        cached = out.guard_verdicts.emplace( *name, std::move( verdict ) ).first;
    }
    // Unknown counts as satisfiable
    return cached->second.verdict == Falsity::False;
}

} // namespace

IllegalStateSet illegal_states( const ProductResult& p, const InterfaceAutomaton& a1, const InterfaceAutomaton& a2,
                                const VerifierOptions& options )
{
    IllegalStateSet out;
    const Enabled out1 = enabled_table( a1, ActionClass::Output ), in1 = enabled_table( a1, ActionClass::Input );
    const Enabled out2 = enabled_table( a2, ActionClass::Output ), in2 = enabled_table( a2, ActionClass::Input );
    const InterfaceAutomaton& prod = p.automaton;

    std::map<std::string, std::vector<std::size_t>> leaving;
    for ( std::size_t i = 0; i < prod.transitions.size(); ++i )
        leaving[ prod.transitions[ i ].source ].push_back( i );

    for ( const auto& state : prod.states )
    {
        const auto& [ s1, s2 ] = p.pair_of.at( state );
        std::vector<IllegalReason> reasons;
        for ( const auto& a : p.shared )
        {
            if ( out1.at( s1 ).count( a ) && !in2.at( s2 ).count( a ) )
                reasons.push_back( IllegalReason{ IllegalReason::Kind::UnreceivedOutput, a, Side::Left, {} } );
            if ( out2.at( s2 ).count( a ) && !in1.at( s1 ).count( a ) )
                reasons.push_back( IllegalReason{ IllegalReason::Kind::UnreceivedOutput, a, Side::Right, {} } );
        }

        const auto it = leaving.find( state );
        const std::vector<std::size_t> steps = it == leaving.end() ? std::vector<std::size_t>{} : it->second;
        bool all_false = steps.empty() ? options.strict_deadlock : true;
        for ( std::size_t i : steps )
        {
            const Transition& t = prod.transitions[ i ];
            // evaluate both guards so every consulted verdict is recorded
            bool pre_false = guard_false( t.pre, prod.preconditions, prod, options, out );
            bool post_false = guard_false( t.post, prod.postconditions, prod, options, out );
            if ( !pre_false && !post_false )
                all_false = false;
        }
        if ( all_false )
            reasons.push_back( IllegalReason{ IllegalReason::Kind::AllGuardsFalse, {}, Side::Left, steps } );

        if ( !reasons.empty() )
        {
            out.states.insert( state );
            out.reasons[ state ] = std::move( reasons );
        }
    }
    return out;
}

std::set<std::string> bad_states( const ProductResult& p, const IllegalStateSet& illegal, ClosureStats* stats )
{
    const InterfaceAutomaton& a = p.automaton;
    std::uint64_t ops = 0;

    std::unordered_map<std::string, std::size_t> index;
    index.reserve( a.states.size() );
    for ( std::size_t i = 0; i < a.states.size(); ++i, ++ops )
        index.emplace( a.states[ i ], i );

    std::set<ActionLabel> propagating( a.outputs.begin(), a.outputs.end() );
    propagating.insert( a.hidden.begin(), a.hidden.end() );

    // predecessor lists along output/hidden steps, compressed-row layout
    const std::size_t n = a.states.size();
    std::vector<std::size_t> start( n + 1, 0 );
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve( a.transitions.size() );
    for ( const auto& t : a.transitions )
    {
        ++ops;
        if ( !propagating.count( t.action ) )
            continue;
        std::size_t from = index.at( t.source ), to = index.at( t.target );
        edges.emplace_back( to, from );
        ++start[ to + 1 ];
    }
    for ( std::size_t i = 0; i < n; ++i, ++ops )
        start[ i + 1 ] += start[ i ];
    std::vector<std::size_t> preds( edges.size() ), fill( start.begin(), start.end() - 1 );
    for ( const auto& [ to, from ] : edges )
    {
        ++ops;
        preds[ fill[ to ]++ ] = from;
    }

    std::vector<char> bad( n, 0 );
    std::vector<std::size_t> work;
    for ( const auto& s : illegal.states )
    {
        ++ops;
        std::size_t i = index.at( s );
        if ( !bad[ i ] )
        {
            bad[ i ] = 1;
            work.push_back( i );
        }
    }
    while ( !work.empty() )
    {
        std::size_t s = work.back();
        work.pop_back();
        ++ops;
        for ( std::size_t k = start[ s ]; k < start[ s + 1 ]; ++k )
        {
            ++ops;
            std::size_t pred = preds[ k ];
            if ( !bad[ pred ] )
            {
                bad[ pred ] = 1;
                work.push_back( pred );
            }
        }
    }

    std::set<std::string> out;
    for ( std::size_t i = 0; i < n; ++i )
        if ( bad[ i ] )
            out.insert( a.states[ i ] );
    if ( stats )
        stats->operations = ops;
    return out;
}

InterfaceAutomaton prune( const ProductResult& p, const std::set<std::string>& remove )
{
    const InterfaceAutomaton& a = p.automaton;
    std::map<std::string, std::vector<std::size_t>> leaving;
    for ( std::size_t i = 0; i < a.transitions.size(); ++i )
    {
        const Transition& t = a.transitions[ i ];
        if ( !remove.count( t.source ) && !remove.count( t.target ) )
            leaving[ t.source ].push_back( i );
    }

    std::set<std::string> reached;
    std::deque<std::string> queue;
    for ( const auto& s : a.initials )
        if ( !remove.count( s ) && reached.insert( s ).second )
            queue.push_back( s );
    while ( !queue.empty() )
    {
        std::string s = queue.front();
        queue.pop_front();
        for ( std::size_t i : leaving[ s ] )
            if ( reached.insert( a.transitions[ i ].target ).second )
                queue.push_back( a.transitions[ i ].target );
    }

    InterfaceAutomaton out = a;
    auto keep = [ & ]( const std::string& s ) { return reached.count( s ) > 0; };
    std::erase_if( out.states, [ & ]( const std::string& s ) { return !keep( s ); } );
    std::erase_if( out.initials, [ & ]( const std::string& s ) { return !keep( s ); } );
    std::erase_if( out.transitions, [ & ]( const Transition& t ) { return !keep( t.source ) || !keep( t.target ); } );
    return out;
}

std::optional<Trace> shortest_path( const InterfaceAutomaton& a, const std::set<std::string>& goal )
{
    std::set<ActionLabel> propagating( a.outputs.begin(), a.outputs.end() );
    propagating.insert( a.hidden.begin(), a.hidden.end() );
    std::map<std::string, std::vector<std::size_t>> leaving;
    for ( std::size_t i = 0; i < a.transitions.size(); ++i )
        if ( propagating.count( a.transitions[ i ].action ) )
            leaving[ a.transitions[ i ].source ].push_back( i );

    // parent transition per reached state; initials have none
    std::map<std::string, std::optional<std::size_t>> parent;
    std::deque<std::string> queue;
    for ( const auto& s : a.initials )
        if ( parent.emplace( s, std::nullopt ).second )
            queue.push_back( s );
    while ( !queue.empty() )
    {
        std::string s = queue.front();
        queue.pop_front();
        if ( goal.count( s ) )
        {
            Trace trace;
            std::string cur = s;
            trace.states.push_back( cur );
            while ( auto via = parent.at( cur ) )
            {
                trace.transitions.push_back( *via );
                cur = a.transitions[ *via ].source;
                trace.states.push_back( cur );
            }
            std::reverse( trace.states.begin(), trace.states.end() );
            std::reverse( trace.transitions.begin(), trace.transitions.end() );
            return trace;
        }
        for ( std::size_t i : leaving[ s ] )
        {
            const std::string& next = a.transitions[ i ].target;
            if ( parent.emplace( next, i ).second )
                queue.push_back( next );
        }
    }
    return std::nullopt;
}

CompatReport check_compatibility( const InterfaceAutomaton& in1, const InterfaceAutomaton& in2,
                                  const VerifierOptions& options )
{
    CompatReport r;
    r.left = in1.name;
    r.right = in2.name;
    r.options = options;
    const InterfaceAutomaton a1 = options.qualify_hidden ? qualify_hidden( in1 ) : in1;
    const InterfaceAutomaton a2 = options.qualify_hidden ? qualify_hidden( in2 ) : in2;

    // 1. composability
    r.composability = composable( a1, a2 );
    if ( !r.composability.composable() )
    {
        r.cause = Cause::NotComposable;
        r.message = r.composability.summary();
        return r;
    }
    r.shared = shared( a1, a2 );

    // 2. product
    try
    {
        r.product = product( a1, a2 );
    }
    catch ( const CompositionError& err )
    {
        r.cause = Cause::VariableConflict;
        r.message = err.what();
        return r;
    }

    // 3.-5. illegal states, bad states, pruning
    r.illegal = illegal_states( *r.product, a1, a2, options );
    r.bad = bad_states( *r.product, r.illegal );
    r.pruned = prune( *r.product, r.bad );

    // 6. emptiness
    if ( !r.pruned->initials.empty() )
    {
        r.verdict = Verdict::Compatible;
        r.message = "compatible: " + std::to_string( r.pruned->states.size() ) + " of "
                    + std::to_string( r.product->automaton.states.size() ) + " product states survive pruning";
        return r;
    }
    r.cause = Cause::EmptyProduct;
    r.message = "incompatible: every initial product state is illegal or can reach an illegal state by "
                "output and hidden steps";
    r.witness = shortest_path( r.product->automaton, r.illegal.states );
    return r;
}

} // namespace iac
