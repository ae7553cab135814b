#include "iac/verifier.hpp"

#include "oracle/automaton_check.hpp"
#include "support/fixtures.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

using namespace iac;
using ::testing::ElementsAre;
using ::testing::IsEmpty;

namespace
{

InterfaceAutomaton make( std::string name, std::vector<std::string> states, std::vector<ActionLabel> in,
                         std::vector<ActionLabel> outs, std::vector<ActionLabel> hidden,
                         std::vector<Transition> steps )
{
    InterfaceAutomaton a;
    a.name = std::move( name );
    a.states = std::move( states );
    a.initials = { a.states.front() };
    a.inputs = std::move( in );
    a.outputs = std::move( outs );
    a.hidden = std::move( hidden );
    a.transitions = std::move( steps );
    return a;
}

// Wraps a plain automaton so the closure and pruning can run on it directly.
ProductResult as_product( const InterfaceAutomaton& a )
{
    ProductResult p;
    p.automaton = a;
    for ( const auto& s : a.states )
        p.pair_of[ s ] = { s, "-" };
    p.origin.resize( a.transitions.size() );
    return p;
}

IllegalStateSet marked( std::set<std::string> states )
{
    IllegalStateSet s;
    s.states = std::move( states );
    return s;
}

std::set<oracle::StatePair> as_pairs( const ProductResult& p, const std::set<std::string>& ids )
{
    std::set<oracle::StatePair> out;
    for ( const auto& s : ids )
        out.insert( p.pair_of.at( s ) );
    return out;
}

// Guard falsity for the oracle: the conjunction of the step's constraints
// over the union of both contracts' variables.
oracle::GuardFalse guard_oracle( const InterfaceAutomaton& a, const InterfaceAutomaton& b )
{
    std::vector<VariableDecl> vars = a.variables;
    for ( const auto& v : b.variables )
        if ( std::none_of( vars.begin(), vars.end(), [ & ]( const VariableDecl& x ) { return x.name == v.name; } ) )
            vars.push_back( v );
    return [ vars ]( const std::vector<const NamedConstraint*>& cs ) {
        std::vector<VariableDecl> scope = vars;
        Expr body = cs.front()->body;
        for ( std::size_t i = 0; i < cs.size(); ++i )
        {
            for ( const auto& d : constraint_scope( *cs[ i ], {} ) )
                scope.push_back( d );
            if ( i > 0 )
                body = Expr::binary( Op::And, body, cs[ i ]->body );
        }
        return is_false( body, scope ).verdict == Falsity::False;
    };
}

} // namespace

TEST( IllegalStates, UnreceivedOutput )
{
    auto a = make( "A", { "s0", "s1" }, {}, { "x" }, { "go" }, { { "s0", {}, "go", {}, "s1" }, { "s1", {}, "x", {}, "s1" } } );
    auto b = make( "B", { "t0", "t1" }, { "x" }, {}, { "wait" },
                   { { "t0", {}, "wait", {}, "t1" }, { "t0", {}, "x", {}, "t0" } } );
    auto p = product( a, b );
    auto ill = illegal_states( p, a, b );
    ASSERT_EQ( ill.states.size(), 1u );
    const std::string s = *ill.states.begin();
    EXPECT_EQ( p.pair_of.at( s ), std::make_pair( std::string( "s1" ), std::string( "t1" ) ) );
    ASSERT_EQ( ill.reasons.at( s ).size(), 1u );
    const auto& why = ill.reasons.at( s ).front();
    EXPECT_EQ( why.kind, IllegalReason::Kind::UnreceivedOutput );
    EXPECT_EQ( why.action, ActionLabel( "x" ) );
    EXPECT_EQ( why.sender, Side::Left );
}

TEST( IllegalStates, AllGuardsFalse )
{
    std::vector<VariableDecl> vars{ { "myCS.s", Domain::integer( 0, 10 ) } };
    auto a = make( "A", { "s0", "s1" }, {}, {}, { "h" }, { { "s0", "Never", "h", {}, "s1" } } );
    a.variables = vars;
    a.preconditions = { parse_constraint( "pre Never: myCS.s < 0", vars ) };
    auto b = make( "B", { "t" }, {}, {}, { "k" }, {} );
    auto p = product( a, b );
    auto ill = illegal_states( p, a, b );
    const std::string init = p.automaton.initials.front();
    EXPECT_EQ( ill.states, std::set<std::string>{ init } );
    const auto& why = ill.reasons.at( init ).front();
    EXPECT_EQ( why.kind, IllegalReason::Kind::AllGuardsFalse );
    EXPECT_THAT( why.disabled, ElementsAre( 0u ) );
    EXPECT_EQ( ill.guard_verdicts.at( "Never" ).verdict, Falsity::False );
}

TEST( IllegalStates, OneSatisfiableStepKeepsStateLegal )
{
    std::vector<VariableDecl> vars{ { "n", Domain::integer( 0, 10 ) } };
    auto a = make( "A", { "s0", "s1" }, {}, {}, { "h", "k" },
                   { { "s0", "Never", "h", {}, "s1" }, { "s0", "Maybe", "k", {}, "s1" } } );
    a.variables = vars;
    a.preconditions = { parse_constraint( "pre Never: n < 0", vars ), parse_constraint( "pre Maybe: n = 10", vars ) };
    auto b = make( "B", { "t" }, {}, {}, { "z" }, {} );
    auto p = product( a, b );
    EXPECT_THAT( illegal_states( p, a, b ).states, IsEmpty() );
}

TEST( IllegalStates, UnsatisfiablePostcondition )
{
    std::vector<VariableDecl> vars{ { "n", Domain::integer( 0, 3 ) } };
    auto a = make( "A", { "s0", "s1" }, {}, {}, { "h" }, { { "s0", {}, "h", "Grow", "s1" } } );
    a.variables = vars;
    a.postconditions = { parse_constraint( "post Grow: n = n~ + 1 and n~ = 3", vars ) };
    auto b = make( "B", { "t" }, {}, {}, { "z" }, {} );
    auto p = product( a, b );
    auto ill = illegal_states( p, a, b );
    EXPECT_EQ( ill.states.size(), 1u );
    EXPECT_EQ( ill.guard_verdicts.at( "Grow" ).verdict, Falsity::False );
}

TEST( IllegalStates, UnknownGuardIsTreatedAsSatisfiable )
{
    std::vector<VariableDecl> vars{ { "x", Domain::opaque() } };
    auto a = make( "A", { "s0", "s1" }, {}, {}, { "h" }, { { "s0", "Refl", "h", {}, "s1" } } );
    a.variables = vars;
    a.preconditions = { parse_constraint( "pre Refl: x = x", vars ) };
    auto b = make( "B", { "t" }, {}, {}, { "z" }, {} );
    auto p = product( a, b );
    auto ill = illegal_states( p, a, b );
    EXPECT_THAT( ill.states, IsEmpty() );
    EXPECT_EQ( ill.guard_verdicts.at( "Refl" ).verdict, Falsity::Unknown );
}

TEST( IllegalStates, DeadlockOnlyWhenStrict )
{
    auto a = make( "A", { "s0", "s1" }, {}, {}, { "h" }, { { "s0", {}, "h", {}, "s1" } } );
    auto b = make( "B", { "t" }, {}, {}, { "z" }, {} );
    auto p = product( a, b );
    EXPECT_THAT( illegal_states( p, a, b ).states, IsEmpty() );
    VerifierOptions strict;
    strict.strict_deadlock = true;
    auto ill = illegal_states( p, a, b, strict );
    ASSERT_EQ( ill.states.size(), 1u );
    EXPECT_EQ( p.pair_of.at( *ill.states.begin() ).first, "s1" );
}

TEST( BadStates, EmptyBase )
{
    auto a = make( "A", { "s0", "s1" }, {}, { "o" }, {}, { { "s0", {}, "o", {}, "s1" } } );
    EXPECT_THAT( bad_states( as_product( a ), marked( {} ) ), IsEmpty() );
}

TEST( BadStates, ClosesOverOutputAndHiddenSteps )
{
    auto a = make( "A", { "s0", "s1", "s2" }, {}, { "o" }, { "h" },
                   { { "s0", {}, "h", {}, "s1" }, { "s1", {}, "o", {}, "s2" } } );
    EXPECT_EQ( bad_states( as_product( a ), marked( { "s2" } ) ), ( std::set<std::string>{ "s0", "s1", "s2" } ) );
}

TEST( BadStates, InputStepsDoNotPropagate )
{
    auto a = make( "A", { "s0", "s1" }, { "i" }, {}, {}, { { "s0", {}, "i", {}, "s1" } } );
    EXPECT_EQ( bad_states( as_product( a ), marked( { "s1" } ) ), std::set<std::string>{ "s1" } );
}

TEST( BadStates, OperationCountIsLinear )
{
    // a long hidden chain, every state ends up bad
    std::vector<std::string> states;
    std::vector<Transition> steps;
    const int n = 2000;
    for ( int i = 0; i < n; ++i )
        states.push_back( "s" + std::to_string( i ) );
    for ( int i = 0; i + 1 < n; ++i )
        steps.push_back( { states[ i ], {}, "h", {}, states[ i + 1 ] } );
    auto a = make( "A", states, {}, {}, { "h" }, steps );
    ClosureStats stats;
    auto bad = bad_states( as_product( a ), marked( { states.back() } ), &stats );
    EXPECT_EQ( bad.size(), static_cast<std::size_t>( n ) );
    EXPECT_GT( stats.operations, 0u );
    EXPECT_LE( stats.operations, 4u * ( states.size() + steps.size() ) + 1 );
}

TEST( Prune, EmptyRemovalIsIdentity )
{
    auto a = make( "A", { "s0", "s1" }, {}, { "o" }, { "h" }, { { "s0", {}, "o", {}, "s1" }, { "s1", {}, "h", {}, "s0" } } );
    EXPECT_EQ( prune( as_product( a ), {} ), a );
}

TEST( Prune, RemovingInitialsCollapses )
{
    auto a = make( "A", { "s0", "s1" }, { "i" }, { "o" }, { "h" },
                   { { "s0", {}, "o", {}, "s1" }, { "s1", {}, "h", {}, "s0" } } );
    auto out = prune( as_product( a ), { "s0" } );
    EXPECT_THAT( out.states, IsEmpty() );
    EXPECT_THAT( out.initials, IsEmpty() );
    EXPECT_THAT( out.transitions, IsEmpty() );
    EXPECT_EQ( out.inputs, a.inputs );
    EXPECT_EQ( out.outputs, a.outputs );
    EXPECT_EQ( out.hidden, a.hidden );
}

TEST( Prune, DropsStatesOnlyReachableThroughRemoved )
{
    auto a = make( "A", { "s0", "s1", "s2", "s3" }, {}, {}, { "h" },
                   { { "s0", {}, "h", {}, "s1" }, { "s1", {}, "h", {}, "s2" }, { "s0", {}, "h", {}, "s3" } } );
    auto out = prune( as_product( a ), { "s1" } );
    EXPECT_EQ( out.states, ( std::vector<std::string>{ "s0", "s3" } ) );
    EXPECT_EQ( out.transitions.size(), 1u );
}

TEST( ShortestPath, FollowsOnlyOutputAndHiddenSteps )
{
    auto a = make( "A", { "s0", "s1", "s2", "s3" }, { "i" }, { "o" }, { "h" },
                   { { "s0", {}, "i", {}, "s3" }, { "s0", {}, "h", {}, "s1" }, { "s1", {}, "o", {}, "s2" },
                     { "s2", {}, "h", {}, "s3" } } );
    auto t = shortest_path( a, { "s3" } );
    ASSERT_TRUE( t );
    EXPECT_EQ( t->states, ( std::vector<std::string>{ "s0", "s1", "s2", "s3" } ) );
    EXPECT_EQ( t->transitions, ( std::vector<std::size_t>{ 1, 2, 3 } ) );
    EXPECT_FALSE( shortest_path( a, { "nowhere" } ) );
    auto here = shortest_path( a, { "s0" } );
    ASSERT_TRUE( here );
    EXPECT_THAT( here->transitions, IsEmpty() );
}

TEST( CheckCompatibility, RawFixturesAreNotComposable )
{
    auto r = check_compatibility( fixtures::device(), fixtures::transport() );
    EXPECT_EQ( r.verdict, Verdict::Incompatible );
    EXPECT_EQ( r.cause, Cause::NotComposable );
    EXPECT_EQ( r.composability.conflicts(), std::set<ActionLabel>{ "init" } );
    EXPECT_FALSE( r.product );
}

TEST( CheckCompatibility, MinimalCompatiblePair )
{
    auto a = make( "A", { "P" }, {}, { "x" }, {}, { { "P", {}, "x", {}, "P" } } );
    auto b = make( "B", { "Q" }, { "x" }, {}, {}, { { "Q", {}, "x", {}, "Q" } } );
    auto r = check_compatibility( a, b );
    EXPECT_EQ( r.verdict, Verdict::Compatible );
    EXPECT_EQ( r.cause, Cause::None );
    ASSERT_TRUE( r.pruned );
    EXPECT_EQ( r.pruned->states.size(), 1u );
    ASSERT_EQ( r.pruned->transitions.size(), 1u );
    EXPECT_EQ( r.pruned->class_of( r.pruned->transitions[ 0 ].action ), ActionClass::Hidden );
    EXPECT_EQ( r.pruned->transitions[ 0 ].source, r.pruned->transitions[ 0 ].target );
    EXPECT_FALSE( r.witness );
}

TEST( CheckCompatibility, UnacceptedSecondMessage )
{
    // A sends x then y; B only ever accepts x
    auto a = make( "A", { "a0", "a1", "a2" }, {}, { "x", "y" }, {},
                   { { "a0", {}, "x", {}, "a1" }, { "a1", {}, "y", {}, "a2" } } );
    auto b = make( "B", { "b0", "b1" }, { "x", "y" }, {}, {}, { { "b0", {}, "x", {}, "b1" } } );

    // by hand: (a0,b0) -x-> (a1,b1); at (a1,b1) y is offered and refused
    const std::set<oracle::StatePair> illegal{ { "a1", "b1" } };
    const std::set<oracle::StatePair> bad{ { "a0", "b0" }, { "a1", "b1" } };

    auto r = check_compatibility( a, b );
    ASSERT_TRUE( r.product );
    EXPECT_EQ( as_pairs( *r.product, r.illegal.states ), illegal );
    EXPECT_EQ( as_pairs( *r.product, r.bad ), bad );
    EXPECT_EQ( r.verdict, Verdict::Incompatible );
    EXPECT_EQ( r.cause, Cause::EmptyProduct );
    ASSERT_TRUE( r.witness );
    EXPECT_EQ( r.witness->transitions.size(), 1u );
    EXPECT_EQ( r.product->pair_of.at( r.witness->states.back() ), *illegal.begin() );
}

TEST( CheckCompatibility, VariableConflictIsReported )
{
    auto a = make( "A", { "s" }, {}, { "x" }, {}, {} );
    a.variables = { { "v", Domain::integer( 0, 1 ) } };
    auto b = make( "B", { "t" }, { "x" }, {}, {}, {} );
    b.variables = { { "v", Domain::boolean() } };
    auto r = check_compatibility( a, b );
    EXPECT_EQ( r.verdict, Verdict::Incompatible );
    EXPECT_EQ( r.cause, Cause::VariableConflict );
}

TEST( CheckCompatibility, QualifiedFixturesMatchOracle )
{
    VerifierOptions opts;
    opts.qualify_hidden = true;
    auto r = check_compatibility( fixtures::device(), fixtures::transport(), opts );
    ASSERT_TRUE( r.product );

    auto ld = qualify_hidden( fixtures::device() );
    auto tl = qualify_hidden( fixtures::transport() );
    auto o = oracle::check_automata( ld, tl, guard_oracle( ld, tl ) );

    EXPECT_EQ( r.shared, o.shared );
    EXPECT_EQ( as_pairs( *r.product, { r.product->automaton.states.begin(), r.product->automaton.states.end() } ),
               o.reachable );
    EXPECT_EQ( r.product->automaton.transitions.size(), o.steps );
    EXPECT_EQ( as_pairs( *r.product, r.illegal.states ), o.illegal );
    EXPECT_EQ( as_pairs( *r.product, r.bad ), o.bad );
    EXPECT_EQ( r.verdict == Verdict::Compatible, o.compatible );
    ASSERT_TRUE( r.pruned );
    EXPECT_EQ( r.pruned->initials.empty(), !o.compatible );
    if ( !o.compatible )
    {
        ASSERT_TRUE( r.witness );
        EXPECT_TRUE( r.illegal.states.count( r.witness->states.back() ) );
        EXPECT_EQ( r.witness->states.size(), r.witness->transitions.size() + 1 );
    }
}

TEST( CheckCompatibility, StrictDeadlockMatchesOracle )
{
    VerifierOptions opts;
    opts.qualify_hidden = true;
    opts.strict_deadlock = true;
    auto r = check_compatibility( fixtures::device(), fixtures::transport(), opts );
    auto ld = qualify_hidden( fixtures::device() );
    auto tl = qualify_hidden( fixtures::transport() );
    auto o = oracle::check_automata( ld, tl, guard_oracle( ld, tl ), true );
    ASSERT_TRUE( r.product );
    EXPECT_EQ( as_pairs( *r.product, r.illegal.states ), o.illegal );
    EXPECT_EQ( as_pairs( *r.product, r.bad ), o.bad );
}

TEST( CheckCompatibility, PingPong )
{
    auto r = check_compatibility( fixtures::automaton( "ping.ia" ), fixtures::automaton( "pong.ia" ) );
    EXPECT_EQ( r.verdict, Verdict::Compatible );
}
