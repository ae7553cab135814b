#include "iac/document.hpp"

#include "support/fixtures.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

using namespace iac;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

namespace
{

std::size_t count_lines_with( const std::string& text, const std::string& needle )
{
    std::size_t n = 0;
    std::size_t start = 0;
    while ( start < text.size() )
    {
        std::size_t end = text.find( '\n', start );
        if ( end == std::string::npos )
            end = text.size();
        if ( text.substr( start, end - start ).find( needle ) != std::string::npos )
            ++n;
        start = end + 1;
    }
    return n;
}

} // namespace

TEST( ParseDocument, DeviceFixtureCounts )
{
    auto parsed = parse_document( fixtures::read( "le_device.ia" ) );
    EXPECT_THAT( parsed.diagnostics, IsEmpty() );
    ASSERT_EQ( parsed.document.automata.size(), 1u );
    const auto& a = parsed.document.automata[ 0 ];
    EXPECT_EQ( a.name, "LEDevice" );
    EXPECT_EQ( a.states, ( std::vector<std::string>{ "Off", "OnFollower", "OnLeader", "OnUndecided", "OnReady",
                                                      "OnUpdate" } ) );
    EXPECT_EQ( a.initials, std::vector<std::string>{ "Off" } );
    EXPECT_EQ( a.inputs.size(), 1u );
    EXPECT_EQ( a.outputs.size(), 1u );
    EXPECT_EQ( a.hidden.size(), 13u );
    EXPECT_EQ( a.transitions.size(), 14u );
    EXPECT_EQ( a.preconditions.size(), 3u );
    EXPECT_EQ( a.postconditions.size(), 3u );
    EXPECT_EQ( a.invariants.size(), 3u );
    EXPECT_EQ( parsed.document.metadata.size(), 1u );
}

TEST( ParseDocument, TransportFixtureCounts )
{
    auto parsed = parse_document( fixtures::read( "transport_layer.ia" ) );
    EXPECT_THAT( parsed.diagnostics, IsEmpty() );
    const auto& a = parsed.document.automata.at( 0 );
    EXPECT_EQ( a.states.size(), 10u );
    EXPECT_EQ( a.transitions.size(), 16u );
    EXPECT_EQ( a.hidden.size(), 8u );
    EXPECT_EQ( a.inputs, std::vector<ActionLabel>{ "sendMessages" } );
    EXPECT_EQ( a.outputs, std::vector<ActionLabel>{ "receiveMessages" } );
    // the AddToQueue -[ready]-> Ready step is listed twice
    std::size_t twice = 0;
    for ( const auto& t : a.transitions )
        if ( t.source == "AddToQueue" && t.action == ActionLabel( "ready" ) && t.target == "Ready" )
            ++twice;
    EXPECT_EQ( twice, 2u );
}

TEST( ParseDocument, EmptyDocument )
{
    auto parsed = parse_document( "" );
    EXPECT_EQ( parsed.document, ContractDocument{} );
    EXPECT_THAT( parsed.diagnostics, IsEmpty() );
    EXPECT_EQ( parse_document( "  // nothing here\n" ).document, ContractDocument{} );
}

TEST( ParseDocument, DiagnosticsCarryPositions )
{
    auto parsed = parse_document( fixtures::read( "broken.ia" ) );
    ASSERT_EQ( parsed.diagnostics.size(), 1u );
    const auto& d = parsed.diagnostics[ 0 ];
    EXPECT_EQ( d.message, "alphabets not disjoint: turnOn" );
    ASSERT_TRUE( d.pos );
    // the later of the two declarations, inside `hidden { turnOn, ... }`
    EXPECT_EQ( d.pos->line, 7 );
    EXPECT_EQ( d.pos->column, 14 );
}

TEST( ParseDocument, MissingInitialStateIsDiagnosed )
{
    auto parsed = parse_document( "automaton A {\n    states { s }\n    initial { }\n}\n" );
    ASSERT_EQ( parsed.diagnostics.size(), 1u );
    EXPECT_EQ( parsed.diagnostics[ 0 ].message, "initial set empty" );
}

TEST( ParseDocument, UnknownStateInTransition )
{
    auto parsed = parse_document( "automaton A {\n    states { s }\n    initial { s }\n    hidden { h }\n"
                                  "    transitions {\n        s -[h]-> t;\n    }\n}\n" );
    ASSERT_EQ( parsed.diagnostics.size(), 1u );
    EXPECT_EQ( parsed.diagnostics[ 0 ].key, "transition:0" );
    ASSERT_TRUE( parsed.diagnostics[ 0 ].pos );
    EXPECT_EQ( parsed.diagnostics[ 0 ].pos->line, 6 );
}

TEST( ParseDocument, SyntaxErrorHasPosition )
{
    try
    {
        parse_document( "automaton A {\n    states { s\n    initial { s }\n}\n" );
        FAIL();
    }
    catch ( const ParseError& e )
    {
        EXPECT_EQ( e.pos().line, 3 );
    }
}

TEST( ParseDocument, DuplicateNamesAreErrors )
{
    EXPECT_THROW( parse_document( "automaton A { states { s } initial { s } }\nautomaton A { states { s } initial { s } }" ),
                  ParseError );
    EXPECT_THROW( parse_document( "automaton A { type T = bool; type T = bool; states { s } initial { s } }" ),
                  ParseError );
    EXPECT_THROW( parse_document( "automaton A { states { s } initial { s } pre P: true; pre P: false; }" ),
                  ParseError );
}

TEST( ParseDocument, ConstraintsOutsideAutomaton )
{
    auto d = parse_document( "automaton Dev { states { s } initial { s } variables { n : int[0..3]; } }\n"
                             "context Dev pre Bound: n < 3;\n"
                             "context Elsewhere pre Free: 1 < 2;\n" )
                 .document;
    ASSERT_NE( d.find( "Dev" ), nullptr );
    ASSERT_NE( d.find( "Dev" )->precondition( "Bound" ), nullptr );
    ASSERT_EQ( d.constraints.size(), 1u );
    EXPECT_EQ( d.constraints[ 0 ].name, "Free" );
    EXPECT_EQ( d.find( "Nobody" ), nullptr );
}

TEST( ParseDocument, QualifiedLabels )
{
    auto d = parse_document( "automaton A { states { s } initial { s } hidden { A::h } transitions { s -[A::h]-> s; } }" )
                 .document;
    EXPECT_EQ( d.automata[ 0 ].hidden, std::vector<ActionLabel>{ ActionLabel( "A", "h" ) } );
    EXPECT_EQ( d.automata[ 0 ].transitions[ 0 ].action, ActionLabel( "A", "h" ) );
}

TEST( PrintDocument, FixturesRoundTrip )
{
    for ( const char* file : { "le_device.ia", "transport_layer.ia", "ping.ia", "pong.ia", "broken.ia" } )
    {
        SCOPED_TRACE( file );
        auto d = fixtures::document( file );
        auto text = print_document( d );
        auto again = parse_document( text ).document;
        EXPECT_EQ( again, d );
        // printing is a fixpoint after one round
        EXPECT_EQ( print_document( again ), text );
    }
}

TEST( PrintDocument, InlineGuardsGetStableNames )
{
    const char* src = "automaton A {\n"
                      "    states { s, t }\n"
                      "    initial { s }\n"
                      "    hidden { h, k }\n"
                      "    variables { n : int[0..3]; }\n"
                      "    transitions {\n"
                      "        s -[h pre { n > 0 } post { n = n~ - 1 }]-> t;\n"
                      "        t -[k pre { n < 3 }]-> s;\n"
                      "    }\n"
                      "}\n";
    auto d = parse_document( src ).document;
    const auto& a = d.automata[ 0 ];
    EXPECT_EQ( a.transitions[ 0 ].pre, "A_pre_1" );
    EXPECT_EQ( a.transitions[ 0 ].post, "A_post_1" );
    EXPECT_EQ( a.transitions[ 1 ].pre, "A_pre_2" );
    auto text = print_document( d );
    EXPECT_THAT( text, HasSubstr( "pre A_pre_1: n > 0;" ) );
    EXPECT_THAT( text, HasSubstr( "s -[h pre A_pre_1 post A_post_1]-> t;" ) );
    EXPECT_EQ( parse_document( text ).document, d );
    EXPECT_EQ( parse_document( src ).document, d );
}

TEST( PrintDocument, GeneratedNamesAvoidDeclaredOnes )
{
    auto d = parse_document( "automaton A { states { s } initial { s } hidden { h }\n"
                             "  pre A_pre_1: true;\n"
                             "  transitions { s -[h pre { false }]-> s; s -[h pre A_pre_1]-> s; } }" )
                 .document;
    const auto& a = d.automata[ 0 ];
    EXPECT_EQ( a.transitions[ 0 ].pre, "A_pre_2" );
    EXPECT_EQ( a.transitions[ 1 ].pre, "A_pre_1" );
    EXPECT_TRUE( a.precondition( "A_pre_2" )->body.is_bool( false ) );
}

TEST( PrintDocument, TwoAutomataKeepTheirOrder )
{
    auto d = parse_document( fixtures::read( "pong.ia" ) + fixtures::read( "ping.ia" ) ).document;
    ASSERT_EQ( d.automata.size(), 2u );
    EXPECT_EQ( d.automata[ 0 ].name, "Pong" );
    EXPECT_EQ( d.automata[ 1 ].name, "Ping" );
    auto again = parse_document( print_document( d ) ).document;
    ASSERT_EQ( again.automata.size(), 2u );
    EXPECT_EQ( again.automata[ 0 ].name, "Pong" );
    EXPECT_EQ( again, d );
}

TEST( PrintDocument, Deterministic )
{
    auto d = fixtures::document( "le_device.ia" );
    EXPECT_EQ( print_document( d ), print_document( fixtures::document( "le_device.ia" ) ) );
}

TEST( ExportDot, DeviceEdges )
{
    auto dot = export_dot( fixtures::device() );
    EXPECT_THAT( dot, HasSubstr( "Off -> OnReady [label=\"turnOn;\"];" ) );
    EXPECT_THAT( dot, HasSubstr( "OnReady -> OnUpdate [label=\"receiveMessages?\"];" ) );
    EXPECT_THAT( dot, HasSubstr( "OnLeader -> OnLeader [label=\"sendMessages!\"];" ) );
    EXPECT_THAT( dot, HasSubstr( "OnUndecided -> OnFollower [label=\"changeClaim; pre LDPreCC post LDPostCC\"];" ) );
    EXPECT_THAT( dot, HasSubstr( "Off [shape=doublecircle];" ) );
    EXPECT_EQ( count_lines_with( dot, " -> " ), 14u );
}

TEST( ExportDot, SingleState )
{
    auto dot = export_dot( parse_document( "automaton One { states { only } initial { only } }" ).document.automata[ 0 ] );
    EXPECT_EQ( count_lines_with( dot, "only" ), 1u );
    EXPECT_EQ( count_lines_with( dot, " -> " ), 0u );
    EXPECT_EQ( dot.rfind( "digraph One {", 0 ), 0u );
}

TEST( ExportDot, ProductLabelsPairs )
{
    auto p = product( fixtures::automaton( "ping.ia" ), fixtures::automaton( "pong.ia" ) );
    auto dot = export_dot( p );
    EXPECT_THAT( dot, HasSubstr( "label=\"(P, Q)\"" ) );
    EXPECT_THAT( dot, HasSubstr( "[label=\"x;\"]" ) );
    EXPECT_EQ( count_lines_with( dot, " -> " ), 1u );
}

TEST( ExportDot, QuotesUnusualIdentifiers )
{
    auto q = qualify_hidden( parse_document( "automaton A { states { s } initial { s } hidden { h } transitions { s -[h]-> s; } }" )
                                 .document.automata[ 0 ] );
    EXPECT_THAT( export_dot( q ), HasSubstr( "[label=\"A::h;\"]" ) );
    InterfaceAutomaton odd;
    odd.name = "Odd";
    odd.states = { "two words", "2nd" };
    odd.initials = { "two words" };
    auto dot = export_dot( odd );
    EXPECT_THAT( dot, HasSubstr( "\"two words\" [shape=doublecircle];" ) );
    EXPECT_THAT( dot, HasSubstr( "\"2nd\";" ) );
}
