#include "iac/value.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace iac;

TEST( Domain, CardinalityOfScalars )
{
    EXPECT_EQ( cardinality( Domain::boolean() ), 2u );
    EXPECT_EQ( cardinality( Domain::integer( 0, 10 ) ), 11u );
    EXPECT_EQ( cardinality( Domain::integer( -3, 3 ) ), 7u );
    EXPECT_EQ( cardinality( Domain::enumeration( { "off", "on", "idle" } ) ), 3u );
    EXPECT_FALSE( cardinality( Domain::opaque() ) );
}

TEST( Domain, CardinalityOfCollections )
{
    Domain two = Domain::enumeration( { "a", "b" } );
    // subsets of a 3-element set
    EXPECT_EQ( cardinality( Domain::set_of( Domain::integer( 1, 3 ) ) ), 8u );
    // sequences of length 0, 1, 2 over 2 letters: 1 + 2 + 4
    EXPECT_EQ( cardinality( Domain::seq_of( two, 2 ) ), 7u );
    // partial maps from 2 keys, each unmapped or mapped to one of 2 values: 3^2
    EXPECT_EQ( cardinality( Domain::map_of( two, Domain::boolean() ) ), 9u );
    EXPECT_EQ( cardinality( Domain::record( { "c", "s" }, { two, Domain::integer( 0, 10 ) } ) ), 22u );
    EXPECT_FALSE( cardinality( Domain::set_of( Domain::opaque() ) ) );
}

TEST( Domain, EnumerationMatchesCardinalityAndMembership )
{
    const std::vector<Domain> domains{
        Domain::boolean(),
        Domain::integer( -1, 2 ),
        Domain::enumeration( { "x", "y", "z" } ),
        Domain::set_of( Domain::enumeration( { "x", "y" } ) ),
        Domain::seq_of( Domain::boolean(), 3 ),
        Domain::map_of( Domain::enumeration( { "k1", "k2" } ), Domain::integer( 0, 1 ) ),
        Domain::record( { "f", "g" }, { Domain::boolean(), Domain::integer( 0, 2 ) } ),
    };
    for ( const auto& d : domains )
    {
        auto values = enumerate( d, 1000 );
        ASSERT_TRUE( values ) << to_string( d );
        EXPECT_EQ( values->size(), *cardinality( d ) ) << to_string( d );
        std::set<Value> unique( values->begin(), values->end() );
        EXPECT_EQ( unique.size(), values->size() ) << to_string( d );
        for ( const auto& v : *values )
            EXPECT_TRUE( contains( d, v ) ) << to_string( d ) << " " << to_string( v );
    }
}

TEST( Domain, EnumerationRespectsLimitAndOpaque )
{
    EXPECT_FALSE( enumerate( Domain::integer( 0, 100 ), 10 ) );
    EXPECT_FALSE( enumerate( Domain::opaque(), 10 ) );
    EXPECT_TRUE( enumerate( Domain::integer( 0, 9 ), 10 ) );
}

TEST( Domain, CheckRejectsMalformed )
{
    EXPECT_FALSE( check_domain( Domain::integer( 0, 0 ) ) );
    EXPECT_TRUE( check_domain( Domain::integer( 3, 2 ) ) );
    EXPECT_TRUE( check_domain( Domain::enumeration( {} ) ) );
    EXPECT_TRUE( check_domain( Domain::enumeration( { "a", "a" } ) ) );
    EXPECT_TRUE( check_domain( Domain::set_of( Domain::integer( 1, 0 ) ) ) );
}

TEST( Domain, MembershipRejectsOutOfRange )
{
    EXPECT_FALSE( contains( Domain::integer( 0, 10 ), Value::of_int( 11 ) ) );
    EXPECT_FALSE( contains( Domain::enumeration( { "off" } ), Value::of_enum( "on" ) ) );
    EXPECT_FALSE( contains( Domain::boolean(), Value::of_int( 1 ) ) );
    EXPECT_FALSE( contains( Domain::seq_of( Domain::boolean(), 1 ),
                            Value::seq( { Value::of_bool( true ), Value::of_bool( false ) } ) ) );
}

TEST( Domain, AliasDoesNotChangeStructure )
{
    Domain claim = Domain::enumeration( { "off", "on" } );
    EXPECT_TRUE( same_structure( claim, claim.named( "Claim" ) ) );
    EXPECT_FALSE( claim == claim.named( "Claim" ) );
    EXPECT_FALSE( same_structure( claim, Domain::enumeration( { "on", "off", "x" } ) ) );
}

TEST( Value, ConstructorsNormalize )
{
    Value s = Value::set( { Value::of_int( 3 ), Value::of_int( 1 ), Value::of_int( 3 ) } );
    EXPECT_EQ( to_string( s ), "{1, 3}" );
    Value m = Value::map( { { Value::of_enum( "b" ), Value::of_int( 1 ) },
                            { Value::of_enum( "a" ), Value::of_int( 2 ) },
                            { Value::of_enum( "b" ), Value::of_int( 5 ) } } );
    EXPECT_EQ( to_string( m ), "{<a> |-> 2, <b> |-> 5}" );
    EXPECT_EQ( to_string( Value::map( {} ) ), "{|->}" );
    Value r = Value::record( { { "s", Value::of_int( 4 ) }, { "c", Value::of_enum( "off" ) } } );
    EXPECT_EQ( to_string( r ), "(c: <off>, s: 4)" );
    ASSERT_TRUE( r.field( "s" ) );
    EXPECT_EQ( *r.field( "s" ), Value::of_int( 4 ) );
    EXPECT_EQ( to_string( Value::seq( { Value::of_bool( true ), Value::of_bool( true ) } ) ), "[true, true]" );
}

TEST( Value, LookupAndOrder )
{
    Value m = Value::map( { { Value::of_int( 1 ), Value::of_bool( true ) } } );
    ASSERT_TRUE( m.lookup( Value::of_int( 1 ) ) );
    EXPECT_FALSE( m.lookup( Value::of_int( 2 ) ) );
    EXPECT_LT( Value::of_int( 1 ), Value::of_int( 2 ) );
    EXPECT_NE( Value::of_int( 1 ), Value::of_bool( true ) );
}
