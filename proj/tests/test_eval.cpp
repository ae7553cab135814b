#include "iac/eval.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

using namespace iac;
using ::testing::HasSubstr;

namespace
{

const Domain claim = Domain::enumeration( { "off", "undecided", "leader", "follower" } ).named( "Claim" );
const Domain data = Domain::record( { "c", "s" }, { claim, Domain::integer( 0, 10 ) } ).named( "DATA" );

Value cs( const std::string& c, int s )
{
    return Value::record( { { "c", Value::of_enum( c ) }, { "s", Value::of_int( s ) } } );
}

const char* ld_pre_cc = "context LE Device::changeClaim(newc : Claim) pre LDPreCC:"
                        " (myCS.c = <off> implies newc = <undecided>)"
                        " and (myCS.c = <undecided> implies (newc = <leader> or newc = <follower>))"
                        " and (myCS.c = <leader> implies newc = <undecided>)"
                        " and (myCS.c = <follower> implies newc = <undecided>)";

} // namespace

TEST( Evaluate, IncStrengthPrecondition )
{
    auto c = parse_constraint( "pre LDPreIS: myCS.s < 10", { { "myCS", data } } );
    EXPECT_TRUE( eval_constraint( c, { { { "myCS", cs( "off", 9 ) } }, std::nullopt } ) );
    EXPECT_FALSE( eval_constraint( c, { { { "myCS", cs( "off", 10 ) } }, std::nullopt } ) );
}

TEST( Evaluate, ChangeClaimPrecondition )
{
    auto c = parse_constraint( ld_pre_cc, { { "myCS", data } }, { { "Claim", claim } } );
    Valuation v{ { { "myCS", cs( "off", 0 ) }, { "newc", Value::of_enum( "undecided" ) } }, std::nullopt };
    EXPECT_TRUE( eval_constraint( c, v ) );
    v.current[ "newc" ] = Value::of_enum( "leader" );
    EXPECT_FALSE( eval_constraint( c, v ) );
}

TEST( Evaluate, ConstantFolding )
{
    EXPECT_FALSE( eval_bool( parse_expr( "true and false", {} ), {} ) );
    EXPECT_TRUE( eval_bool( parse_expr( "false implies false", {} ), {} ) );
    EXPECT_EQ( evaluate( parse_expr( "2 + 3 - 7", {} ), {} ), Value::of_int( -2 ) );
}

TEST( Evaluate, Collections )
{
    std::vector<VariableDecl> d{ { "m", Domain::map_of( Domain::integer( 0, 2 ), Domain::boolean() ) },
                                 { "q", Domain::seq_of( Domain::integer( 0, 3 ), 3 ) } };
    Valuation v{ { { "m", Value::map( { { Value::of_int( 1 ), Value::of_bool( false ) } } ) },
                   { "q", Value::seq( { Value::of_int( 3 ), Value::of_int( 1 ) } ) } },
                 std::nullopt };
    EXPECT_TRUE( eval_bool( parse_expr( "1 in set dom m", d ), v ) );
    EXPECT_FALSE( eval_bool( parse_expr( "2 in set dom m", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "m.range() = {false}", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "m.domain() = {1}", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "m->notEmpty and q->notEmpty", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "q.size() = 2 and q.lastItem() = 1", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "q(1,...,1) = [3]", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "m[1] = false", d ), v ) );
}

TEST( Evaluate, UndefinedApplication )
{
    std::vector<VariableDecl> d{ { "m", Domain::map_of( Domain::integer( 0, 2 ), Domain::boolean() ) } };
    Valuation v{ { { "m", Value::map( {} ) } }, std::nullopt };
    try
    {
        evaluate( parse_expr( "m(0)", d ), v );
        FAIL();
    }
    catch ( const EvalError& e )
    {
        EXPECT_THAT( e.what(), HasSubstr( "undefined application" ) );
    }
    // a dominating operand decides regardless of the failing one
    EXPECT_FALSE( eval_bool( parse_expr( "m(0) and false", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "true or m(0)", d ), v ) );
    EXPECT_TRUE( eval_bool( parse_expr( "false implies m(0)", d ), v ) );
    EXPECT_THROW( eval_bool( parse_expr( "m(0) and true", d ), v ), EvalError );
}

TEST( Evaluate, MissingVariable )
{
    auto e = parse_expr( "x < 3", { { "x", Domain::integer( 0, 5 ) } } );
    EXPECT_THROW( eval_bool( e, {} ), EvalError );
}

TEST( Evaluate, PostconditionNeedsOldState )
{
    auto c = parse_constraint( "post LDPostIS: myCS.s = myCS~.s + 1", { { "myCS", data } } );
    Valuation v{ { { "myCS", cs( "off", 4 ) } }, std::nullopt };
    EXPECT_THROW( eval_constraint( c, v ), EvalError );
    v.old = std::map<std::string, Value>{ { "myCS", cs( "off", 3 ) } };
    EXPECT_TRUE( eval_constraint( c, v ) );
    v.old = std::map<std::string, Value>{ { "myCS", cs( "off", 4 ) } };
    EXPECT_FALSE( eval_constraint( c, v ) );
}

TEST( Evaluate, ValuationCheck )
{
    std::vector<VariableDecl> d{ { "x", Domain::integer( 0, 5 ) } };
    EXPECT_TRUE( check_valuation( { { { "x", Value::of_int( 5 ) } }, std::nullopt }, d ).empty() );
    EXPECT_EQ( check_valuation( { { { "x", Value::of_int( 6 ) } }, std::nullopt }, d ).size(), 1u );
    EXPECT_EQ( check_valuation( { { { "y", Value::of_int( 0 ) } }, std::nullopt }, d ).size(), 1u );
}

TEST( Simplify, IdentityElimination )
{
    std::vector<VariableDecl> d{ { "myCS.s", Domain::integer( 0, 10 ) } };
    EXPECT_EQ( print_expr( simplify( parse_expr( "(myCS.s < 10) and true", d ) ) ), "myCS.s < 10" );
    EXPECT_EQ( print_expr( simplify( parse_expr( "myCS.s < 10 or false", d ) ) ), "myCS.s < 10" );
    EXPECT_EQ( print_expr( simplify( parse_expr( "not not (myCS.s < 10)", d ) ) ), "myCS.s < 10" );
}

TEST( Simplify, Annihilator )
{
    std::vector<VariableDecl> d{ { "p", Domain::boolean() } };
    EXPECT_TRUE( simplify( parse_expr( "false and p", d ) ).is_bool( false ) );
    EXPECT_TRUE( simplify( parse_expr( "p or true", d ) ).is_bool( true ) );
    EXPECT_TRUE( simplify( parse_expr( "1 + 2 = 3", {} ) ).is_bool( true ) );
}

TEST( Simplify, CommutativeOperandsAreSorted )
{
    std::vector<VariableDecl> d{ { "p", Domain::boolean() }, { "q", Domain::boolean() }, { "r", Domain::boolean() } };
    EXPECT_EQ( simplify( parse_expr( "p and q", d ) ), simplify( parse_expr( "q and p", d ) ) );
    EXPECT_EQ( simplify( parse_expr( "(p or q) or r", d ) ), simplify( parse_expr( "r or (q or p)", d ) ) );
    std::vector<VariableDecl> n{ { "x", Domain::integer( 0, 3 ) }, { "y", Domain::integer( 0, 3 ) } };
    EXPECT_EQ( simplify( parse_expr( "x + y = 2", n ) ), simplify( parse_expr( "2 = y + x", n ) ) );
}

TEST( IsFalse, SatisfiableOverIntRange )
{
    std::vector<VariableDecl> d{ { "myCS.s", Domain::integer( 0, 10 ) } };
    auto r = is_false( parse_expr( "myCS.s < 10", d ), d );
    EXPECT_EQ( r.verdict, Falsity::Satisfiable );
    ASSERT_TRUE( r.witness );
    EXPECT_TRUE( eval_bool( parse_expr( "myCS.s < 10", d ), *r.witness ) );
}

TEST( IsFalse, UnsatisfiableOverIntRange )
{
    std::vector<VariableDecl> d{ { "myCS.s", Domain::integer( 0, 10 ) } };
    auto r = is_false( parse_expr( "myCS.s < 0", d ), d );
    EXPECT_EQ( r.verdict, Falsity::False );
    EXPECT_FALSE( r.witness );
}

TEST( IsFalse, SyntacticFalseNeedsNoEnumeration )
{
    std::vector<VariableDecl> d{ { "x", Domain::opaque() } };
    auto r = is_false( parse_expr( "x = 1 and false", d ), d );
    EXPECT_EQ( r.verdict, Falsity::False );
    EXPECT_EQ( r.evaluated, 0u );
}

TEST( IsFalse, OpaqueIsUnknown )
{
    std::vector<VariableDecl> d{ { "x", Domain::opaque() } };
    auto r = is_false( parse_expr( "x = x", d ), d );
    EXPECT_EQ( r.verdict, Falsity::Unknown );
    EXPECT_THAT( r.note, HasSubstr( "opaque" ) );
}

TEST( IsFalse, BudgetExceededIsUnknown )
{
    std::vector<VariableDecl> d{ { "x", Domain::integer( 0, 999 ) }, { "y", Domain::integer( 0, 999 ) } };
    auto e = parse_expr( "x + y = 5000", d );
    EXPECT_EQ( is_false( e, d, 1000 ).verdict, Falsity::Unknown );
    EXPECT_EQ( is_false( e, d, 2'000'000 ).verdict, Falsity::False );
}

TEST( IsFalse, EvaluationErrorsAreNotTrue )
{
    std::vector<VariableDecl> d{ { "m", Domain::map_of( Domain::integer( 0, 1 ), Domain::boolean() ) } };
    // m(2) is never defined
    EXPECT_EQ( is_false( parse_expr( "m(2)", d ), d ).verdict, Falsity::False );
    EXPECT_EQ( is_false( parse_expr( "m(1)", d ), d ).verdict, Falsity::Satisfiable );
}

// As written, the addToQueue postcondition asks the new queue to be one
// longer than the old one and, at the same time, to have the old queue as
// its full-length prefix.
TEST( IsFalse, AddToQueuePostconditionAsWritten )
{
    const Domain msg = Domain::enumeration( { "m1", "m2" } );
    std::vector<VariableDecl> d{ { "queue", Domain::seq_of( msg, 3 ) }, { "m", msg } };
    auto c = parse_constraint( "post TLPostATQ: queue.size() = queue@pre.size() + 1 and queue.lastItem() = m"
                               " and queue@pre = queue(1,...,queue.size())",
                               d );

    // independent count over all sequences of length <= 3 from two letters
    std::vector<std::vector<int>> seqs{ {} };
    for ( std::size_t i = 0; i < seqs.size(); ++i )
        if ( seqs[ i ].size() < 3 )
            for ( int x : { 0, 1 } )
            {
                auto s = seqs[ i ];
                s.push_back( x );
                seqs.push_back( s );
            }
    ASSERT_EQ( seqs.size(), 15u );
    int satisfying = 0;
    for ( const auto& now : seqs )
        for ( const auto& before : seqs )
            for ( int m : { 0, 1 } )
                if ( now.size() == before.size() + 1 && !now.empty() && now.back() == m && before == now )
                    ++satisfying;
    EXPECT_EQ( satisfying, 0 );

    auto r = is_false( c.body, d );
    EXPECT_EQ( r.verdict, Falsity::False );
    EXPECT_EQ( r.evaluated, 15u * 15u * 2u );
}
