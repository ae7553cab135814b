#include "iac/eval.hpp"

#include <algorithm>
#include <sstream>

namespace iac
{

std::string to_string( const Valuation& v )
{
    std::ostringstream out;
    out << "{";
    bool first = true;
    for ( const auto& [ k, val ] : v.current )
    {
        out << ( first ? "" : ", " ) << k << " = " << to_string( val );
        first = false;
    }
    if ( v.old )
        for ( const auto& [ k, val ] : *v.old )
        {
            out << ( first ? "" : ", " ) << k << "@pre = " << to_string( val );
            first = false;
        }
    out << "}";
    return out.str();
}

std::vector<std::string> check_valuation( const Valuation& v, const std::vector<VariableDecl>& decls )
{
    std::vector<std::string> problems;
    auto check = [ & ]( const std::map<std::string, Value>& m, const char* suffix ) {
        for ( const auto& [ name, val ] : m )
        {
            auto it = std::find_if( decls.begin(), decls.end(), [ & ]( const VariableDecl& d ) { return d.name == name; } );
            if ( it == decls.end() )
                problems.push_back( name + suffix + " is not declared" );
            else if ( !contains( it->domain, val ) )
                problems.push_back( name + suffix + " = " + to_string( val ) + " is outside " + to_string( it->domain ) );
        }
    };
    check( v.current, "" );
    if ( v.old )
        check( *v.old, "@pre" );
    return problems;
}

namespace
{

bool as_bool( const Value& v, const Expr& where )
{
    if ( v.kind != Value::Kind::Bool )
        throw EvalError( "expected a boolean in '" + print_expr( where ) + "', got " + to_string( v ) );
    return v.boolean;
}

std::int64_t as_int( const Value& v, const Expr& where )
{
    if ( v.kind != Value::Kind::Int )
        throw EvalError( "expected an integer in '" + print_expr( where ) + "', got " + to_string( v ) );
    return v.integer;
}

struct Outcome
{
    std::optional<bool> value;
    std::string error;
};

Outcome try_bool( const Expr& e, const Valuation& v )
{
    try
    {
        return { as_bool( evaluate( e, v ), e ), {} };
    }
    catch ( const EvalError& err )
    {
        return { std::nullopt, err.what() };
    }
}

// `dominant` decides the connective on its own; otherwise failures propagate.
Value connective( const Expr& e, const Valuation& v, bool lhs_dominant, bool rhs_dominant, bool otherwise )
{
    Outcome l = try_bool( e.args[ 0 ], v );
    Outcome r = try_bool( e.args[ 1 ], v );
    if ( ( l.value && *l.value == lhs_dominant ) || ( r.value && *r.value == rhs_dominant ) )
        return Value::of_bool( !otherwise );
    if ( !l.value )
        throw EvalError( l.error );
    if ( !r.value )
        throw EvalError( r.error );
    return Value::of_bool( otherwise );
}

const std::vector<Value>& collection( const Value& v, const Expr& where )
{
    if ( v.kind != Value::Kind::Set && v.kind != Value::Kind::Seq && v.kind != Value::Kind::Map )
        throw EvalError( "expected a collection in '" + print_expr( where ) + "', got " + to_string( v ) );
    return v.items;
}

} // namespace

Value evaluate( const Expr& e, const Valuation& v )
{
    auto arg = [ & ]( std::size_t i ) { return evaluate( e.args[ i ], v ); };
    switch ( e.op )
    {
    case Op::Bool:
    case Op::Int:
    case Op::EnumLit: return e.literal;
    case Op::SetLit:
    case Op::SeqLit:
    {
        std::vector<Value> xs;
        for ( std::size_t i = 0; i < e.args.size(); ++i )
            xs.push_back( arg( i ) );
        return e.op == Op::SetLit ? Value::set( std::move( xs ) ) : Value::seq( std::move( xs ) );
    }
    case Op::MapLit:
    {
        std::vector<std::pair<Value, Value>> entries;
        for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
            entries.emplace_back( arg( i ), arg( i + 1 ) );
        return Value::map( std::move( entries ) );
    }
    case Op::RecordLit:
    {
        std::vector<std::pair<std::string, Value>> fs;
        for ( std::size_t i = 0; i < e.args.size(); ++i )
            fs.emplace_back( e.keys[ i ], arg( i ) );
        return Value::record( std::move( fs ) );
    }
    case Op::Path: throw EvalError( "unresolved name '" + print_expr( e ) + "'" );
    case Op::Var:
    {
        if ( e.old )
        {
            if ( !v.old )
                throw EvalError( "no pre-state for '" + e.name + "@pre'" );
            auto it = v.old->find( e.name );
            if ( it == v.old->end() )
                throw EvalError( "variable '" + e.name + "@pre' is not bound" );
            return it->second;
        }
        auto it = v.current.find( e.name );
        if ( it == v.current.end() )
            throw EvalError( "variable '" + e.name + "' is not bound" );
        return it->second;
    }
    case Op::Field:
    {
        Value rec = arg( 0 );
        if ( const Value* f = rec.field( e.name ) )
            return *f;
        throw EvalError( "no field '" + e.name + "' in " + to_string( rec ) );
    }
    case Op::Not: return Value::of_bool( !as_bool( arg( 0 ), e.args[ 0 ] ) );
    case Op::Neg:
    {
        std::int64_t x = as_int( arg( 0 ), e.args[ 0 ] ), r = 0;
        if ( __builtin_sub_overflow( std::int64_t{ 0 }, x, &r ) )
            throw EvalError( "integer overflow in '" + print_expr( e ) + "'" );
        return Value::of_int( r );
    }
    case Op::Dom:
    {
        Value m = arg( 0 );
        if ( m.kind != Value::Kind::Map )
            throw EvalError( "dom needs a map, got " + to_string( m ) );
        return Value::set( m.items );
    }
    case Op::And: return connective( e, v, false, false, true );
    case Op::Or: return connective( e, v, true, true, false );
    case Op::Implies:
    {
        // a implies b: a = false or b = true decides; result true in both cases
        Outcome l = try_bool( e.args[ 0 ], v );
        Outcome r = try_bool( e.args[ 1 ], v );
        if ( ( l.value && !*l.value ) || ( r.value && *r.value ) )
            return Value::of_bool( true );
        if ( !l.value )
            throw EvalError( l.error );
        if ( !r.value )
            throw EvalError( r.error );
        return Value::of_bool( false );
    }
    case Op::Eq: return Value::of_bool( arg( 0 ) == arg( 1 ) );
    case Op::Ne: return Value::of_bool( !( arg( 0 ) == arg( 1 ) ) );
    case Op::Lt: return Value::of_bool( as_int( arg( 0 ), e ) < as_int( arg( 1 ), e ) );
    case Op::Le: return Value::of_bool( as_int( arg( 0 ), e ) <= as_int( arg( 1 ), e ) );
    case Op::Gt: return Value::of_bool( as_int( arg( 0 ), e ) > as_int( arg( 1 ), e ) );
    case Op::Ge: return Value::of_bool( as_int( arg( 0 ), e ) >= as_int( arg( 1 ), e ) );
    case Op::Add:
    case Op::Sub:
    {
        std::int64_t a = as_int( arg( 0 ), e ), b = as_int( arg( 1 ), e ), r = 0;
        bool overflow = e.op == Op::Add ? __builtin_add_overflow( a, b, &r ) : __builtin_sub_overflow( a, b, &r );
        if ( overflow )
            throw EvalError( "integer overflow in '" + print_expr( e ) + "'" );
        return Value::of_int( r );
    }
    case Op::InSet:
    {
        Value x = arg( 0 ), s = arg( 1 );
        if ( s.kind != Value::Kind::Set )
            throw EvalError( "'in set' needs a set, got " + to_string( s ) );
        return Value::of_bool( std::binary_search( s.items.begin(), s.items.end(), x ) );
    }
    case Op::Apply:
    {
        Value target = arg( 0 ), key = arg( 1 );
        if ( target.kind == Value::Kind::Map )
        {
            if ( const Value* r = target.lookup( key ) )
                return *r;
            throw EvalError( "undefined application '" + print_expr( e ) + "' at key " + to_string( key ) );
        }
        if ( target.kind == Value::Kind::Seq )
        {
            std::int64_t i = as_int( key, e );
            if ( i < 1 || static_cast<std::uint64_t>( i ) > target.items.size() )
                throw EvalError( "undefined application '" + print_expr( e ) + "' at index " + std::to_string( i ) );
            return target.items[ static_cast<std::size_t>( i - 1 ) ];
        }
        throw EvalError( "cannot apply " + to_string( target ) );
    }
    case Op::Call:
    {
        const std::string& n = e.name;
        if ( n == "notEmpty" || n == "isEmpty" )
        {
            // a scalar counts as a singleton collection unless it is undefined
            bool non_empty = false;
            try
            {
                Value x = arg( 0 );
                if ( x.kind == Value::Kind::Set || x.kind == Value::Kind::Seq || x.kind == Value::Kind::Map )
                    non_empty = !x.items.empty();
                else
                    non_empty = true;
            }
            catch ( const EvalError& )
            {
                non_empty = false;
            }
            return Value::of_bool( n == "notEmpty" ? non_empty : !non_empty );
        }
        Value target = arg( 0 );
        if ( n == "size" )
            return Value::of_int( static_cast<std::int64_t>( collection( target, e ).size() ) );
        if ( n == "lastItem" )
        {
            if ( target.kind != Value::Kind::Seq )
                throw EvalError( "lastItem() needs a sequence, got " + to_string( target ) );
            if ( target.items.empty() )
                throw EvalError( "undefined application '" + print_expr( e ) + "' on an empty sequence" );
            return target.items.back();
        }
        if ( n == "front" )
        {
            if ( target.kind != Value::Kind::Seq )
                throw EvalError( "front() needs a sequence, got " + to_string( target ) );
            std::int64_t k = as_int( arg( 1 ), e );
            if ( k < 0 || static_cast<std::uint64_t>( k ) > target.items.size() )
                throw EvalError( "undefined application '" + print_expr( e ) + "' with length " + std::to_string( k ) );
            return Value::seq( { target.items.begin(), target.items.begin() + k } );
        }
        if ( target.kind != Value::Kind::Map )
            throw EvalError( n + "() needs a map, got " + to_string( target ) );
        return Value::set( n == "domain" ? target.items : target.mapped );
    }
    }
    throw EvalError( "unsupported expression" );
}

bool eval_bool( const Expr& e, const Valuation& v )
{
    return as_bool( evaluate( e, v ), e );
}

bool eval_constraint( const NamedConstraint& c, const Valuation& v )
{
    if ( c.kind == ConstraintKind::Post && !v.old && !free_variables( c.body ).old.empty() )
        throw EvalError( "postcondition '" + c.name + "' needs a pre-state valuation" );
    return eval_bool( c.body, v );
}

// ---------------------------------------------------------------------------
// simplification

namespace
{

bool is_literal( const Expr& e )
{
    return e.op == Op::Bool || e.op == Op::Int || e.op == Op::EnumLit;
}

void flatten( Op op, const Expr& e, std::vector<Expr>& out )
{
    if ( e.op == op )
    {
        for ( const Expr& a : e.args )
            flatten( op, a, out );
        return;
    }
    out.push_back( e );
}

Expr simplify_chain( const Expr& e )
{
    const bool is_and = e.op == Op::And;
    std::vector<Expr> ops;
    flatten( e.op, e, ops );

    std::vector<std::pair<std::string, Expr>> keyed;
    for ( Expr& x : ops )
    {
        if ( x.op == Op::Bool )
        {
            if ( x.literal.boolean != is_and )
                return Expr::boolean( !is_and );  // annihilator
            continue;                             // identity
        }
        keyed.emplace_back( print_expr( x ), std::move( x ) );
    }
    std::sort( keyed.begin(), keyed.end(), []( const auto& a, const auto& b ) { return a.first < b.first; } );
    keyed.erase( std::unique( keyed.begin(), keyed.end(), []( const auto& a, const auto& b ) { return a.second == b.second; } ),
                 keyed.end() );
    if ( keyed.empty() )
        return Expr::boolean( is_and );
    Expr acc = std::move( keyed[ 0 ].second );
    for ( std::size_t i = 1; i < keyed.size(); ++i )
        acc = Expr::binary( e.op, std::move( acc ), std::move( keyed[ i ].second ) );
    return acc;
}

Expr negate( Expr x )
{
    if ( x.op == Op::Bool )
        return Expr::boolean( !x.literal.boolean );
    if ( x.op == Op::Not )
        return std::move( x.args[ 0 ] );
    return Expr::unary( Op::Not, std::move( x ) );
}

} // namespace

Expr simplify( const Expr& in )
{
    Expr e = in;
    for ( Expr& a : e.args )
        a = simplify( a );

    switch ( e.op )
    {
    case Op::Not: return negate( std::move( e.args[ 0 ] ) );
    case Op::And:
    case Op::Or: return simplify_chain( e );
    case Op::Implies:
    {
        Expr& l = e.args[ 0 ];
        Expr& r = e.args[ 1 ];
        if ( l.is_bool( false ) || r.is_bool( true ) )
            return Expr::boolean( true );
        if ( l.is_bool( true ) )
            return std::move( r );
        if ( r.is_bool( false ) )
            return negate( std::move( l ) );
        return e;
    }
    case Op::Neg:
        if ( e.args[ 0 ].op == Op::Int && e.args[ 0 ].literal.integer != INT64_MIN )
            return Expr::integer( -e.args[ 0 ].literal.integer );
        return e;
    case Op::Eq:
    case Op::Ne:
        if ( is_literal( e.args[ 0 ] ) && is_literal( e.args[ 1 ] ) )
            return Expr::boolean( ( e.args[ 0 ].literal == e.args[ 1 ].literal ) == ( e.op == Op::Eq ) );
        if ( print_expr( e.args[ 1 ] ) < print_expr( e.args[ 0 ] ) )
            std::swap( e.args[ 0 ], e.args[ 1 ] );
        return e;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
        if ( e.args[ 0 ].op == Op::Int && e.args[ 1 ].op == Op::Int )
            return Expr::boolean( eval_bool( e, {} ) );
        return e;
    case Op::Add:
    case Op::Sub:
    {
        if ( e.args[ 0 ].op == Op::Int && e.args[ 1 ].op == Op::Int )
        {
            try
            {
                return Expr::integer( evaluate( e, {} ).integer );
            }
            catch ( const EvalError& )
            {
                return e;  // overflow stays visible at evaluation time
            }
        }
        if ( e.op == Op::Add && print_expr( e.args[ 1 ] ) < print_expr( e.args[ 0 ] ) )
            std::swap( e.args[ 0 ], e.args[ 1 ] );
        return e;
    }
    default: return e;
    }
}

// ---------------------------------------------------------------------------
// falsity

std::string to_string( Falsity f )
{
    switch ( f )
    {
    case Falsity::False: return "false";
    case Falsity::Satisfiable: return "satisfiable";
    case Falsity::Unknown: return "unknown";
    }
    return "?";
}

FalsityResult is_false( const Expr& e, const std::vector<VariableDecl>& decls, std::uint64_t budget )
{
    FalsityResult result;
    const Expr s = simplify( e );
    if ( s.is_bool( false ) )
    {
        result.verdict = Falsity::False;
        return result;
    }

    const FreeVariables fv = free_variables( s );
    struct Slot
    {
        std::string name;
        bool old;
        std::vector<Value> values;
    };
    std::vector<Slot> slots;
    std::uint64_t space = 1;
    auto add_slot = [ & ]( const std::string& name, bool old ) -> bool {
        auto it = std::find_if( decls.begin(), decls.end(), [ & ]( const VariableDecl& d ) { return d.name == name; } );
        if ( it == decls.end() )
        {
            result.note = "variable '" + name + "' has no declaration";
            return false;
        }
        if ( it->domain.kind == Domain::Kind::Opaque )
        {
            result.note = "variable '" + name + "' has an opaque domain";
            return false;
        }
        auto n = cardinality( it->domain );
        if ( !n || __builtin_mul_overflow( space, *n, &space ) || space > budget )
        {
            result.note = "enumeration budget of " + std::to_string( budget ) + " valuations exceeded";
            return false;
        }
        slots.push_back( Slot{ name, old, *enumerate( it->domain, budget ) } );
        return true;
    };
    for ( const auto& name : fv.current )
        if ( !add_slot( name, false ) )
            return result;
    for ( const auto& name : fv.old )
        if ( !add_slot( name, true ) )
            return result;

    if ( space == 0 )
    {
        result.verdict = Falsity::False;
        return result;
    }

    std::vector<std::size_t> digits( slots.size(), 0 );
    for ( ;; )
    {
        Valuation v;
        if ( !fv.old.empty() )
            v.old.emplace();
        for ( std::size_t i = 0; i < slots.size(); ++i )
        {
            auto& target = slots[ i ].old ? *v.old : v.current;
            target[ slots[ i ].name ] = slots[ i ].values[ digits[ i ] ];
        }
        ++result.evaluated;
        bool holds = false;
        try
        {
            holds = eval_bool( s, v );
        }
        catch ( const EvalError& )
        {
            holds = false;
        }
        if ( holds )
        {
            result.verdict = Falsity::Satisfiable;
            result.witness = std::move( v );
            return result;
        }
        std::size_t i = 0;
        for ( ; i < digits.size(); ++i )
        {
            if ( ++digits[ i ] < slots[ i ].values.size() )
                break;
            digits[ i ] = 0;
        }
        if ( i == digits.size() )
            break;
    }
    result.verdict = Falsity::False;
    return result;
}

} // namespace iac
