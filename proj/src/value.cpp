#include "iac/value.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace iac
{

Domain Domain::boolean()
{
    Domain d;
    d.kind = Kind::Bool;
    return d;
}

Domain Domain::integer( std::int64_t lo, std::int64_t hi )
{
    Domain d;
    d.kind = Kind::Int;
    d.lo = lo;
    d.hi = hi;
    return d;
}

Domain Domain::enumeration( std::vector<std::string> literals )
{
    Domain d;
    d.kind = Kind::Enum;
    d.literals = std::move( literals );
    return d;
}

Domain Domain::set_of( Domain element )
{
    Domain d;
    d.kind = Kind::Set;
    d.children.push_back( std::move( element ) );
    return d;
}

Domain Domain::seq_of( Domain element, std::size_t max_length )
{
    Domain d;
    d.kind = Kind::Seq;
    d.children.push_back( std::move( element ) );
    d.max_length = max_length;
    return d;
}

Domain Domain::map_of( Domain key, Domain value )
{
    Domain d;
    d.kind = Kind::Map;
    d.children.push_back( std::move( key ) );
    d.children.push_back( std::move( value ) );
    return d;
}

Domain Domain::record( std::vector<std::string> names, std::vector<Domain> domains )
{
    Domain d;
    d.kind = Kind::Record;
    d.fields = std::move( names );
    d.children = std::move( domains );
    return d;
}

Domain Domain::opaque()
{
    return Domain{};
}

Domain Domain::named( std::string alias ) const
{
    Domain d = *this;
    d.type_name = std::move( alias );
    return d;
}

const Domain* Domain::field( const std::string& name ) const
{
    if ( kind != Kind::Record )
        return nullptr;
    for ( std::size_t i = 0; i < fields.size(); ++i )
        if ( fields[ i ] == name )
            return &children[ i ];
    return nullptr;
}

bool same_structure( const Domain& a, const Domain& b )
{
    if ( a.kind != b.kind )
        return false;
    switch ( a.kind )
    {
    case Domain::Kind::Int:
        if ( a.lo != b.lo || a.hi != b.hi )
            return false;
        break;
    case Domain::Kind::Enum:
        if ( a.literals != b.literals )
            return false;
        break;
    case Domain::Kind::Seq:
        if ( a.max_length != b.max_length )
            return false;
        break;
    case Domain::Kind::Record:
        if ( a.fields != b.fields )
            return false;
        break;
    default:
        break;
    }
    if ( a.children.size() != b.children.size() )
        return false;
    for ( std::size_t i = 0; i < a.children.size(); ++i )
        if ( !same_structure( a.children[ i ], b.children[ i ] ) )
            return false;
    return true;
}

std::string to_string( const Domain& d )
{
    std::ostringstream out;
    switch ( d.kind )
    {
    case Domain::Kind::Bool: out << "bool"; break;
    case Domain::Kind::Int: out << "int[" << d.lo << ".." << d.hi << "]"; break;
    case Domain::Kind::Enum:
    {
        out << "enum { ";
        for ( std::size_t i = 0; i < d.literals.size(); ++i )
            out << ( i ? ", " : "" ) << d.literals[ i ];
        out << " }";
        break;
    }
    case Domain::Kind::Set: out << "set of " << to_string( d.element() ); break;
    case Domain::Kind::Seq: out << "seq of " << to_string( d.element() ) << " max " << d.max_length; break;
    case Domain::Kind::Map: out << "map " << to_string( d.key() ) << " to " << to_string( d.value() ); break;
    case Domain::Kind::Record:
    {
        out << "record { ";
        for ( std::size_t i = 0; i < d.fields.size(); ++i )
            out << ( i ? ", " : "" ) << d.fields[ i ] << " : " << to_string( d.children[ i ] );
        out << " }";
        break;
    }
    case Domain::Kind::Opaque: out << "opaque"; break;
    }
    return out.str();
}

std::optional<std::string> check_domain( const Domain& d )
{
    switch ( d.kind )
    {
    case Domain::Kind::Int:
        if ( d.lo > d.hi )
            return "integer range has lower bound " + std::to_string( d.lo ) + " above upper bound "
                   + std::to_string( d.hi );
        break;
    case Domain::Kind::Enum:
    {
        if ( d.literals.empty() )
            return std::string( "enum domain is empty" );
        std::set<std::string> seen( d.literals.begin(), d.literals.end() );
        if ( seen.size() != d.literals.size() )
            return std::string( "enum domain repeats a literal" );
        break;
    }
    case Domain::Kind::Record:
    {
        std::set<std::string> seen( d.fields.begin(), d.fields.end() );
        if ( seen.size() != d.fields.size() )
            return std::string( "record domain repeats a field" );
        if ( d.fields.size() != d.children.size() )
            return std::string( "record domain is malformed" );
        break;
    }
    default:
        break;
    }
    for ( const Domain& c : d.children )
        if ( auto err = check_domain( c ) )
            return err;
    return std::nullopt;
}

Value Value::of_bool( bool b )
{
    Value v;
    v.kind = Kind::Bool;
    v.boolean = b;
    return v;
}

Value Value::of_int( std::int64_t i )
{
    Value v;
    v.kind = Kind::Int;
    v.integer = i;
    return v;
}

Value Value::of_enum( std::string literal )
{
    Value v;
    v.kind = Kind::Enum;
    v.literal = std::move( literal );
    return v;
}

Value Value::set( std::vector<Value> elements )
{
    std::sort( elements.begin(), elements.end() );
    elements.erase( std::unique( elements.begin(), elements.end() ), elements.end() );
    Value v;
    v.kind = Kind::Set;
    v.items = std::move( elements );
    return v;
}

Value Value::seq( std::vector<Value> elements )
{
    Value v;
    v.kind = Kind::Seq;
    v.items = std::move( elements );
    return v;
}

Value Value::map( std::vector<std::pair<Value, Value>> entries )
{
    std::stable_sort( entries.begin(), entries.end(),
                      []( const auto& a, const auto& b ) { return a.first < b.first; } );
    Value v;
    v.kind = Kind::Map;
    for ( auto& [ k, val ] : entries )
    {
        // last binding wins for repeated keys
        if ( !v.items.empty() && v.items.back() == k )
        {
            v.mapped.back() = std::move( val );
            continue;
        }
        v.items.push_back( std::move( k ) );
        v.mapped.push_back( std::move( val ) );
    }
    return v;
}

Value Value::record( std::vector<std::pair<std::string, Value>> fields )
{
    std::sort( fields.begin(), fields.end(), []( const auto& a, const auto& b ) { return a.first < b.first; } );
    Value v;
    v.kind = Kind::Record;
    for ( auto& [ name, val ] : fields )
    {
        v.fields.push_back( std::move( name ) );
        v.items.push_back( std::move( val ) );
    }
    return v;
}

std::size_t Value::size() const
{
    return items.size();
}

const Value* Value::lookup( const Value& key ) const
{
    if ( kind != Kind::Map )
        return nullptr;
    auto it = std::lower_bound( items.begin(), items.end(), key );
    if ( it == items.end() || !( *it == key ) )
        return nullptr;
    return &mapped[ static_cast<std::size_t>( it - items.begin() ) ];
}

const Value* Value::field( const std::string& name ) const
{
    if ( kind != Kind::Record )
        return nullptr;
    for ( std::size_t i = 0; i < fields.size(); ++i )
        if ( fields[ i ] == name )
            return &items[ i ];
    return nullptr;
}

std::strong_ordering operator<=>( const Value& a, const Value& b )
{
    if ( auto c = a.kind <=> b.kind; c != 0 )
        return c;
    switch ( a.kind )
    {
    case Value::Kind::Bool: return a.boolean <=> b.boolean;
    case Value::Kind::Int: return a.integer <=> b.integer;
    case Value::Kind::Enum: return a.literal.compare( b.literal ) <=> 0;
    default: break;
    }
    if ( auto c = a.fields <=> b.fields; c != 0 )
        return c;
    auto lex = []( const std::vector<Value>& x, const std::vector<Value>& y ) {
        return std::lexicographical_compare_three_way( x.begin(), x.end(), y.begin(), y.end() );
    };
    if ( auto c = lex( a.items, b.items ); c != 0 )
        return c;
    return lex( a.mapped, b.mapped );
}

bool operator==( const Value& a, const Value& b )
{
    return ( a <=> b ) == 0;
}

std::string to_string( const Value& v )
{
    std::ostringstream out;
    auto list = [ & ]( const std::vector<Value>& xs ) {
        for ( std::size_t i = 0; i < xs.size(); ++i )
            out << ( i ? ", " : "" ) << to_string( xs[ i ] );
    };
    switch ( v.kind )
    {
    case Value::Kind::Bool: out << ( v.boolean ? "true" : "false" ); break;
    case Value::Kind::Int: out << v.integer; break;
    case Value::Kind::Enum: out << "<" << v.literal << ">"; break;
    case Value::Kind::Set:
        out << "{";
        list( v.items );
        out << "}";
        break;
    case Value::Kind::Seq:
        out << "[";
        list( v.items );
        out << "]";
        break;
    case Value::Kind::Map:
        if ( v.items.empty() )
        {
            out << "{|->}";
            break;
        }
        out << "{";
        for ( std::size_t i = 0; i < v.items.size(); ++i )
            out << ( i ? ", " : "" ) << to_string( v.items[ i ] ) << " |-> " << to_string( v.mapped[ i ] );
        out << "}";
        break;
    case Value::Kind::Record:
        out << "(";
        for ( std::size_t i = 0; i < v.fields.size(); ++i )
            out << ( i ? ", " : "" ) << v.fields[ i ] << ": " << to_string( v.items[ i ] );
        out << ")";
        break;
    }
    return out.str();
}

bool contains( const Domain& d, const Value& v )
{
    switch ( d.kind )
    {
    case Domain::Kind::Opaque: return true;
    case Domain::Kind::Bool: return v.kind == Value::Kind::Bool;
    case Domain::Kind::Int: return v.kind == Value::Kind::Int && v.integer >= d.lo && v.integer <= d.hi;
    case Domain::Kind::Enum:
        return v.kind == Value::Kind::Enum
               && std::find( d.literals.begin(), d.literals.end(), v.literal ) != d.literals.end();
    case Domain::Kind::Set:
        return v.kind == Value::Kind::Set
               && std::all_of( v.items.begin(), v.items.end(),
                               [ & ]( const Value& e ) { return contains( d.element(), e ); } );
    case Domain::Kind::Seq:
        return v.kind == Value::Kind::Seq && v.items.size() <= d.max_length
               && std::all_of( v.items.begin(), v.items.end(),
                               [ & ]( const Value& e ) { return contains( d.element(), e ); } );
    case Domain::Kind::Map:
        if ( v.kind != Value::Kind::Map )
            return false;
        for ( std::size_t i = 0; i < v.items.size(); ++i )
            if ( !contains( d.key(), v.items[ i ] ) || !contains( d.value(), v.mapped[ i ] ) )
                return false;
        return true;
    case Domain::Kind::Record:
    {
        if ( v.kind != Value::Kind::Record )
            return false;
        std::vector<std::string> sorted = d.fields;
        std::sort( sorted.begin(), sorted.end() );
        if ( sorted != v.fields )
            return false;
        for ( std::size_t i = 0; i < d.fields.size(); ++i )
            if ( !contains( d.children[ i ], *v.field( d.fields[ i ] ) ) )
                return false;
        return true;
    }
    }
    return false;
}

namespace
{

std::optional<std::uint64_t> mul( std::optional<std::uint64_t> a, std::optional<std::uint64_t> b )
{
    std::uint64_t r = 0;
    if ( !a || !b || __builtin_mul_overflow( *a, *b, &r ) )
        return std::nullopt;
    return r;
}

std::optional<std::uint64_t> add( std::optional<std::uint64_t> a, std::optional<std::uint64_t> b )
{
    std::uint64_t r = 0;
    if ( !a || !b || __builtin_add_overflow( *a, *b, &r ) )
        return std::nullopt;
    return r;
}

std::optional<std::uint64_t> power( std::optional<std::uint64_t> base, std::uint64_t exp )
{
    std::optional<std::uint64_t> r = 1;
    for ( std::uint64_t i = 0; i < exp && r; ++i )
        r = mul( r, base );
    return r;
}

// Advances a mixed-radix counter; returns false once it wraps around.
bool advance( std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix )
{
    for ( std::size_t i = 0; i < digits.size(); ++i )
    {
        if ( ++digits[ i ] < radix[ i ] )
            return true;
        digits[ i ] = 0;
    }
    return false;
}

} // namespace

std::optional<std::uint64_t> cardinality( const Domain& d )
{
    switch ( d.kind )
    {
    case Domain::Kind::Opaque: return std::nullopt;
    case Domain::Kind::Bool: return 2;
    case Domain::Kind::Int:
        if ( d.lo > d.hi )
            return 0;
        return static_cast<std::uint64_t>( d.hi - d.lo ) + 1;
    case Domain::Kind::Enum: return d.literals.size();
    case Domain::Kind::Set:
    {
        auto n = cardinality( d.element() );
        if ( !n || *n >= 64 )
            return std::nullopt;
        return std::uint64_t{ 1 } << *n;
    }
    case Domain::Kind::Seq:
    {
        auto n = cardinality( d.element() );
        std::optional<std::uint64_t> total = 0;
        for ( std::size_t len = 0; len <= d.max_length && total; ++len )
            total = add( total, power( n, len ) );
        return total;
    }
    case Domain::Kind::Map:
    {
        auto keys = cardinality( d.key() );
        auto options = add( cardinality( d.value() ), 1 );
        if ( !keys )
            return std::nullopt;
        return power( options, *keys );
    }
    case Domain::Kind::Record:
    {
        std::optional<std::uint64_t> total = 1;
        for ( const Domain& c : d.children )
            total = mul( total, cardinality( c ) );
        return total;
    }
    }
    return std::nullopt;
}

std::optional<std::vector<Value>> enumerate( const Domain& d, std::uint64_t limit )
{
    auto n = cardinality( d );
    if ( !n || *n > limit )
        return std::nullopt;

    std::vector<Value> out;
    out.reserve( static_cast<std::size_t>( *n ) );
    switch ( d.kind )
    {
    case Domain::Kind::Opaque: return std::nullopt;
    case Domain::Kind::Bool:
        out.push_back( Value::of_bool( false ) );
        out.push_back( Value::of_bool( true ) );
        break;
    case Domain::Kind::Int:
        for ( std::int64_t i = d.lo; i <= d.hi; ++i )
        {
            out.push_back( Value::of_int( i ) );
            if ( i == d.hi )
                break;
        }
        break;
    case Domain::Kind::Enum:
        for ( const auto& lit : d.literals )
            out.push_back( Value::of_enum( lit ) );
        break;
    case Domain::Kind::Set:
    {
        auto elems = *enumerate( d.element(), limit );
        for ( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << elems.size() ); ++mask )
        {
            std::vector<Value> pick;
            for ( std::size_t i = 0; i < elems.size(); ++i )
                if ( mask & ( std::uint64_t{ 1 } << i ) )
                    pick.push_back( elems[ i ] );
            out.push_back( Value::set( std::move( pick ) ) );
        }
        break;
    }
    case Domain::Kind::Seq:
    {
        auto elems = *enumerate( d.element(), limit );
        for ( std::size_t len = 0; len <= d.max_length; ++len )
        {
            if ( len > 0 && elems.empty() )
                break;
            std::vector<std::size_t> digits( len, 0 ), radix( len, elems.size() );
            do
            {
                std::vector<Value> s;
                for ( std::size_t i : digits )
                    s.push_back( elems[ i ] );
                out.push_back( Value::seq( std::move( s ) ) );
            } while ( advance( digits, radix ) );
        }
        break;
    }
    case Domain::Kind::Map:
    {
        auto keys = *enumerate( d.key(), limit );
        auto vals = *enumerate( d.value(), limit );
        // digit 0 = key absent, digit i = key bound to vals[i - 1]
        std::vector<std::size_t> digits( keys.size(), 0 ), radix( keys.size(), vals.size() + 1 );
        do
        {
            std::vector<std::pair<Value, Value>> entries;
            for ( std::size_t i = 0; i < keys.size(); ++i )
                if ( digits[ i ] > 0 )
                    entries.emplace_back( keys[ i ], vals[ digits[ i ] - 1 ] );
            out.push_back( Value::map( std::move( entries ) ) );
        } while ( advance( digits, radix ) );
        break;
    }
    case Domain::Kind::Record:
    {
        std::vector<std::vector<Value>> per_field;
        std::vector<std::size_t> radix;
        for ( const Domain& c : d.children )
        {
            per_field.push_back( *enumerate( c, limit ) );
            radix.push_back( per_field.back().size() );
        }
        if ( std::find( radix.begin(), radix.end(), 0 ) != radix.end() )
            break;
        std::vector<std::size_t> digits( radix.size(), 0 );
        do
        {
            std::vector<std::pair<std::string, Value>> fs;
            for ( std::size_t i = 0; i < digits.size(); ++i )
                fs.emplace_back( d.fields[ i ], per_field[ i ][ digits[ i ] ] );
            out.push_back( Value::record( std::move( fs ) ) );
        } while ( advance( digits, radix ) );
        break;
    }
    }
    return out;
}

} // namespace iac
