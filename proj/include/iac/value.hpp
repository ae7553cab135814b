#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace iac
{

/// A finite domain descriptor for contract variables.
///
/// Every domain except `Opaque` is enumerable. The same structure doubles as
/// the sort of an expression during type inference; there the integer bounds
/// are irrelevant and `Opaque` acts as the "any" sort.
struct Domain
{
    enum class Kind
    {
        Bool,
        Int,
        Enum,
        Set,
        Seq,
        Map,
        Record,
        Opaque
    };

    Kind kind = Kind::Opaque;
    /// Alias name when the domain was introduced through a `type` declaration.
    std::string type_name;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<std::string> literals;  // Enum
    std::vector<Domain> children;       // Set/Seq: element; Map: key, value; Record: fields
    std::vector<std::string> fields;    // Record field names, aligned with children
    std::size_t max_length = 0;         // Seq

    static Domain boolean();
    static Domain integer( std::int64_t lo, std::int64_t hi );
    static Domain enumeration( std::vector<std::string> literals );
    static Domain set_of( Domain element );
    static Domain seq_of( Domain element, std::size_t max_length );
    static Domain map_of( Domain key, Domain value );
    static Domain record( std::vector<std::string> names, std::vector<Domain> domains );
    static Domain opaque();

    [[nodiscard]] Domain named( std::string alias ) const;

    [[nodiscard]] const Domain& element() const { return children.at( 0 ); }
    [[nodiscard]] const Domain& key() const { return children.at( 0 ); }
    [[nodiscard]] const Domain& value() const { return children.at( 1 ); }
    [[nodiscard]] const Domain* field( const std::string& name ) const;

    bool operator==( const Domain& ) const = default;
};

/// Structural equality, ignoring alias names.
bool same_structure( const Domain& a, const Domain& b );

/// Human-readable structural rendering, e.g. `map int[0..2] to bool`.
std::string to_string( const Domain& d );

/// Returns an error message when the domain is ill-formed (empty enum,
/// inverted integer range, duplicate record field), nothing otherwise.
std::optional<std::string> check_domain( const Domain& d );

/// Runtime value of the constraint language.
struct Value
{
    enum class Kind
    {
        Bool,
        Int,
        Enum,
        Set,
        Seq,
        Map,
        Record
    };

    Kind kind = Kind::Bool;
    bool boolean = false;
    std::int64_t integer = 0;
    std::string literal;              // Enum
    std::vector<Value> items;         // Set (sorted, unique), Seq, Map keys (sorted), Record field values
    std::vector<Value> mapped;        // Map values aligned with keys
    std::vector<std::string> fields;  // Record field names (sorted) aligned with items

    static Value of_bool( bool b );
    static Value of_int( std::int64_t i );
    static Value of_enum( std::string literal );
    static Value set( std::vector<Value> elements );
    static Value seq( std::vector<Value> elements );
    static Value map( std::vector<std::pair<Value, Value>> entries );
    static Value record( std::vector<std::pair<std::string, Value>> fields );

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] const Value* lookup( const Value& key ) const;
    [[nodiscard]] const Value* field( const std::string& name ) const;
};

std::strong_ordering operator<=>( const Value& a, const Value& b );
bool operator==( const Value& a, const Value& b );

std::string to_string( const Value& v );

bool contains( const Domain& d, const Value& v );

/// Number of values in `d`, or nothing for opaque domains and on overflow.
std::optional<std::uint64_t> cardinality( const Domain& d );

/// All values of `d` in a fixed order, or nothing if `d` is opaque or has
/// more than `limit` values.
std::optional<std::vector<Value>> enumerate( const Domain& d, std::uint64_t limit );

} // namespace iac
