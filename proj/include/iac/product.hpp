#pragma once

#include "iac/automaton.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace iac
{

/// Synchronized product of two composable automata restricted to the
/// pair-states reachable from I1 x I2.
struct ProductResult
{
    /// Operand transitions a product transition was built from.
    struct Origin
    {
        std::optional<std::size_t> left;
        std::optional<std::size_t> right;

        bool operator==( const Origin& ) const = default;
    };

    InterfaceAutomaton automaton;
    std::map<std::string, std::pair<std::string, std::string>> pair_of;
    std::set<ActionLabel> shared;
    std::vector<Origin> origin;  // aligned with automaton.transitions

    [[nodiscard]] std::optional<std::string> state_of( const std::string& left, const std::string& right ) const;
};

/// The operands declare the same variable, type or constraint name with
/// different meanings, so their union is ill-defined.
class CompositionError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Name of the registry entry for the conjunction of two constraints;
/// operands are ordered by name so the result is commutative.
std::string conjunction_name( const std::string& a, const std::string& b );

/// Throws `NotComposable` or `CompositionError`.
ProductResult product( const InterfaceAutomaton& a1, const InterfaceAutomaton& a2 );

} // namespace iac
