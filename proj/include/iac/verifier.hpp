#pragma once

#include "iac/eval.hpp"
#include "iac/product.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace iac
{

enum class Side
{
    Left,
    Right
};

std::string to_string( Side s );

struct IllegalReason
{
    enum class Kind
    {
        UnreceivedOutput,  // a shared output has no matching input on the partner
        AllGuardsFalse     // every outgoing step has an unsatisfiable pre or post
    };

    Kind kind = Kind::UnreceivedOutput;
    ActionLabel action;                   // UnreceivedOutput
    Side sender = Side::Left;             // UnreceivedOutput
    std::vector<std::size_t> disabled;    // AllGuardsFalse: product transition indices

    bool operator==( const IllegalReason& ) const = default;
};

struct IllegalStateSet
{
    std::set<std::string> states;
    std::map<std::string, std::vector<IllegalReason>> reasons;
    /// Falsity verdict of every constraint consulted, by registry name.
    std::map<std::string, FalsityResult> guard_verdicts;
};

struct VerifierOptions
{
    bool qualify_hidden = false;
    /// Treat states without outgoing steps as having all guards false.
    bool strict_deadlock = false;
    std::uint64_t enum_budget = default_enum_budget;
};

/// Unreceived shared outputs plus states whose every outgoing step carries
/// a pre- or postcondition that is unsatisfiable over its finite domains.
IllegalStateSet illegal_states( const ProductResult& p, const InterfaceAutomaton& a1, const InterfaceAutomaton& a2,
                                const VerifierOptions& options = {} );

/// Work counters of the backward closure.
struct ClosureStats
{
    std::uint64_t operations = 0;
};

/// Least set containing the illegal states and closed under predecessors
/// along output and hidden steps. Runs in time linear in the product size.
std::set<std::string> bad_states( const ProductResult& p, const IllegalStateSet& illegal, ClosureStats* stats = nullptr );

/// Removes `remove` with incident transitions, then every state unreachable
/// from the surviving initial states. With no initial state left the result
/// is the empty automaton: no states, no transitions, same alphabets.
InterfaceAutomaton prune( const ProductResult& p, const std::set<std::string>& remove );

/// Alternating states and product transitions.
struct Trace
{
    std::vector<std::string> states;
    std::vector<std::size_t> transitions;

    bool operator==( const Trace& ) const = default;
};

/// Shortest output/hidden path from an initial state to a state in `goal`.
std::optional<Trace> shortest_path( const InterfaceAutomaton& a, const std::set<std::string>& goal );

enum class Verdict
{
    Compatible,
    Incompatible
};

enum class Cause
{
    None,
    NotComposable,
    VariableConflict,
    EmptyProduct
};

std::string to_string( Verdict v );
std::string to_string( Cause c );

struct CompatReport
{
    std::string left;
    std::string right;
    VerifierOptions options;
    ComposabilityReport composability;
    std::set<ActionLabel> shared;
    std::optional<ProductResult> product;
    IllegalStateSet illegal;
    std::set<std::string> bad;
    std::optional<InterfaceAutomaton> pruned;
    Verdict verdict = Verdict::Incompatible;
    Cause cause = Cause::None;
    std::string message;
    std::optional<Trace> witness;
};

/// Composability, product, illegal states, bad-state closure, pruning and
/// the emptiness verdict, in that order.
CompatReport check_compatibility( const InterfaceAutomaton& a1, const InterfaceAutomaton& a2,
                                  const VerifierOptions& options = {} );

} // namespace iac
