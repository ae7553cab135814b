#pragma once

#include "iac/expr.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace iac
{

/// Action symbol, optionally qualified with an automaton-local namespace
/// (`LEDevice::init`).
struct ActionLabel
{
    std::string ns;
    std::string name;

    ActionLabel() = default;
    ActionLabel( std::string name_ ) : name( std::move( name_ ) ) {}
    ActionLabel( const char* name_ ) : name( name_ ) {}
    ActionLabel( std::string ns_, std::string name_ ) : ns( std::move( ns_ ) ), name( std::move( name_ ) ) {}

    [[nodiscard]] std::string str() const { return ns.empty() ? name : ns + "::" + name; }

    auto operator<=>( const ActionLabel& ) const = default;
};

std::string to_string( const ActionLabel& a );

enum class ActionClass
{
    Input,
    Output,
    Hidden
};

std::string to_string( ActionClass c );

/// `?`, `!` or `;`.
char suffix( ActionClass c );

struct Transition
{
    std::string source;
    std::optional<std::string> pre;
    ActionLabel action;
    std::optional<std::string> post;
    std::string target;

    bool operator==( const Transition& ) const = default;
};

std::string to_string( const Transition& t );

struct TypeDecl
{
    std::string name;
    Domain domain;

    bool operator==( const TypeDecl& ) const = default;
};

/// Extended interface automaton: states, initial states, the three action
/// alphabets, contract variables, pre/postcondition registries and the
/// transition relation. Sequences keep declaration order; the transition
/// relation is a multiset (a step may be listed twice).
struct InterfaceAutomaton
{
    std::string name;
    std::vector<TypeDecl> types;
    std::vector<std::string> states;
    std::vector<std::string> initials;
    std::vector<ActionLabel> inputs;
    std::vector<ActionLabel> outputs;
    std::vector<ActionLabel> hidden;
    std::vector<VariableDecl> variables;
    std::vector<NamedConstraint> preconditions;
    std::vector<NamedConstraint> postconditions;
    std::vector<NamedConstraint> invariants;
    std::vector<Transition> transitions;

    [[nodiscard]] bool has_state( const std::string& s ) const;
    [[nodiscard]] std::optional<ActionClass> class_of( const ActionLabel& a ) const;
    [[nodiscard]] const std::vector<ActionLabel>& alphabet( ActionClass c ) const;
    [[nodiscard]] std::set<ActionLabel> actions() const;
    [[nodiscard]] const NamedConstraint* precondition( const std::string& name ) const;
    [[nodiscard]] const NamedConstraint* postcondition( const std::string& name ) const;
    [[nodiscard]] std::map<std::string, Domain> type_table() const;

    bool operator==( const InterfaceAutomaton& ) const = default;
};

struct Diagnostic
{
    std::string message;
    std::string location;  // automaton, state or transition the message refers to
    std::string key;       // machine-readable subject, e.g. "transition:3", "state:Off", "action:init"
    std::optional<SourcePos> pos;

    bool operator==( const Diagnostic& ) const = default;
};

std::string to_string( const Diagnostic& d );

/// Well-formedness check. Returns one diagnostic per violated invariant;
/// an empty list means the automaton is valid.
std::vector<Diagnostic> validate( const InterfaceAutomaton& a );

class StateNotFound : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Labels of class `c` on transitions leaving `s`.
std::set<ActionLabel> enabled_actions( const InterfaceAutomaton& a, const std::string& s, ActionClass c );

/// Outcome of the alphabet-disjointness check, one set per clause.
struct ComposabilityReport
{
    std::string left;
    std::string right;
    std::set<ActionLabel> inputs_clash;         // inputs(A1) & inputs(A2)
    std::set<ActionLabel> outputs_clash;        // outputs(A1) & outputs(A2)
    std::set<ActionLabel> left_hidden_clash;    // hidden(A1) & actions(A2)
    std::set<ActionLabel> right_hidden_clash;   // actions(A1) & hidden(A2)

    [[nodiscard]] bool composable() const;
    [[nodiscard]] std::set<ActionLabel> conflicts() const;
    [[nodiscard]] std::string summary() const;
};

ComposabilityReport composable( const InterfaceAutomaton& a1, const InterfaceAutomaton& a2 );

class NotComposable : public std::runtime_error
{
public:
    explicit NotComposable( ComposabilityReport report );
    [[nodiscard]] const ComposabilityReport& report() const { return _report; }

private:
    ComposabilityReport _report;
};

/// (inputs(A1) & outputs(A2)) | (inputs(A2) & outputs(A1)). Throws
/// `NotComposable` for a non-composable pair.
std::set<ActionLabel> shared( const InterfaceAutomaton& a1, const InterfaceAutomaton& a2 );

/// Qualifies every unqualified hidden action with the automaton name.
InterfaceAutomaton qualify_hidden( const InterfaceAutomaton& a );

} // namespace iac
