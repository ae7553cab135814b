#pragma once

#include "iac/automaton.hpp"
#include "iac/product.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iac
{

/// Contents of one `.ia` file.
struct ContractDocument
{
    std::vector<std::pair<std::string, std::string>> metadata;  // `meta key "value";`, in order
    std::vector<InterfaceAutomaton> automata;
    /// Top-level constraints not bound to any automaton of the document.
    std::vector<NamedConstraint> constraints;

    [[nodiscard]] const InterfaceAutomaton* find( const std::string& name ) const;

    bool operator==( const ContractDocument& ) const = default;
};

struct ParsedDocument
{
    ContractDocument document;
    /// `validate` findings for every automaton, with source positions.
    std::vector<Diagnostic> diagnostics;
};

/// Parses a document. Syntax, name-resolution, type and duplicate-name
/// errors throw `ParseError`; well-formedness violations that still leave a
/// structurally complete automaton are returned as diagnostics.
///
/// Inline guards (`-[a pre { x > 0 }]->`) are registered under generated
/// names `<Automaton>_pre_<k>` / `<Automaton>_post_<k>`. A top-level
/// constraint whose context names an automaton of the document (spaces
/// ignored) joins that automaton's registry.
ParsedDocument parse_document( std::string_view text );

/// Canonical text; `parse_document(print_document(d)).document == d`.
std::string print_document( const ContractDocument& d );

/// Single automaton as a document.
std::string print_automaton( const InterfaceAutomaton& a );

/// Graphviz source. Initial states are drawn as double circles; edge labels
/// carry the class suffix (`?`, `!`, `;`) and any pre/post names.
std::string export_dot( const InterfaceAutomaton& a );

/// As above, with every node labelled by its state pair.
std::string export_dot( const ProductResult& p );

} // namespace iac
