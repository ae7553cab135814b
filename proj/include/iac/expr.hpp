#pragma once

#include "iac/lexer.hpp"
#include "iac/value.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace iac
{

enum class Op
{
    // literals
    Bool,
    Int,
    EnumLit,
    SetLit,
    SeqLit,
    MapLit,     // args alternate key, value
    RecordLit,  // keys name the fields of args
    // references
    Path,       // unresolved dotted identifier chain
    Var,
    Field,
    // operators
    Not,
    Neg,
    Dom,
    And,
    Or,
    Implies,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    InSet,
    Apply,      // m(k) and m[k]
    Call        // built-in collection operations, see `builtin_names`
};

/// Constraint-language syntax tree. Plain value type; equality ignores the
/// inferred sort and the source position.
struct Expr
{
    Op op = Op::Bool;
    Value literal;                      // Bool/Int/EnumLit
    std::string name;                   // Var path, Field name, Call name
    bool old = false;                   // Var refers to the pre-state
    std::vector<std::string> segments;  // Path
    std::vector<Expr> args;
    std::vector<std::string> keys;      // RecordLit field names
    Domain sort;                        // filled in by resolution
    SourcePos pos;

    static Expr boolean( bool b );
    static Expr integer( std::int64_t i );
    static Expr enum_literal( std::string lit );
    static Expr var( std::string path, bool old = false );
    static Expr unary( Op op, Expr operand );
    static Expr binary( Op op, Expr lhs, Expr rhs );
    static Expr call( std::string name, std::vector<Expr> args );

    [[nodiscard]] bool is_bool( bool b ) const { return op == Op::Bool && literal.boolean == b; }
};

bool operator==( const Expr& a, const Expr& b );

/// `size`, `lastItem`, `domain`, `range`, `front`, `notEmpty`, `isEmpty`.
const std::set<std::string>& builtin_names();

/// Canonical concrete syntax; `parse_expr(print_expr(e))` equals `e`.
std::string print_expr( const Expr& e );

struct VariableDecl
{
    std::string name;
    Domain domain;

    bool operator==( const VariableDecl& ) const = default;
};

enum class ConstraintKind
{
    Inv,
    Pre,
    Post
};

std::string to_string( ConstraintKind k );

struct ConstraintContext
{
    std::string contract;                  // as written, may contain spaces
    std::optional<std::string> operation;
    std::vector<VariableDecl> params;      // operation signature, in scope of the body

    bool operator==( const ConstraintContext& ) const = default;
};

struct NamedConstraint
{
    std::string name;
    std::optional<ConstraintContext> context;
    ConstraintKind kind = ConstraintKind::Pre;
    Expr body;

    bool operator==( const NamedConstraint& ) const = default;
};

std::string print_constraint( const NamedConstraint& c );

/// Lookup table for variable paths in scope of a constraint body.
using Scope = std::map<std::string, Domain>;

Scope make_scope( const std::vector<VariableDecl>& decls );

/// Parses one expression with no name resolution (paths stay `Op::Path`).
Expr parse_raw_expr( TokenStream& in );

/// Resolves paths against `scope` and infers sorts. Old-value references
/// are rejected unless `allow_old`. Throws `ParseError`.
Expr resolve( const Expr& raw, const Scope& scope, bool allow_old );

/// Parses and resolves a bare expression.
Expr parse_expr( std::string_view text, const std::vector<VariableDecl>& decls, bool allow_old = true );

/// Parses the unresolved form of
/// `[context Contract [:: op(params)]] (pre|post|inv) Name : expr`.
/// `types` supplies aliases usable in parameter declarations.
NamedConstraint parse_raw_constraint( TokenStream& in, const std::map<std::string, Domain>& types );

/// Resolves a raw constraint; `decls` are the contract variables, the
/// signature parameters are added on top.
NamedConstraint resolve_constraint( const NamedConstraint& raw, const std::vector<VariableDecl>& decls );

/// Parses a full constraint text, e.g.
/// `context LE Device::incStrength() pre LDPreIS: myCS.s < 10`.
NamedConstraint parse_constraint( std::string_view text, const std::vector<VariableDecl>& decls,
                                  const std::map<std::string, Domain>& types = {} );

/// Parses a domain descriptor (`bool`, `int[0..3]`, `map K to V`, alias, ...).
Domain parse_domain( TokenStream& in, const std::map<std::string, Domain>& types );

/// Concrete syntax of a domain; aliased domains print as their alias name.
std::string domain_syntax( const Domain& d );

/// Like `domain_syntax` but always expands the outermost level, as needed on
/// the right-hand side of a `type` declaration.
std::string domain_definition( const Domain& d );

/// Variable paths occurring in `e`, split into current-state and old-state uses.
struct FreeVariables
{
    std::set<std::string> current;
    std::set<std::string> old;
};

FreeVariables free_variables( const Expr& e );

/// Variables in scope of `c`: `decls` plus its signature parameters.
std::vector<VariableDecl> constraint_scope( const NamedConstraint& c, const std::vector<VariableDecl>& decls );

} // namespace iac
