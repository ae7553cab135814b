#pragma once

#include "iac/expr.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace iac
{

/// Assignment of values to variable paths. `old` holds the pre-state used
/// by `@pre` / `~` references and is only present for postconditions.
struct Valuation
{
    std::map<std::string, Value> current;
    std::optional<std::map<std::string, Value>> old;

    bool operator==( const Valuation& ) const = default;
};

std::string to_string( const Valuation& v );

/// Lists the bindings of `v` that fall outside their declared domain or are
/// not declared at all.
std::vector<std::string> check_valuation( const Valuation& v, const std::vector<VariableDecl>& decls );

class EvalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Evaluates `e` under `v`. Throws `EvalError` on a missing variable, an
/// application to an absent key ("undefined application"), integer
/// overflow, or a sort mismatch at runtime.
///
/// `and`/`or`/`implies` are order-insensitive: a dominating operand (false
/// for `and`, true for `or`) decides the result even if the other operand
/// fails; otherwise any failure propagates.
Value evaluate( const Expr& e, const Valuation& v );

/// Two-valued evaluation of a boolean expression.
bool eval_bool( const Expr& e, const Valuation& v );

/// Evaluates a named constraint. Postconditions require `v.old`.
bool eval_constraint( const NamedConstraint& c, const Valuation& v );

/// Constant folding, identity/annihilator elimination, double-negation
/// removal and canonical ordering of commutative operands. Preserves
/// `evaluate` results, including failures.
Expr simplify( const Expr& e );

enum class Falsity
{
    False,
    Satisfiable,
    Unknown
};

std::string to_string( Falsity f );

struct FalsityResult
{
    Falsity verdict = Falsity::Unknown;
    std::optional<Valuation> witness;   // present when Satisfiable
    std::uint64_t evaluated = 0;        // valuations tried
    std::string note;                   // why the result is Unknown
};

constexpr std::uint64_t default_enum_budget = 1'000'000;

/// Tiered falsity check: syntactic (after `simplify`), then exhaustive
/// enumeration over the declared finite domains of the free variables.
/// Evaluation failures count as "not true". Opaque free variables and
/// valuation spaces larger than `budget` give `Unknown`.
FalsityResult is_false( const Expr& e, const std::vector<VariableDecl>& decls,
                        std::uint64_t budget = default_enum_budget );

} // namespace iac
