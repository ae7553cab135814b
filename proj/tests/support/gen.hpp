#pragma once

// Random automata for property tests, kept in a plain form of their own so
// the brute-force checker can work on them without the library.

#include "iac/automaton.hpp"

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace gen
{

/// Integer variable over 0..size-1.
struct Var
{
    std::string name;
    int size = 1;
};

enum class Cmp
{
    Eq,
    Ne,
    Lt,
    Gt
};

/// `var [@pre] cmp (constant | other)`
struct Atom
{
    std::string var;
    bool old = false;
    Cmp cmp = Cmp::Eq;
    std::optional<std::string> other;
    int constant = 0;
};

/// Conjunction of atoms, or a constant when `atoms` is empty.
struct Guard
{
    bool value = true;
    std::vector<Atom> atoms;
};

struct Step
{
    int source = 0;
    std::string action;
    int target = 0;
    std::optional<Guard> pre;
    std::optional<Guard> post;
};

struct Machine
{
    std::string name;
    int states = 1;
    std::set<int> initials;
    std::map<std::string, char> classes;  // 'I', 'O' or 'H'
    std::vector<Var> vars;
    std::vector<Step> steps;
};

struct Limits
{
    int max_states = 4;
    int max_actions = 3;
    int max_vars = 2;
    int max_domain = 3;
    int max_steps = 8;
    double guard_rate = 0.3;
};

std::string state_name( const Machine& m, int s );
std::string guard_text( const Guard& g );

/// Pair whose alphabets satisfy the composability clauses by construction.
std::pair<Machine, Machine> composable_pair( std::mt19937_64& rng, const Limits& limits = {} );

/// Single random machine over a fixed alphabet.
Machine machine( std::mt19937_64& rng, const std::string& name, const std::map<std::string, char>& classes,
                 const std::vector<Var>& vars, const Limits& limits );

/// Library form. Every guard becomes its own registry entry.
iac::InterfaceAutomaton to_automaton( const Machine& m );

} // namespace gen
