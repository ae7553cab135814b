#include "iac/document.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace iac
{

const InterfaceAutomaton* ContractDocument::find( const std::string& name ) const
{
    auto it = std::find_if( automata.begin(), automata.end(), [ & ]( const InterfaceAutomaton& a ) { return a.name == name; } );
    return it == automata.end() ? nullptr : &*it;
}

namespace
{

std::string squeeze( const std::string& s )
{
    std::string out;
    std::copy_if( s.begin(), s.end(), std::back_inserter( out ), []( char c ) { return c != ' '; } );
    return out;
}

struct PendingGuard
{
    std::size_t transition;
    ConstraintKind kind;
    Expr body;
};

struct PendingConstraint
{
    NamedConstraint raw;
    SourcePos pos;
};

// Source positions of the things `validate` may complain about, by key.
using SourceMap = std::map<std::string, SourcePos>;

struct AutomatonDraft
{
    InterfaceAutomaton automaton;
    SourceMap where;
    std::vector<PendingConstraint> constraints;
    std::vector<PendingGuard> guards;
};

class DocumentParser
{
public:
    explicit DocumentParser( std::string_view text ) : _in( tokenize( text ) ) {}

    ParsedDocument run()
    {
        std::vector<AutomatonDraft> drafts;
        std::vector<PendingConstraint> loose;
        std::map<std::string, SourcePos> names;
        ContractDocument doc;

        while ( !_in.at( Tok::End ) )
        {
            if ( _in.accept_word( "meta" ) )
            {
                std::string key = _in.expect( Tok::Ident, "metadata key" ).text;
                std::string value = _in.expect( Tok::String, "quoted metadata value" ).text;
                _in.expect( Tok::Semi, "';'" );
                doc.metadata.emplace_back( std::move( key ), std::move( value ) );
            }
            else if ( _in.at_word( "automaton" ) )
            {
                SourcePos pos = _in.next().pos;
                AutomatonDraft draft = parse_automaton( pos );
                if ( !names.emplace( draft.automaton.name, pos ).second )
                    throw ParseError( pos, "duplicate automaton name '" + draft.automaton.name + "'" );
                drafts.push_back( std::move( draft ) );
            }
            else if ( _in.at_word( "context" ) || _in.at_word( "pre" ) || _in.at_word( "post" ) || _in.at_word( "inv" ) )
            {
                // parameter types may use aliases of the automata seen so far
                std::map<std::string, Domain> types;
                for ( const auto& d : drafts )
                    for ( const auto& t : d.automaton.types )
                        types.emplace( t.name, t.domain );
                SourcePos pos = _in.peek().pos;
                loose.push_back( { parse_raw_constraint( _in, types ), pos } );
                _in.expect( Tok::Semi, "';' after constraint" );
            }
            else
                _in.fail( "expected 'automaton', 'meta' or a constraint, found " + describe( _in.peek() ) );
        }

        for ( auto& c : loose )
        {
            AutomatonDraft* owner = nullptr;
            if ( c.raw.context )
                for ( auto& d : drafts )
                    if ( squeeze( d.automaton.name ) == squeeze( c.raw.context->contract ) )
                        owner = &d;
            if ( owner )
                owner->constraints.push_back( std::move( c ) );
            else
                doc.constraints.push_back( resolve_checked( c, {} ) );
        }

        ParsedDocument out;
        for ( auto& d : drafts )
        {
            finish( d );
            for ( Diagnostic diag : validate( d.automaton ) )
            {
                auto it = d.where.find( diag.key );
                diag.pos = it != d.where.end() ? it->second : d.where.at( "automaton" );
                if ( diag.location != d.automaton.name )
                    diag.location = d.automaton.name + ": " + diag.location;
                out.diagnostics.push_back( std::move( diag ) );
            }
            doc.automata.push_back( std::move( d.automaton ) );
        }
        out.document = std::move( doc );
        return out;
    }

private:
    TokenStream _in;

    static NamedConstraint resolve_checked( const PendingConstraint& c, const std::vector<VariableDecl>& decls )
    {
        return resolve_constraint( c.raw, decls );
    }

    std::vector<std::string> ident_list( SourceMap* where, const std::string& prefix )
    {
        std::vector<std::string> out;
        _in.expect( Tok::LBrace, "'{'" );
        if ( !_in.at( Tok::RBrace ) )
        {
            do
            {
                const Token& t = _in.expect( Tok::Ident, "identifier" );
                if ( where )
                    ( *where )[ prefix + t.text ] = t.pos;
                out.push_back( t.text );
            } while ( _in.accept( Tok::Comma ) );
        }
        _in.expect( Tok::RBrace, "'}'" );
        _in.accept( Tok::Semi );
        return out;
    }

    ActionLabel label( SourceMap* where = nullptr )
    {
        const Token& t = _in.expect( Tok::Ident, "action name" );
        std::string first = t.text;
        if ( where )
        {
            // the later declaration is the offending one
            ActionLabel l = _in.at( Tok::ColonColon ) ? ActionLabel( first, _in.peek( 1 ).text ) : ActionLabel( first );
            ( *where )[ "action:" + l.str() ] = t.pos;
        }
        if ( _in.accept( Tok::ColonColon ) )
            return ActionLabel( first, _in.expect( Tok::Ident, "action name" ).text );
        return ActionLabel( first );
    }

    std::vector<ActionLabel> label_list( SourceMap& where )
    {
        std::vector<ActionLabel> out;
        _in.expect( Tok::LBrace, "'{'" );
        if ( !_in.at( Tok::RBrace ) )
        {
            do
                out.push_back( label( &where ) );
            while ( _in.accept( Tok::Comma ) );
        }
        _in.expect( Tok::RBrace, "'}'" );
        _in.accept( Tok::Semi );
        return out;
    }

    std::string path()
    {
        std::string p = _in.expect( Tok::Ident, "variable name" ).text;
        while ( _in.accept( Tok::Dot ) )
            p += "." + _in.expect( Tok::Ident, "field name" ).text;
        return p;
    }

    // `pre NAME` or `pre { expr }`
    std::optional<std::string> guard( AutomatonDraft& d, ConstraintKind kind )
    {
        if ( _in.accept( Tok::LBrace ) )
        {
            d.guards.push_back( { d.automaton.transitions.size(), kind, parse_raw_expr( _in ) } );
            _in.expect( Tok::RBrace, "'}' after inline constraint" );
            return std::string();
        }
        return _in.expect( Tok::Ident, "constraint name" ).text;
    }

    void transitions( AutomatonDraft& d )
    {
        _in.expect( Tok::LBrace, "'{'" );
        while ( !_in.accept( Tok::RBrace ) )
        {
            Transition t;
            const Token& src = _in.expect( Tok::Ident, "source state" );
            d.where[ "transition:" + std::to_string( d.automaton.transitions.size() ) ] = src.pos;
            t.source = src.text;
            _in.expect( Tok::Minus, "'-['" );
            _in.expect( Tok::LBracket, "'-['" );
            t.action = label();
            if ( _in.accept_word( "pre" ) )
                t.pre = guard( d, ConstraintKind::Pre );
            if ( _in.accept_word( "post" ) )
                t.post = guard( d, ConstraintKind::Post );
            _in.expect( Tok::RBracket, "']->'" );
            _in.expect( Tok::Arrow, "']->'" );
            t.target = _in.expect( Tok::Ident, "target state" ).text;
            _in.expect( Tok::Semi, "';' after transition" );
            d.automaton.transitions.push_back( std::move( t ) );
        }
        _in.accept( Tok::Semi );
    }

    AutomatonDraft parse_automaton( SourcePos pos )
    {
        AutomatonDraft d;
        InterfaceAutomaton& a = d.automaton;
        a.name = _in.expect( Tok::Ident, "automaton name" ).text;
        d.where[ "automaton" ] = pos;
        std::map<std::string, Domain> types;
        _in.expect( Tok::LBrace, "'{'" );
        while ( !_in.accept( Tok::RBrace ) )
        {
            const Token& t = _in.peek();
            if ( _in.accept_word( "type" ) )
            {
                const Token& name = _in.expect( Tok::Ident, "type name" );
                if ( types.count( name.text ) )
                    throw ParseError( name.pos, "duplicate type '" + name.text + "'" );
                _in.expect( Tok::Eq, "'='" );
                Domain dom = parse_domain( _in, types ).named( name.text );
                _in.expect( Tok::Semi, "';'" );
                d.where[ "type:" + name.text ] = name.pos;
                types[ name.text ] = dom;
                a.types.push_back( { name.text, std::move( dom ) } );
            }
            else if ( _in.accept_word( "states" ) )
            {
                auto xs = ident_list( &d.where, "state:" );
                a.states.insert( a.states.end(), xs.begin(), xs.end() );
            }
            else if ( _in.accept_word( "initial" ) )
            {
                d.where[ "initial" ] = t.pos;
                auto xs = ident_list( nullptr, "" );
                a.initials.insert( a.initials.end(), xs.begin(), xs.end() );
            }
            else if ( _in.accept_word( "inputs" ) )
            {
                auto xs = label_list( d.where );
                a.inputs.insert( a.inputs.end(), xs.begin(), xs.end() );
            }
            else if ( _in.accept_word( "outputs" ) )
            {
                auto xs = label_list( d.where );
                a.outputs.insert( a.outputs.end(), xs.begin(), xs.end() );
            }
            else if ( _in.accept_word( "hidden" ) )
            {
                auto xs = label_list( d.where );
                a.hidden.insert( a.hidden.end(), xs.begin(), xs.end() );
            }
            else if ( _in.accept_word( "variables" ) )
            {
                _in.expect( Tok::LBrace, "'{'" );
                while ( !_in.accept( Tok::RBrace ) )
                {
                    SourcePos vpos = _in.peek().pos;
                    VariableDecl v;
                    v.name = path();
                    _in.expect( Tok::Colon, "':'" );
                    v.domain = parse_domain( _in, types );
                    _in.expect( Tok::Semi, "';'" );
                    d.where[ "variable:" + v.name ] = vpos;
                    a.variables.push_back( std::move( v ) );
                }
                _in.accept( Tok::Semi );
            }
            else if ( _in.accept_word( "transitions" ) )
                transitions( d );
            else if ( _in.at_word( "context" ) || _in.at_word( "pre" ) || _in.at_word( "post" ) || _in.at_word( "inv" ) )
            {
                d.constraints.push_back( { parse_raw_constraint( _in, types ), t.pos } );
                _in.expect( Tok::Semi, "';' after constraint" );
            }
            else
                _in.fail( "unexpected " + describe( t ) + " in automaton " + a.name );
        }
        _in.accept( Tok::Semi );
        return d;
    }

    void finish( AutomatonDraft& d )
    {
        InterfaceAutomaton& a = d.automaton;
        std::set<std::string> taken;
        for ( auto& c : d.constraints )
        {
            if ( c.raw.name.empty() )
                throw ParseError( c.pos, "constraint in automaton " + a.name + " needs a name" );
            if ( !taken.insert( c.raw.name ).second )
                throw ParseError( c.pos, "duplicate constraint name '" + c.raw.name + "'" );
            NamedConstraint r = resolve_checked( c, a.variables );
            d.where[ "constraint:" + r.name ] = c.pos;
            switch ( r.kind )
            {
            case ConstraintKind::Pre: a.preconditions.push_back( std::move( r ) ); break;
            case ConstraintKind::Post: a.postconditions.push_back( std::move( r ) ); break;
            case ConstraintKind::Inv: a.invariants.push_back( std::move( r ) ); break;
            }
        }
        std::map<ConstraintKind, int> counter;
        for ( auto& g : d.guards )
        {
            const std::string stem = a.name + ( g.kind == ConstraintKind::Pre ? "_pre_" : "_post_" );
            std::string name;
            do
                name = stem + std::to_string( ++counter[ g.kind ] );
            while ( taken.count( name ) );
            taken.insert( name );
            NamedConstraint raw;
            raw.name = name;
            raw.kind = g.kind;
            raw.body = g.body;
            NamedConstraint r = resolve_checked( { raw, g.body.pos }, a.variables );
            Transition& t = a.transitions[ g.transition ];
            if ( g.kind == ConstraintKind::Pre )
            {
                t.pre = name;
                a.preconditions.push_back( std::move( r ) );
            }
            else
            {
                t.post = name;
                a.postconditions.push_back( std::move( r ) );
            }
        }
    }
};

void print_list( std::ostream& out, const char* keyword, const std::vector<std::string>& xs )
{
    out << "    " << keyword << " {";
    for ( std::size_t i = 0; i < xs.size(); ++i )
        out << ( i ? ", " : " " ) << xs[ i ];
    out << ( xs.empty() ? "}\n" : " }\n" );
}

std::vector<std::string> label_strings( const std::vector<ActionLabel>& xs )
{
    std::vector<std::string> out;
    for ( const auto& x : xs )
        out.push_back( x.str() );
    return out;
}

void print_body( std::ostream& out, const InterfaceAutomaton& a )
{
    out << "automaton " << a.name << " {\n";
    for ( const auto& t : a.types )
        out << "    type " << t.name << " = " << domain_definition( t.domain ) << ";\n";
    print_list( out, "states", a.states );
    print_list( out, "initial", a.initials );
    print_list( out, "inputs", label_strings( a.inputs ) );
    print_list( out, "outputs", label_strings( a.outputs ) );
    print_list( out, "hidden", label_strings( a.hidden ) );
    if ( !a.variables.empty() )
    {
        out << "    variables {\n";
        for ( const auto& v : a.variables )
            out << "        " << v.name << " : " << domain_syntax( v.domain ) << ";\n";
        out << "    }\n";
    }
    for ( const auto* registry : { &a.preconditions, &a.postconditions, &a.invariants } )
        for ( const auto& c : *registry )
            out << "    " << print_constraint( c ) << ";\n";
    out << "    transitions {\n";
    for ( const auto& t : a.transitions )
    {
        out << "        " << t.source << " -[" << t.action.str();
        if ( t.pre )
            out << " pre " << *t.pre;
        if ( t.post )
            out << " post " << *t.post;
        out << "]-> " << t.target << ";\n";
    }
    out << "    }\n}\n";
}

bool plain_id( const std::string& s )
{
    if ( s.empty() || !( std::isalpha( static_cast<unsigned char>( s[ 0 ] ) ) || s[ 0 ] == '_' ) )
        return false;
    return std::all_of( s.begin(), s.end(), []( char c ) { return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_'; } );
}

std::string quoted( const std::string& s )
{
    std::string out = "\"";
    for ( char c : s )
    {
        if ( c == '"' || c == '\\' )
            out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string dot_id( const std::string& s )
{
    return plain_id( s ) ? s : quoted( s );
}

std::string dot( const InterfaceAutomaton& a, const std::map<std::string, std::pair<std::string, std::string>>* pairs )
{
    std::ostringstream out;
    out << "digraph " << dot_id( a.name ) << " {\n";
    out << "    rankdir=LR;\n";
    out << "    node [shape=circle];\n";
    const std::set<std::string> initial( a.initials.begin(), a.initials.end() );
    for ( const auto& s : a.states )
    {
        std::vector<std::string> attrs;
        if ( pairs )
        {
            auto it = pairs->find( s );
            if ( it != pairs->end() )
                attrs.push_back( "label=" + quoted( "(" + it->second.first + ", " + it->second.second + ")" ) );
        }
        if ( initial.count( s ) )
            attrs.push_back( "shape=doublecircle" );
        out << "    " << dot_id( s );
        for ( std::size_t i = 0; i < attrs.size(); ++i )
            out << ( i ? ", " : " [" ) << attrs[ i ];
        out << ( attrs.empty() ? ";\n" : "];\n" );
    }
    for ( const auto& t : a.transitions )
    {
        std::string text = t.action.str();
        if ( auto c = a.class_of( t.action ) )
            text += suffix( *c );
        if ( t.pre )
            text += " pre " + *t.pre;
        if ( t.post )
            text += " post " + *t.post;
        out << "    " << dot_id( t.source ) << " -> " << dot_id( t.target ) << " [label=" << quoted( text ) << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace

ParsedDocument parse_document( std::string_view text )
{
    return DocumentParser( text ).run();
}

std::string print_document( const ContractDocument& d )
{
    std::ostringstream out;
    for ( const auto& [ key, value ] : d.metadata )
        out << "meta " << key << " \"" << value << "\";\n";
    bool first = d.metadata.empty();
    for ( const auto& a : d.automata )
    {
        if ( !first )
            out << "\n";
        first = false;
        print_body( out, a );
    }
    if ( !d.constraints.empty() && !first )
        out << "\n";
    for ( const auto& c : d.constraints )
        out << print_constraint( c ) << ";\n";
    return out.str();
}

std::string print_automaton( const InterfaceAutomaton& a )
{
    std::ostringstream out;
    print_body( out, a );
    return out.str();
}

std::string export_dot( const InterfaceAutomaton& a )
{
    return dot( a, nullptr );
}

std::string export_dot( const ProductResult& p )
{
    return dot( p.automaton, &p.pair_of );
}

} // namespace iac
