#include "iac/expr.hpp"

#include <algorithm>
#include <sstream>

namespace iac
{

Expr Expr::boolean( bool b )
{
    Expr e;
    e.op = Op::Bool;
    e.literal = Value::of_bool( b );
    e.sort = Domain::boolean();
    return e;
}

Expr Expr::integer( std::int64_t i )
{
    Expr e;
    e.op = Op::Int;
    e.literal = Value::of_int( i );
    e.sort = Domain::integer( i, i );
    return e;
}

Expr Expr::enum_literal( std::string lit )
{
    Expr e;
    e.op = Op::EnumLit;
    e.literal = Value::of_enum( lit );
    e.sort = Domain::enumeration( { std::move( lit ) } );
    return e;
}

Expr Expr::var( std::string path, bool old )
{
    Expr e;
    e.op = Op::Var;
    e.name = std::move( path );
    e.old = old;
    return e;
}

Expr Expr::unary( Op op, Expr operand )
{
    Expr e;
    e.op = op;
    e.pos = operand.pos;
    e.args.push_back( std::move( operand ) );
    if ( op == Op::Not )
        e.sort = Domain::boolean();
    return e;
}

Expr Expr::binary( Op op, Expr lhs, Expr rhs )
{
    Expr e;
    e.op = op;
    e.pos = lhs.pos;
    e.args.push_back( std::move( lhs ) );
    e.args.push_back( std::move( rhs ) );
    switch ( op )
    {
    case Op::Add:
    case Op::Sub: e.sort = Domain::integer( 0, 0 ); break;
    default: e.sort = Domain::boolean(); break;
    }
    return e;
}

Expr Expr::call( std::string name, std::vector<Expr> args )
{
    Expr e;
    e.op = Op::Call;
    e.name = std::move( name );
    if ( !args.empty() )
        e.pos = args.front().pos;
    e.args = std::move( args );
    return e;
}

bool operator==( const Expr& a, const Expr& b )
{
    return a.op == b.op && a.literal == b.literal && a.name == b.name && a.old == b.old
           && a.segments == b.segments && a.keys == b.keys && a.args == b.args;
}

const std::set<std::string>& builtin_names()
{
    static const std::set<std::string> names{ "size", "lastItem", "domain", "range", "front", "notEmpty", "isEmpty" };
    return names;
}

std::string to_string( ConstraintKind k )
{
    switch ( k )
    {
    case ConstraintKind::Inv: return "inv";
    case ConstraintKind::Pre: return "pre";
    case ConstraintKind::Post: return "post";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// printing

namespace
{

enum Prec
{
    P_IMPLIES = 1,
    P_OR,
    P_AND,
    P_NOT,
    P_CMP,
    P_ADD,
    P_UNARY,
    P_POSTFIX,
    P_PRIMARY
};

int precedence( const Expr& e )
{
    switch ( e.op )
    {
    case Op::Implies: return P_IMPLIES;
    case Op::Or: return P_OR;
    case Op::And: return P_AND;
    case Op::Not: return P_NOT;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::InSet: return P_CMP;
    case Op::Add:
    case Op::Sub: return P_ADD;
    case Op::Neg:
    case Op::Dom: return P_UNARY;
    case Op::Int: return e.literal.integer < 0 ? P_UNARY : P_PRIMARY;
    case Op::Field:
    case Op::Apply:
    case Op::Call: return P_POSTFIX;
    default: return P_PRIMARY;
    }
}

const char* infix( Op op )
{
    switch ( op )
    {
    case Op::Implies: return " implies ";
    case Op::Or: return " or ";
    case Op::And: return " and ";
    case Op::Eq: return " = ";
    case Op::Ne: return " <> ";
    case Op::Lt: return " < ";
    case Op::Le: return " <= ";
    case Op::Gt: return " > ";
    case Op::Ge: return " >= ";
    case Op::InSet: return " in set ";
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    default: return " ? ";
    }
}

void print( std::ostream& out, const Expr& e, int context );

void print_list( std::ostream& out, const std::vector<Expr>& xs, std::size_t from = 0 )
{
    for ( std::size_t i = from; i < xs.size(); ++i )
    {
        if ( i > from )
            out << ", ";
        print( out, xs[ i ], P_IMPLIES );
    }
}

void print( std::ostream& out, const Expr& e, int context )
{
    const int prec = precedence( e );
    const bool wrap = prec < context;
    if ( wrap )
        out << "(";
    switch ( e.op )
    {
    case Op::Bool:
    case Op::Int:
    case Op::EnumLit: out << to_string( e.literal ); break;
    case Op::SetLit:
        out << "{";
        print_list( out, e.args );
        out << "}";
        break;
    case Op::SeqLit:
        out << "[";
        print_list( out, e.args );
        out << "]";
        break;
    case Op::MapLit:
        if ( e.args.empty() )
        {
            out << "{|->}";
            break;
        }
        out << "{";
        for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
        {
            if ( i )
                out << ", ";
            print( out, e.args[ i ], P_IMPLIES );
            out << " |-> ";
            print( out, e.args[ i + 1 ], P_IMPLIES );
        }
        out << "}";
        break;
    case Op::RecordLit:
        out << "(";
        for ( std::size_t i = 0; i < e.args.size(); ++i )
        {
            out << ( i ? ", " : "" ) << e.keys[ i ] << ": ";
            print( out, e.args[ i ], P_IMPLIES );
        }
        out << ")";
        break;
    case Op::Path:
        for ( std::size_t i = 0; i < e.segments.size(); ++i )
            out << ( i ? "." : "" ) << e.segments[ i ];
        if ( e.old )
            out << "@pre";
        break;
    case Op::Var:
        out << e.name;
        if ( e.old )
            out << "@pre";
        break;
    case Op::Field:
        print( out, e.args[ 0 ], P_POSTFIX );
        out << "." << e.name;
        break;
    case Op::Not:
        out << "not ";
        print( out, e.args[ 0 ], P_NOT );
        break;
    case Op::Neg:
        out << "-";
        print( out, e.args[ 0 ], P_POSTFIX );
        break;
    case Op::Dom:
        out << "dom ";
        print( out, e.args[ 0 ], P_UNARY );
        break;
    case Op::Implies:
        print( out, e.args[ 0 ], P_IMPLIES + 1 );
        out << infix( e.op );
        print( out, e.args[ 1 ], P_IMPLIES );
        break;
    case Op::Or:
    case Op::And:
    case Op::Add:
    case Op::Sub:
        print( out, e.args[ 0 ], prec );
        out << infix( e.op );
        print( out, e.args[ 1 ], prec + 1 );
        break;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::InSet:
        print( out, e.args[ 0 ], P_ADD );
        out << infix( e.op );
        print( out, e.args[ 1 ], P_ADD );
        break;
    case Op::Apply:
        print( out, e.args[ 0 ], P_POSTFIX );
        out << "(";
        print_list( out, e.args, 1 );
        out << ")";
        break;
    case Op::Call:
        print( out, e.args[ 0 ], P_POSTFIX );
        if ( e.name == "notEmpty" || e.name == "isEmpty" )
            out << "->" << e.name;
        else
        {
            out << "." << e.name << "(";
            print_list( out, e.args, 1 );
            out << ")";
        }
        break;
    }
    if ( wrap )
        out << ")";
}

} // namespace

std::string print_expr( const Expr& e )
{
    std::ostringstream out;
    print( out, e, P_IMPLIES );
    return out.str();
}

std::string domain_syntax( const Domain& d )
{
    if ( !d.type_name.empty() )
        return d.type_name;
    return domain_definition( d );
}

std::string domain_definition( const Domain& d )
{
    switch ( d.kind )
    {
    case Domain::Kind::Set: return "set of " + domain_syntax( d.element() );
    case Domain::Kind::Seq: return "seq of " + domain_syntax( d.element() ) + " max " + std::to_string( d.max_length );
    case Domain::Kind::Map: return "map " + domain_syntax( d.key() ) + " to " + domain_syntax( d.value() );
    case Domain::Kind::Record:
    {
        std::string s = "record { ";
        for ( std::size_t i = 0; i < d.fields.size(); ++i )
            s += ( i ? ", " : "" ) + d.fields[ i ] + " : " + domain_syntax( d.children[ i ] );
        return s + " }";
    }
    default: return to_string( d );
    }
}

std::string print_constraint( const NamedConstraint& c )
{
    std::ostringstream out;
    if ( c.context )
    {
        out << "context " << c.context->contract;
        if ( c.context->operation )
        {
            out << "::" << *c.context->operation << "(";
            for ( std::size_t i = 0; i < c.context->params.size(); ++i )
                out << ( i ? ", " : "" ) << c.context->params[ i ].name << " : "
                    << domain_syntax( c.context->params[ i ].domain );
            out << ")";
        }
        out << " ";
    }
    out << to_string( c.kind ) << " " << c.name << ": " << print_expr( c.body );
    return out.str();
}

// ---------------------------------------------------------------------------
// raw parsing

namespace
{

const std::set<std::string, std::less<>>& reserved()
{
    static const std::set<std::string, std::less<>> words{ "and",  "or",   "implies", "not",  "in",   "set",
                                                           "dom",  "true", "false",   "context", "pre",
                                                           "post", "inv" };
    return words;
}

Expr parse_implies( TokenStream& in );

Expr at_pos( Expr e, SourcePos pos )
{
    e.pos = pos;
    return e;
}

Expr parse_primary( TokenStream& in )
{
    const Token& t = in.peek();
    SourcePos pos = t.pos;
    switch ( t.kind )
    {
    case Tok::Int:
        in.next();
        return at_pos( Expr::integer( t.number ), pos );
    case Tok::EnumLit:
    {
        std::string lit = in.next().text;
        return at_pos( Expr::enum_literal( lit ), pos );
    }
    case Tok::Ident:
    {
        if ( t.text == "true" || t.text == "false" )
        {
            bool b = t.text == "true";
            in.next();
            return at_pos( Expr::boolean( b ), pos );
        }
        if ( reserved().count( t.text ) )
            in.fail( "unexpected keyword '" + t.text + "'" );
        Expr e;
        e.op = Op::Path;
        e.segments.push_back( in.next().text );
        e.pos = pos;
        return e;
    }
    case Tok::LParen:
    {
        in.next();
        if ( in.peek().kind == Tok::Ident && in.peek( 1 ).kind == Tok::Colon )
        {
            Expr rec;
            rec.op = Op::RecordLit;
            rec.pos = pos;
            do
            {
                rec.keys.push_back( in.expect( Tok::Ident, "field name" ).text );
                in.expect( Tok::Colon, "':'" );
                rec.args.push_back( parse_implies( in ) );
            } while ( in.accept( Tok::Comma ) );
            in.expect( Tok::RParen, "')'" );
            return rec;
        }
        Expr e = parse_implies( in );
        in.expect( Tok::RParen, "')'" );
        return e;
    }
    case Tok::LBrace:
    {
        in.next();
        Expr e;
        e.pos = pos;
        if ( in.accept( Tok::MapsTo ) )
        {
            in.expect( Tok::RBrace, "'}'" );
            e.op = Op::MapLit;
            return e;
        }
        e.op = Op::SetLit;
        if ( in.accept( Tok::RBrace ) )
            return e;
        Expr first = parse_implies( in );
        if ( in.accept( Tok::MapsTo ) )
        {
            e.op = Op::MapLit;
            e.args.push_back( std::move( first ) );
            e.args.push_back( parse_implies( in ) );
            while ( in.accept( Tok::Comma ) )
            {
                e.args.push_back( parse_implies( in ) );
                in.expect( Tok::MapsTo, "'|->'" );
                e.args.push_back( parse_implies( in ) );
            }
        }
        else
        {
            e.args.push_back( std::move( first ) );
            while ( in.accept( Tok::Comma ) )
                e.args.push_back( parse_implies( in ) );
        }
        in.expect( Tok::RBrace, "'}'" );
        return e;
    }
    case Tok::LBracket:
    {
        in.next();
        Expr e;
        e.op = Op::SeqLit;
        e.pos = pos;
        if ( !in.accept( Tok::RBracket ) )
        {
            do
                e.args.push_back( parse_implies( in ) );
            while ( in.accept( Tok::Comma ) );
            in.expect( Tok::RBracket, "']'" );
        }
        return e;
    }
    default:
        in.fail( "expected an expression, found " + describe( t ) );
    }
}

void mark_old( Expr& e, SourcePos pos )
{
    if ( e.op != Op::Path )
        throw ParseError( pos, "old-value marker must follow a variable" );
    e.old = true;
}

Expr parse_postfix( TokenStream& in )
{
    Expr e = parse_primary( in );
    for ( ;; )
    {
        const Token& t = in.peek();
        SourcePos pos = t.pos;
        if ( t.kind == Tok::Dot )
        {
            in.next();
            std::string name = in.expect( Tok::Ident, "name after '.'" ).text;
            if ( in.at( Tok::LParen ) )
            {
                in.next();
                std::vector<Expr> args{ std::move( e ) };
                if ( !in.accept( Tok::RParen ) )
                {
                    do
                        args.push_back( parse_implies( in ) );
                    while ( in.accept( Tok::Comma ) );
                    in.expect( Tok::RParen, "')'" );
                }
                e = at_pos( Expr::call( name, std::move( args ) ), pos );
            }
            else if ( e.op == Op::Path )
                e.segments.push_back( name );
            else
            {
                Expr f;
                f.op = Op::Field;
                f.name = name;
                f.pos = pos;
                f.args.push_back( std::move( e ) );
                e = std::move( f );
            }
        }
        else if ( t.kind == Tok::LParen )
        {
            in.next();
            Expr first = parse_implies( in );
            if ( in.accept( Tok::Comma ) )
            {
                // prefix slice s(1,...,k)
                in.expect( Tok::Ellipsis, "'...'" );
                in.expect( Tok::Comma, "','" );
                Expr last = parse_implies( in );
                in.expect( Tok::RParen, "')'" );
                if ( !( first.op == Op::Int && first.literal.integer == 1 ) )
                    throw ParseError( pos, "only prefix slices of the form s(1,...,k) are supported" );
                e = at_pos( Expr::call( "front", { std::move( e ), std::move( last ) } ), pos );
                continue;
            }
            in.expect( Tok::RParen, "')'" );
            Expr a;
            a.op = Op::Apply;
            a.pos = pos;
            a.args.push_back( std::move( e ) );
            a.args.push_back( std::move( first ) );
            e = std::move( a );
        }
        else if ( t.kind == Tok::LBracket )
        {
            in.next();
            Expr key = parse_implies( in );
            in.expect( Tok::RBracket, "']'" );
            Expr a;
            a.op = Op::Apply;
            a.pos = pos;
            a.args.push_back( std::move( e ) );
            a.args.push_back( std::move( key ) );
            e = std::move( a );
        }
        else if ( t.kind == Tok::Arrow )
        {
            in.next();
            std::string name = in.expect( Tok::Ident, "collection operation after '->'" ).text;
            std::vector<Expr> args{ std::move( e ) };
            if ( in.accept( Tok::LParen ) )
            {
                if ( !in.accept( Tok::RParen ) )
                {
                    do
                        args.push_back( parse_implies( in ) );
                    while ( in.accept( Tok::Comma ) );
                    in.expect( Tok::RParen, "')'" );
                }
            }
            e = at_pos( Expr::call( name, std::move( args ) ), pos );
        }
        else if ( t.kind == Tok::Tilde )
        {
            in.next();
            mark_old( e, pos );
        }
        else if ( t.kind == Tok::At )
        {
            in.next();
            in.expect_word( "pre" );
            mark_old( e, pos );
        }
        else
            return e;
    }
}

Expr parse_unary( TokenStream& in )
{
    SourcePos pos = in.peek().pos;
    if ( in.accept( Tok::Minus ) )
    {
        Expr operand = parse_unary( in );
        if ( operand.op == Op::Int )
            return at_pos( Expr::integer( -operand.literal.integer ), pos );
        return at_pos( Expr::unary( Op::Neg, std::move( operand ) ), pos );
    }
    if ( in.accept_word( "dom" ) )
        return at_pos( Expr::unary( Op::Dom, parse_unary( in ) ), pos );
    return parse_postfix( in );
}

Expr parse_additive( TokenStream& in )
{
    Expr lhs = parse_unary( in );
    for ( ;; )
    {
        if ( in.accept( Tok::Plus ) )
            lhs = Expr::binary( Op::Add, std::move( lhs ), parse_unary( in ) );
        else if ( in.accept( Tok::Minus ) )
            lhs = Expr::binary( Op::Sub, std::move( lhs ), parse_unary( in ) );
        else
            return lhs;
    }
}

Expr parse_comparison( TokenStream& in )
{
    Expr lhs = parse_additive( in );
    static const std::pair<Tok, Op> ops[] = { { Tok::Eq, Op::Eq }, { Tok::Ne, Op::Ne }, { Tok::Lt, Op::Lt },
                                              { Tok::Le, Op::Le }, { Tok::Gt, Op::Gt }, { Tok::Ge, Op::Ge } };
    for ( auto [ tok, op ] : ops )
        if ( in.accept( tok ) )
            return Expr::binary( op, std::move( lhs ), parse_additive( in ) );
    if ( in.accept_word( "in" ) )
    {
        in.expect_word( "set" );
        return Expr::binary( Op::InSet, std::move( lhs ), parse_additive( in ) );
    }
    return lhs;
}

Expr parse_not( TokenStream& in )
{
    SourcePos pos = in.peek().pos;
    if ( in.accept_word( "not" ) )
        return at_pos( Expr::unary( Op::Not, parse_not( in ) ), pos );
    return parse_comparison( in );
}

Expr parse_and( TokenStream& in )
{
    Expr lhs = parse_not( in );
    while ( in.accept_word( "and" ) )
        lhs = Expr::binary( Op::And, std::move( lhs ), parse_not( in ) );
    return lhs;
}

Expr parse_or( TokenStream& in )
{
    Expr lhs = parse_and( in );
    while ( in.accept_word( "or" ) )
        lhs = Expr::binary( Op::Or, std::move( lhs ), parse_and( in ) );
    return lhs;
}

Expr parse_implies( TokenStream& in )
{
    Expr lhs = parse_or( in );
    if ( in.accept_word( "implies" ) || in.accept( Tok::Implies ) )
        return Expr::binary( Op::Implies, std::move( lhs ), parse_implies( in ) );
    return lhs;
}

} // namespace

Expr parse_raw_expr( TokenStream& in )
{
    return parse_implies( in );
}

Domain parse_domain( TokenStream& in, const std::map<std::string, Domain>& types )
{
    const Token& t = in.expect( Tok::Ident, "a domain" );
    const std::string word = t.text;
    if ( word == "bool" )
        return Domain::boolean();
    if ( word == "opaque" )
        return Domain::opaque();
    if ( word == "int" )
    {
        in.expect( Tok::LBracket, "'[' after int" );
        auto bound = [ & ] {
            bool neg = in.accept( Tok::Minus );
            std::int64_t n = in.expect( Tok::Int, "integer bound" ).number;
            return neg ? -n : n;
        };
        std::int64_t lo = bound();
        in.expect( Tok::DotDot, "'..'" );
        std::int64_t hi = bound();
        in.expect( Tok::RBracket, "']'" );
        return Domain::integer( lo, hi );
    }
    if ( word == "enum" )
    {
        in.expect( Tok::LBrace, "'{'" );
        std::vector<std::string> lits;
        if ( !in.at( Tok::RBrace ) )
        {
            do
                lits.push_back( in.expect( Tok::Ident, "enum literal" ).text );
            while ( in.accept( Tok::Comma ) );
        }
        in.expect( Tok::RBrace, "'}'" );
        return Domain::enumeration( std::move( lits ) );
    }
    if ( word == "set" )
    {
        in.expect_word( "of" );
        return Domain::set_of( parse_domain( in, types ) );
    }
    if ( word == "seq" )
    {
        in.expect_word( "of" );
        Domain elem = parse_domain( in, types );
        in.expect_word( "max" );
        auto n = in.expect( Tok::Int, "maximum length" ).number;
        return Domain::seq_of( std::move( elem ), static_cast<std::size_t>( n ) );
    }
    if ( word == "map" )
    {
        Domain key = parse_domain( in, types );
        in.expect_word( "to" );
        return Domain::map_of( std::move( key ), parse_domain( in, types ) );
    }
    if ( word == "record" )
    {
        in.expect( Tok::LBrace, "'{'" );
        std::vector<std::string> names;
        std::vector<Domain> domains;
        do
        {
            names.push_back( in.expect( Tok::Ident, "field name" ).text );
            in.expect( Tok::Colon, "':'" );
            domains.push_back( parse_domain( in, types ) );
        } while ( in.accept( Tok::Comma ) );
        in.expect( Tok::RBrace, "'}'" );
        return Domain::record( std::move( names ), std::move( domains ) );
    }
    auto it = types.find( word );
    if ( it == types.end() )
        throw ParseError( t.pos, "unknown type '" + word + "'" );
    return it->second;
}

NamedConstraint parse_raw_constraint( TokenStream& in, const std::map<std::string, Domain>& types )
{
    NamedConstraint c;
    auto is_kind = [ & ] { return in.at_word( "pre" ) || in.at_word( "post" ) || in.at_word( "inv" ); };
    if ( in.accept_word( "context" ) )
    {
        ConstraintContext ctx;
        while ( in.at( Tok::Ident ) && !is_kind() )
            ctx.contract += ( ctx.contract.empty() ? "" : " " ) + in.next().text;
        if ( ctx.contract.empty() )
            in.fail( "expected contract name after 'context'" );
        if ( in.accept( Tok::ColonColon ) )
        {
            ctx.operation = in.expect( Tok::Ident, "operation name" ).text;
            in.expect( Tok::LParen, "'('" );
            if ( !in.at( Tok::RParen ) )
            {
                do
                {
                    // OCL parameter direction is accepted and dropped
                    if ( ( in.at_word( "in" ) || in.at_word( "out" ) || in.at_word( "inout" ) )
                         && in.peek( 1 ).kind == Tok::Ident )
                        in.next();
                    VariableDecl p;
                    p.name = in.expect( Tok::Ident, "parameter name" ).text;
                    in.expect( Tok::Colon, "':'" );
                    p.domain = parse_domain( in, types );
                    ctx.params.push_back( std::move( p ) );
                } while ( in.accept( Tok::Comma ) );
            }
            in.expect( Tok::RParen, "')'" );
        }
        c.context = std::move( ctx );
    }
    if ( in.accept_word( "pre" ) )
        c.kind = ConstraintKind::Pre;
    else if ( in.accept_word( "post" ) )
        c.kind = ConstraintKind::Post;
    else if ( in.accept_word( "inv" ) )
        c.kind = ConstraintKind::Inv;
    else
        in.fail( "expected 'pre', 'post' or 'inv', found " + describe( in.peek() ) );
    if ( in.at( Tok::Ident ) )
        c.name = in.next().text;
    in.expect( Tok::Colon, "':'" );
    c.body = parse_raw_expr( in );
    return c;
}

// ---------------------------------------------------------------------------
// resolution and sort inference

namespace
{

std::string sort_name( const Domain& d )
{
    switch ( d.kind )
    {
    case Domain::Kind::Bool: return "bool";
    case Domain::Kind::Int: return "int";
    case Domain::Kind::Enum: return d.type_name.empty() ? "enum" : d.type_name;
    case Domain::Kind::Set: return "set of " + sort_name( d.element() );
    case Domain::Kind::Seq: return "seq of " + sort_name( d.element() );
    case Domain::Kind::Map: return "map " + sort_name( d.key() ) + " to " + sort_name( d.value() );
    case Domain::Kind::Record: return d.type_name.empty() ? "record" : d.type_name;
    case Domain::Kind::Opaque: return "opaque";
    }
    return "?";
}

bool compatible( const Domain& a, const Domain& b )
{
    using K = Domain::Kind;
    if ( a.kind == K::Opaque || b.kind == K::Opaque )
        return true;
    if ( a.kind != b.kind )
        return false;
    switch ( a.kind )
    {
    case K::Enum:
    {
        auto subset = []( const Domain& x, const Domain& y ) {
            return std::all_of( x.literals.begin(), x.literals.end(), [ & ]( const std::string& l ) {
                return std::find( y.literals.begin(), y.literals.end(), l ) != y.literals.end();
            } );
        };
        return subset( a, b ) || subset( b, a );
    }
    case K::Set:
    case K::Seq: return compatible( a.element(), b.element() );
    case K::Map: return compatible( a.key(), b.key() ) && compatible( a.value(), b.value() );
    case K::Record:
    {
        if ( a.fields.size() != b.fields.size() )
            return false;
        for ( std::size_t i = 0; i < a.fields.size(); ++i )
        {
            const Domain* other = b.field( a.fields[ i ] );
            if ( !other || !compatible( a.children[ i ], *other ) )
                return false;
        }
        return true;
    }
    default: return true;
    }
}

// Picks the more informative of two compatible sorts for collection literals.
Domain join( const Domain& a, const Domain& b )
{
    if ( a.kind == Domain::Kind::Opaque )
        return b;
    if ( a.kind == Domain::Kind::Enum && b.kind == Domain::Kind::Enum && b.literals.size() > a.literals.size() )
        return b;
    return a;
}

class Resolver
{
public:
    Resolver( const Scope& scope, bool allow_old ) : _scope( scope ), _allow_old( allow_old ) {}

    Expr run( const Expr& raw )
    {
        Expr e = raw;
        e.args.clear();
        for ( const Expr& a : raw.args )
            e.args.push_back( run( a ) );
        switch ( e.op )
        {
        case Op::Bool: e.sort = Domain::boolean(); break;
        case Op::Int: e.sort = Domain::integer( e.literal.integer, e.literal.integer ); break;
        case Op::EnumLit: e.sort = Domain::enumeration( { e.literal.literal } ); break;
        case Op::SetLit:
        case Op::SeqLit:
        {
            Domain elem = Domain::opaque();
            for ( const Expr& a : e.args )
            {
                if ( !compatible( elem, a.sort ) )
                    fail( a, "collection elements have mixed sorts" );
                elem = join( elem, a.sort );
            }
            e.sort = e.op == Op::SetLit ? Domain::set_of( elem ) : Domain::seq_of( elem, e.args.size() );
            break;
        }
        case Op::MapLit:
        {
            Domain key = Domain::opaque(), val = Domain::opaque();
            for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
            {
                if ( !compatible( key, e.args[ i ].sort ) || !compatible( val, e.args[ i + 1 ].sort ) )
                    fail( e.args[ i ], "map literal entries have mixed sorts" );
                key = join( key, e.args[ i ].sort );
                val = join( val, e.args[ i + 1 ].sort );
            }
            e.sort = Domain::map_of( key, val );
            break;
        }
        case Op::RecordLit:
        {
            std::vector<Domain> ds;
            for ( const Expr& a : e.args )
                ds.push_back( a.sort );
            e.sort = Domain::record( e.keys, std::move( ds ) );
            if ( auto err = check_domain( e.sort ) )
                fail( e, *err );
            break;
        }
        case Op::Path: return resolve_path( raw );
        case Op::Var:
        {
            auto it = _scope.find( e.name );
            if ( it == _scope.end() )
                throw ParseError( e.pos, "unknown variable '" + e.name + "'" );
            check_old( e );
            e.sort = it->second;
            break;
        }
        case Op::Field: e.sort = field_sort( e, e.args[ 0 ].sort, e.name ); break;
        case Op::Not:
            expect_kind( e.args[ 0 ], Domain::Kind::Bool );
            e.sort = Domain::boolean();
            break;
        case Op::Neg:
            expect_kind( e.args[ 0 ], Domain::Kind::Int );
            e.sort = Domain::integer( 0, 0 );
            break;
        case Op::Dom:
            expect_kind( e.args[ 0 ], Domain::Kind::Map );
            e.sort = e.args[ 0 ].sort.kind == Domain::Kind::Map ? Domain::set_of( e.args[ 0 ].sort.key() )
                                                                 : Domain::set_of( Domain::opaque() );
            break;
        case Op::And:
        case Op::Or:
        case Op::Implies:
            expect_kind( e.args[ 0 ], Domain::Kind::Bool );
            expect_kind( e.args[ 1 ], Domain::Kind::Bool );
            e.sort = Domain::boolean();
            break;
        case Op::Eq:
        case Op::Ne:
            if ( !compatible( e.args[ 0 ].sort, e.args[ 1 ].sort ) )
                fail( e, "cannot compare " + sort_name( e.args[ 0 ].sort ) + " with "
                             + sort_name( e.args[ 1 ].sort ) );
            e.sort = Domain::boolean();
            break;
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
            expect_kind( e.args[ 0 ], Domain::Kind::Int );
            expect_kind( e.args[ 1 ], Domain::Kind::Int );
            e.sort = Domain::boolean();
            break;
        case Op::Add:
        case Op::Sub:
            expect_kind( e.args[ 0 ], Domain::Kind::Int );
            expect_kind( e.args[ 1 ], Domain::Kind::Int );
            e.sort = Domain::integer( 0, 0 );
            break;
        case Op::InSet:
        {
            const Domain& coll = e.args[ 1 ].sort;
            expect_kind( e.args[ 1 ], Domain::Kind::Set );
            if ( coll.kind == Domain::Kind::Set && !compatible( e.args[ 0 ].sort, coll.element() ) )
                fail( e, "element of sort " + sort_name( e.args[ 0 ].sort ) + " cannot be a member of "
                             + sort_name( coll ) );
            e.sort = Domain::boolean();
            break;
        }
        case Op::Apply: e.sort = apply_sort( e ); break;
        case Op::Call: e.sort = call_sort( e ); break;
        }
        return e;
    }

private:
    const Scope& _scope;
    bool _allow_old;

    [[noreturn]] static void fail( const Expr& e, const std::string& message )
    {
        throw ParseError( e.pos, "type error in '" + print_expr( e ) + "': " + message );
    }

    static void expect_kind( const Expr& e, Domain::Kind kind )
    {
        if ( e.sort.kind == Domain::Kind::Opaque || e.sort.kind == kind )
            return;
        Domain want;
        want.kind = kind;
        if ( kind == Domain::Kind::Set || kind == Domain::Kind::Seq )
            want.children = { Domain::opaque() };
        if ( kind == Domain::Kind::Map )
            want.children = { Domain::opaque(), Domain::opaque() };
        std::string wanted = sort_name( want );
        if ( auto p = wanted.find( " of opaque" ); p != std::string::npos )
            wanted.erase( p );
        if ( kind == Domain::Kind::Map )
            wanted = "map";
        fail( e, "expected " + wanted + ", found " + sort_name( e.sort ) );
    }

    void check_old( const Expr& e ) const
    {
        if ( e.old && !_allow_old )
            throw ParseError( e.pos, "old-value reference '" + e.name + "@pre' is only allowed in postconditions" );
    }

    Domain field_sort( const Expr& e, const Domain& record, const std::string& name ) const
    {
        if ( record.kind == Domain::Kind::Opaque )
            return Domain::opaque();
        if ( const Domain* f = record.field( name ) )
            return *f;
        fail( e, "no field '" + name + "' in " + sort_name( record ) );
    }

    Expr resolve_path( const Expr& raw ) const
    {
        const auto& segs = raw.segments;
        std::size_t used = 0;
        std::string path;
        for ( std::size_t k = segs.size(); k > 0; --k )
        {
            std::string candidate;
            for ( std::size_t i = 0; i < k; ++i )
                candidate += ( i ? "." : "" ) + segs[ i ];
            if ( _scope.count( candidate ) )
            {
                used = k;
                path = candidate;
                break;
            }
        }
        if ( used == 0 )
            throw ParseError( raw.pos, "unknown variable '" + segs[ 0 ] + "'" );

        Expr e = Expr::var( path, raw.old );
        e.pos = raw.pos;
        e.sort = _scope.at( path );
        check_old( e );
        for ( std::size_t i = used; i < segs.size(); ++i )
        {
            const std::string& name = segs[ i ];
            const bool collection = e.sort.kind == Domain::Kind::Map || e.sort.kind == Domain::Kind::Seq
                                    || e.sort.kind == Domain::Kind::Set;
            const bool has_field = e.sort.field( name ) != nullptr;
            if ( !has_field && builtin_names().count( name ) && name != "front"
                 && ( collection || e.sort.kind == Domain::Kind::Opaque ) )
            {
                // call style without parentheses, e.g. `devOn.range`
                Expr c = Expr::call( name, { std::move( e ) } );
                c.pos = raw.pos;
                c.sort = call_sort( c );
                e = std::move( c );
                continue;
            }
            Expr f;
            f.op = Op::Field;
            f.name = name;
            f.pos = raw.pos;
            f.sort = field_sort( e, e.sort, name );
            f.args.push_back( std::move( e ) );
            e = std::move( f );
        }
        return e;
    }

    Domain apply_sort( const Expr& e ) const
    {
        const Domain& target = e.args[ 0 ].sort;
        if ( e.args.size() != 2 )
            fail( e, "application takes exactly one argument" );
        switch ( target.kind )
        {
        case Domain::Kind::Map:
            if ( !compatible( target.key(), e.args[ 1 ].sort ) )
                fail( e, "key of sort " + sort_name( e.args[ 1 ].sort ) + " does not match " + sort_name( target ) );
            return target.value();
        case Domain::Kind::Seq:
            expect_kind( e.args[ 1 ], Domain::Kind::Int );
            return target.element();
        case Domain::Kind::Opaque: return Domain::opaque();
        default: fail( e, "cannot apply a value of sort " + sort_name( target ) );
        }
    }

    Domain call_sort( const Expr& e ) const
    {
        const std::string& n = e.name;
        if ( !builtin_names().count( n ) )
            fail( e, "unknown operation '" + n + "'" );
        const Domain& target = e.args[ 0 ].sort;
        const auto kind = target.kind;
        const bool opaque = kind == Domain::Kind::Opaque;
        auto arity = [ & ]( std::size_t extra ) {
            if ( e.args.size() != 1 + extra )
                fail( e, "'" + n + "' takes " + std::to_string( extra ) + " argument(s)" );
        };
        if ( n == "notEmpty" || n == "isEmpty" )
        {
            arity( 0 );
            return Domain::boolean();
        }
        if ( n == "size" )
        {
            arity( 0 );
            if ( !opaque && kind != Domain::Kind::Set && kind != Domain::Kind::Seq && kind != Domain::Kind::Map )
                fail( e, "size() needs a collection, found " + sort_name( target ) );
            return Domain::integer( 0, 0 );
        }
        if ( n == "lastItem" )
        {
            arity( 0 );
            expect_kind( e.args[ 0 ], Domain::Kind::Seq );
            return opaque ? Domain::opaque() : target.element();
        }
        if ( n == "front" )
        {
            arity( 1 );
            expect_kind( e.args[ 0 ], Domain::Kind::Seq );
            expect_kind( e.args[ 1 ], Domain::Kind::Int );
            return target;
        }
        // domain / range
        arity( 0 );
        expect_kind( e.args[ 0 ], Domain::Kind::Map );
        if ( opaque )
            return Domain::set_of( Domain::opaque() );
        return Domain::set_of( n == "domain" ? target.key() : target.value() );
    }
};

} // namespace

Scope make_scope( const std::vector<VariableDecl>& decls )
{
    Scope s;
    for ( const auto& d : decls )
        s[ d.name ] = d.domain;
    return s;
}

Expr resolve( const Expr& raw, const Scope& scope, bool allow_old )
{
    return Resolver( scope, allow_old ).run( raw );
}

Expr parse_expr( std::string_view text, const std::vector<VariableDecl>& decls, bool allow_old )
{
    TokenStream in( tokenize( text ) );
    Expr raw = parse_raw_expr( in );
    if ( !in.at( Tok::End ) )
        in.fail( "unexpected " + describe( in.peek() ) + " after expression" );
    return resolve( raw, make_scope( decls ), allow_old );
}

std::vector<VariableDecl> constraint_scope( const NamedConstraint& c, const std::vector<VariableDecl>& decls )
{
    std::vector<VariableDecl> all = decls;
    if ( c.context )
        for ( const auto& p : c.context->params )
        {
            auto it = std::find_if( all.begin(), all.end(), [ & ]( const VariableDecl& d ) { return d.name == p.name; } );
            if ( it != all.end() )
                *it = p;
            else
                all.push_back( p );
        }
    return all;
}

NamedConstraint resolve_constraint( const NamedConstraint& raw, const std::vector<VariableDecl>& decls )
{
    NamedConstraint c = raw;
    c.body = resolve( raw.body, make_scope( constraint_scope( raw, decls ) ), raw.kind == ConstraintKind::Post );
    if ( c.body.sort.kind != Domain::Kind::Bool && c.body.sort.kind != Domain::Kind::Opaque )
        throw ParseError( c.body.pos, "constraint '" + c.name + "' is not a boolean expression" );
    return c;
}

NamedConstraint parse_constraint( std::string_view text, const std::vector<VariableDecl>& decls,
                                  const std::map<std::string, Domain>& types )
{
    TokenStream in( tokenize( text ) );
    NamedConstraint raw = parse_raw_constraint( in, types );
    in.accept( Tok::Semi );
    if ( !in.at( Tok::End ) )
        in.fail( "unexpected " + describe( in.peek() ) + " after constraint" );
    return resolve_constraint( raw, decls );
}

FreeVariables free_variables( const Expr& e )
{
    FreeVariables fv;
    auto walk = [ & ]( auto&& self, const Expr& x ) -> void {
        if ( x.op == Op::Var )
            ( x.old ? fv.old : fv.current ).insert( x.name );
        for ( const Expr& a : x.args )
            self( self, a );
    };
    walk( walk, e );
    return fv;
}

} // namespace iac
