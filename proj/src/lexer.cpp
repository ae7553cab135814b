#include "iac/lexer.hpp"

#include <cctype>
#include <charconv>

namespace iac
{

std::string to_string( const SourcePos& p )
{
    return std::to_string( p.line ) + ":" + std::to_string( p.column );
}

ParseError::ParseError( SourcePos pos, const std::string& message )
    : std::runtime_error( to_string( pos ) + ": " + message ), _pos( pos ), _detail( message )
{
}

std::string describe( const Token& t )
{
    switch ( t.kind )
    {
    case Tok::End: return "end of input";
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Int: return "integer " + t.text;
    case Tok::String: return "string \"" + t.text + "\"";
    case Tok::EnumLit: return "<" + t.text + ">";
    default: return "'" + t.text + "'";
    }
}

namespace
{

bool ident_start( char c )
{
    return std::isalpha( static_cast<unsigned char>( c ) ) || c == '_';
}

bool ident_char( char c )
{
    return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_';
}

} // namespace

std::vector<Token> tokenize( std::string_view src )
{
    std::vector<Token> out;
    std::size_t i = 0;
    SourcePos pos;

    auto bump = [ & ]( std::size_t n ) {
        for ( std::size_t k = 0; k < n && i < src.size(); ++k, ++i )
        {
            if ( src[ i ] == '\n' )
            {
                ++pos.line;
                pos.column = 1;
            }
            else if ( ( static_cast<unsigned char>( src[ i ] ) & 0xC0 ) != 0x80 )
                ++pos.column;
        }
    };
    auto starts = [ & ]( std::string_view s ) { return src.substr( i, s.size() ) == s; };
    auto push = [ & ]( Tok kind, std::size_t len, std::string text ) {
        out.push_back( Token{ kind, std::move( text ), 0, pos } );
        bump( len );
    };

    static const struct
    {
        std::string_view text;
        Tok kind;
    } symbols[] = {
        { "\xE2\x86\x92", Tok::Arrow }, // U+2192
        { "\xE2\x87\x92", Tok::Implies }, // U+21D2
        { "|->", Tok::MapsTo }, { "...", Tok::Ellipsis }, { "..", Tok::DotDot }, { "::", Tok::ColonColon },
        { "->", Tok::Arrow },   { "=>", Tok::Implies },   { "<>", Tok::Ne },      { "<=", Tok::Le },
        { ">=", Tok::Ge },      { "{", Tok::LBrace },     { "}", Tok::RBrace },   { "(", Tok::LParen },
        { ")", Tok::RParen },   { "[", Tok::LBracket },   { "]", Tok::RBracket }, { ",", Tok::Comma },
        { ";", Tok::Semi },     { ":", Tok::Colon },      { ".", Tok::Dot },      { "=", Tok::Eq },
        { "<", Tok::Lt },       { ">", Tok::Gt },         { "+", Tok::Plus },     { "-", Tok::Minus },
        { "~", Tok::Tilde },    { "@", Tok::At },
    };

    while ( i < src.size() )
    {
        char c = src[ i ];
        if ( std::isspace( static_cast<unsigned char>( c ) ) )
        {
            bump( 1 );
            continue;
        }
        if ( starts( "//" ) )
        {
            while ( i < src.size() && src[ i ] != '\n' )
                bump( 1 );
            continue;
        }
        if ( ident_start( c ) )
        {
            std::size_t j = i;
            while ( j < src.size() && ident_char( src[ j ] ) )
                ++j;
            push( Tok::Ident, j - i, std::string( src.substr( i, j - i ) ) );
            continue;
        }
        if ( std::isdigit( static_cast<unsigned char>( c ) ) )
        {
            std::size_t j = i;
            while ( j < src.size() && std::isdigit( static_cast<unsigned char>( src[ j ] ) ) )
                ++j;
            Token t{ Tok::Int, std::string( src.substr( i, j - i ) ), 0, pos };
            auto [ ptr, ec ] = std::from_chars( src.data() + i, src.data() + j, t.number );
            if ( ec != std::errc{} )
                throw ParseError( pos, "integer literal out of range: " + t.text );
            out.push_back( t );
            bump( j - i );
            continue;
        }
        if ( c == '"' )
        {
            SourcePos start = pos;
            std::size_t j = i + 1;
            while ( j < src.size() && src[ j ] != '"' && src[ j ] != '\n' )
                ++j;
            if ( j >= src.size() || src[ j ] != '"' )
                throw ParseError( start, "unterminated string literal" );
            out.push_back( Token{ Tok::String, std::string( src.substr( i + 1, j - i - 1 ) ), 0, start } );
            bump( j - i + 1 );
            continue;
        }
        // <literal> with no interior whitespace is an enum literal
        if ( c == '<' && i + 1 < src.size() && ident_start( src[ i + 1 ] ) )
        {
            std::size_t j = i + 1;
            while ( j < src.size() && ident_char( src[ j ] ) )
                ++j;
            if ( j < src.size() && src[ j ] == '>' )
            {
                push( Tok::EnumLit, j - i + 1, std::string( src.substr( i + 1, j - i - 1 ) ) );
                continue;
            }
        }
        bool matched = false;
        for ( const auto& s : symbols )
        {
            if ( starts( s.text ) )
            {
                push( s.kind, s.text.size(), std::string( s.text ) );
                matched = true;
                break;
            }
        }
        if ( !matched )
            throw ParseError( pos, std::string( "unexpected character '" ) + c + "'" );
    }
    out.push_back( Token{ Tok::End, "", 0, pos } );
    return out;
}

TokenStream::TokenStream( std::vector<Token> tokens ) : _tokens( std::move( tokens ) )
{
    if ( _tokens.empty() || _tokens.back().kind != Tok::End )
        _tokens.push_back( Token{} );
}

const Token& TokenStream::peek( std::size_t ahead ) const
{
    return _tokens[ std::min( _index + ahead, _tokens.size() - 1 ) ];
}

const Token& TokenStream::next()
{
    const Token& t = _tokens[ _index ];
    if ( _index + 1 < _tokens.size() )
        ++_index;
    return t;
}

bool TokenStream::at_word( std::string_view word ) const
{
    return peek().kind == Tok::Ident && peek().text == word;
}

bool TokenStream::accept( Tok kind )
{
    if ( !at( kind ) )
        return false;
    next();
    return true;
}

bool TokenStream::accept_word( std::string_view word )
{
    if ( !at_word( word ) )
        return false;
    next();
    return true;
}

const Token& TokenStream::expect( Tok kind, std::string_view what )
{
    if ( !at( kind ) )
        fail( "expected " + std::string( what ) + ", found " + describe( peek() ) );
    return next();
}

void TokenStream::expect_word( std::string_view word )
{
    if ( !at_word( word ) )
        fail( "expected '" + std::string( word ) + "', found " + describe( peek() ) );
    next();
}

void TokenStream::fail( const std::string& message ) const
{
    throw ParseError( peek().pos, message );
}

} // namespace iac
