#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iac
{

struct SourcePos
{
    int line = 1;
    int column = 1;

    bool operator==( const SourcePos& ) const = default;
};

std::string to_string( const SourcePos& p );

/// Raised for lexical, syntax, resolution and type errors. The message is
/// prefixed with `line:column` when a position is known.
class ParseError : public std::runtime_error
{
public:
    ParseError( SourcePos pos, const std::string& message );

    [[nodiscard]] SourcePos pos() const { return _pos; }
    [[nodiscard]] const std::string& detail() const { return _detail; }

private:
    SourcePos _pos;
    std::string _detail;
};

enum class Tok
{
    Ident,
    Int,
    String,
    EnumLit,   // <off>
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    ColonColon,
    Dot,
    DotDot,
    Ellipsis,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Tilde,
    At,
    Arrow,     // -> or the unicode arrow
    Implies,   // =>
    MapsTo,    // |->
    End
};

struct Token
{
    Tok kind = Tok::End;
    std::string text;
    std::int64_t number = 0;
    SourcePos pos;
};

std::string describe( const Token& t );

/// Splits `source` into tokens. `//` starts a line comment. Throws
/// `ParseError` on characters outside the language.
std::vector<Token> tokenize( std::string_view source );

/// Cursor over a token vector shared by the expression and document parsers.
class TokenStream
{
public:
    explicit TokenStream( std::vector<Token> tokens );

    [[nodiscard]] const Token& peek( std::size_t ahead = 0 ) const;
    const Token& next();
    [[nodiscard]] bool at( Tok kind ) const { return peek().kind == kind; }
    [[nodiscard]] bool at_word( std::string_view word ) const;
    bool accept( Tok kind );
    bool accept_word( std::string_view word );
    const Token& expect( Tok kind, std::string_view what );
    void expect_word( std::string_view word );
    [[noreturn]] void fail( const std::string& message ) const;

private:
    std::vector<Token> _tokens;
    std::size_t _index = 0;
};

} // namespace iac
