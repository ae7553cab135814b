#pragma once

#include "iac/document.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fixtures
{

inline std::string path( const std::string& file )
{
    return std::string( IACHECK_FIXTURES ) + "/" + file;
}

inline std::string read( const std::string& file )
{
    std::ifstream in( path( file ) );
    if ( !in )
        throw std::runtime_error( "cannot open fixture " + file );
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline iac::ContractDocument document( const std::string& file )
{
    return iac::parse_document( read( file ) ).document;
}

/// First automaton of a fixture file.
inline iac::InterfaceAutomaton automaton( const std::string& file )
{
    return document( file ).automata.at( 0 );
}

inline iac::InterfaceAutomaton device() { return automaton( "le_device.ia" ); }
inline iac::InterfaceAutomaton transport() { return automaton( "transport_layer.ia" ); }

} // namespace fixtures
