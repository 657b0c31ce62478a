#pragma once

#include <stdexcept>
#include <string>

namespace pcsp
{
    /// Malformed input file; carries the 1-based line number of the offending line.
    class ParseError : public std::runtime_error
    {
    private:
        int _line;

    public:
        ParseError(int line, const std::string & message) :
            std::runtime_error("line " + std::to_string(line) + ": " + message),
            _line(line)
        {
        }

        auto line() const noexcept -> int { return _line; }
    };

    /// The template is outside what a solver or sandwich recipe knows how to handle.
    class UnsupportedTemplate : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A configured size guard was exceeded (brute force caps, truth-table arity caps).
    class ResourceLimit : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// An internal self-check failed. Always a bug, never bad input.
    class InternalCheckFailure : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    /// Certificate generation could not complete at these parameters (usually: p too small for b).
    class ProofSearchFailure : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}
