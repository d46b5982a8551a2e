#pragma once

#include <stdexcept>
#include <string>

namespace story {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Domain file / dictionary validation failure. line is 1-based, 0 = unknown.
struct DomainError : Error {
    int line;
    DomainError(int line_, const std::string& msg)
        : Error("domain:" + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Xapi syntax failure with source position.
struct ParseError : Error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

// Reference resolution failure (unresolved definite, missing quote scene, ...).
struct ResolveError : Error {
    using Error::Error;
};

// Engine invariant violation (tombstone re-admission, duplicate shadow, ...).
struct EngineError : Error {
    using Error::Error;
};

}  // namespace story
