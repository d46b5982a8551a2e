#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "story/error.hpp"

namespace story::xapi {

// -- AST ---------------------------------------------------------------

struct PartRef {
    enum class Form { Definite, Indefinite, Proper, PronounI, Chain, Text };
    Form form = Form::Definite;
    std::vector<std::string> words;          // Definite / Indefinite
    std::string name;                        // Proper
    std::string text;                        // Text
    std::shared_ptr<PartRef> chain_head;     // Chain
    std::string chain_relation;
    std::shared_ptr<PartRef> chain_tail;
};

bool equal(const PartRef& a, const PartRef& b);

struct VerbPhrase {
    bool wh = false;
    std::vector<std::string> words;
    std::optional<std::string> scene_label;  // "in [scene] \"X\""
};

struct Clause {
    PartRef subject;
    VerbPhrase verb;
    std::optional<PartRef> object;
};

struct Statement {
    Clause main;
    std::optional<Clause> quoted;  // after "//"
    char term = '.';
    int line = 0, col = 0;
};

struct Directive {
    std::string name;  // without '$'
    struct Arg {
        std::string value;
        bool quoted = false;
    };
    std::vector<Arg> args;
    int line = 0, col = 0;
};

using Item = std::variant<Statement, Directive>;
using Program = std::vector<Item>;

bool equal(const Clause& a, const Clause& b);
bool equal(const Statement& a, const Statement& b);
bool equal(const Directive& a, const Directive& b);
bool equal(const Item& a, const Item& b);

// -- Parsing -----------------------------------------------------------

// Grammar:
//   program   := {directive | statement}
//   statement := clause ["//" clause] term          term in {. ? !}
//   clause    := part "/" vphrase ["/" part]
//   part      := ["the"|"a"|"an"] words | "<name>" | I | chain | text "<str>"
//   chain     := part "--" word "--" part
//   vphrase   := ["wh"] word {word} ["in" ["scene"] "<name>"]
//   directive := "$" word {arg}                     args end at the line break
// '#' starts a line comment. '?' terminator iff a wh marker is present.
Program parse_program(const std::string& src);

// Canonical text form; parse_program(unparse(item)) yields an equal AST.
std::string unparse(const PartRef& p);
std::string unparse(const VerbPhrase& v);
std::string unparse(const Statement& s);
std::string unparse(const Directive& d);
std::string unparse(const Item& item);

}  // namespace story::xapi
