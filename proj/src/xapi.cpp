#include "story/xapi.hpp"

#include <cctype>
#include <sstream>

namespace story::xapi {

// -- AST equality --------------------------------------------------------

bool equal(const PartRef& a, const PartRef& b) {
    if (a.form != b.form) return false;
    switch (a.form) {
        case PartRef::Form::Definite:
        case PartRef::Form::Indefinite: return a.words == b.words;
        case PartRef::Form::Proper: return a.name == b.name;
        case PartRef::Form::PronounI: return true;
        case PartRef::Form::Text: return a.text == b.text;
        case PartRef::Form::Chain:
            return a.chain_relation == b.chain_relation && equal(*a.chain_head, *b.chain_head) &&
                   equal(*a.chain_tail, *b.chain_tail);
    }
    return false;
}

bool equal(const Clause& a, const Clause& b) {
    if (!equal(a.subject, b.subject)) return false;
    if (a.verb.wh != b.verb.wh || a.verb.words != b.verb.words ||
        a.verb.scene_label != b.verb.scene_label)
        return false;
    if (a.object.has_value() != b.object.has_value()) return false;
    return !a.object || equal(*a.object, *b.object);
}

bool equal(const Statement& a, const Statement& b) {
    if (a.term != b.term || !equal(a.main, b.main)) return false;
    if (a.quoted.has_value() != b.quoted.has_value()) return false;
    return !a.quoted || equal(*a.quoted, *b.quoted);
}

bool equal(const Directive& a, const Directive& b) {
    if (a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (a.args[i].value != b.args[i].value || a.args[i].quoted != b.args[i].quoted)
            return false;
    return true;
}

bool equal(const Item& a, const Item& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<Statement>(a))
        return equal(std::get<Statement>(a), std::get<Statement>(b));
    return equal(std::get<Directive>(a), std::get<Directive>(b));
}

// -- Lexer ----------------------------------------------------------------

namespace {

enum class Tok { Word, String, Slash, DSlash, DashDash, Term, Dollar, End };

struct Token {
    Tok type = Tok::End;
    std::string text;  // word text / string contents / terminator char
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.type = Tok::End;
            cur_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (c == '/') {
            bump();
            if (pos_ < src_.size() && src_[pos_] == '/') {
                bump();
                cur_ = {Tok::DSlash, "//", cur_.line, cur_.col};
            } else {
                cur_ = {Tok::Slash, "/", cur_.line, cur_.col};
            }
            return;
        }
        if (c == '.' || c == '?' || c == '!') {
            bump();
            cur_ = {Tok::Term, std::string(1, c), cur_.line, cur_.col};
            return;
        }
        if (c == '$') {
            bump();
            cur_ = {Tok::Dollar, "$", cur_.line, cur_.col};
            return;
        }
        if (c == '"') {
            int l = line_, co = col_;
            bump();
            std::string out;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                if (src_[pos_] == '\n') throw ParseError(l, co, "unterminated string");
                out.push_back(src_[pos_]);
                bump();
            }
            if (pos_ >= src_.size()) throw ParseError(l, co, "unterminated string");
            bump();
            cur_ = {Tok::String, out, l, co};
            return;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
            bump();
            bump();
            cur_ = {Tok::DashDash, "--", cur_.line, cur_.col};
            return;
        }
        if (std::isalnum(static_cast<unsigned char>(c))) {
            int l = line_, co = col_;
            std::string out;
            while (pos_ < src_.size()) {
                char w = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(w))) {
                    out.push_back(w);
                    bump();
                } else if (w == '-' && pos_ + 1 < src_.size() &&
                           std::isalnum(static_cast<unsigned char>(src_[pos_ + 1]))) {
                    out.push_back(w);
                    bump();
                } else {
                    break;
                }
            }
            cur_ = {Tok::Word, out, l, co};
            return;
        }
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

// -- Parser -----------------------------------------------------------------

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Program parse() {
        Program out;
        while (lex_.peek().type != Tok::End) {
            if (lex_.peek().type == Tok::Dollar)
                out.push_back(parse_directive());
            else
                out.push_back(parse_statement());
        }
        return out;
    }

private:
    [[noreturn]] void fail(const Token& at, const std::string& msg) {
        throw ParseError(at.line, at.col, msg);
    }

    Directive parse_directive() {
        Token dollar = lex_.take();
        Directive d;
        d.line = dollar.line;
        d.col = dollar.col;
        if (lex_.peek().type != Tok::Word || lex_.peek().line != dollar.line)
            fail(lex_.peek(), "expected directive name after '$'");
        d.name = lex_.take().text;
        // args run to the end of the source line
        while ((lex_.peek().type == Tok::Word || lex_.peek().type == Tok::String) &&
               lex_.peek().line == dollar.line) {
            Token a = lex_.take();
            d.args.push_back({a.text, a.type == Tok::String});
        }
        return d;
    }

    Statement parse_statement() {
        Token first = lex_.peek();
        Statement st;
        st.line = first.line;
        st.col = first.col;
        st.main = parse_clause();
        if (lex_.peek().type == Tok::DSlash) {
            lex_.take();
            if (lex_.peek().type == Tok::End)
                fail(first, "unterminated quote clause");
            st.quoted = parse_clause();
        }
        if (lex_.peek().type != Tok::Term) fail(lex_.peek(), "expected '.', '?' or '!'");
        st.term = lex_.take().text[0];
        bool wh = st.main.verb.wh || (st.quoted && st.quoted->verb.wh);
        if (wh && st.term != '?') fail(first, "wh-marked statement must end with '?'");
        if (!wh && st.term == '?') fail(first, "'?' terminator requires a wh marker");
        return st;
    }

    Clause parse_clause() {
        Clause c;
        c.subject = parse_part();
        if (lex_.peek().type != Tok::Slash) fail(lex_.peek(), "expected '/' after part");
        lex_.take();
        c.verb = parse_vphrase();
        if (lex_.peek().type == Tok::Slash) {
            lex_.take();
            c.object = parse_part();
        }
        return c;
    }

    PartRef parse_part() {
        PartRef p = parse_primary();
        while (lex_.peek().type == Tok::DashDash) {
            lex_.take();
            if (lex_.peek().type != Tok::Word) fail(lex_.peek(), "expected relation word after '--'");
            std::string rel = lex_.take().text;
            if (lex_.peek().type != Tok::DashDash) fail(lex_.peek(), "expected '--' after relation word");
            lex_.take();
            PartRef tail = parse_primary();
            PartRef chain;
            chain.form = PartRef::Form::Chain;
            chain.chain_head = std::make_shared<PartRef>(std::move(p));
            chain.chain_relation = std::move(rel);
            chain.chain_tail = std::make_shared<PartRef>(std::move(tail));
            p = std::move(chain);
        }
        return p;
    }

    PartRef parse_primary() {
        const Token& t = lex_.peek();
        PartRef p;
        if (t.type == Tok::String) {
            p.form = PartRef::Form::Proper;
            p.name = lex_.take().text;
            return p;
        }
        if (t.type != Tok::Word) fail(t, "expected part");
        if (t.text == "I") {
            lex_.take();
            p.form = PartRef::Form::PronounI;
            return p;
        }
        if (t.text == "text") {
            lex_.take();
            if (lex_.peek().type != Tok::String) fail(lex_.peek(), "expected string after 'text'");
            p.form = PartRef::Form::Text;
            p.text = lex_.take().text;
            return p;
        }
        bool definite = true;
        if (t.text == "the" || t.text == "The") {
            lex_.take();
        } else if (t.text == "a" || t.text == "an" || t.text == "A" || t.text == "An") {
            lex_.take();
            definite = false;
        }
        p.form = definite ? PartRef::Form::Definite : PartRef::Form::Indefinite;
        while (lex_.peek().type == Tok::Word) p.words.push_back(lex_.take().text);
        if (p.words.empty()) fail(lex_.peek(), "expected part words");
        return p;
    }

    VerbPhrase parse_vphrase() {
        VerbPhrase v;
        if (lex_.peek().type == Tok::Word && lex_.peek().text == "wh") {
            lex_.take();
            v.wh = true;
        }
        while (lex_.peek().type == Tok::Word) {
            if (lex_.peek().text == "in") {
                // scene designator?  in ["scene"] "<label>"
                Lexer probe = lex_;
                probe.take();  // in
                bool kw = probe.peek().type == Tok::Word && probe.peek().text == "scene";
                if (kw) probe.take();
                if (probe.peek().type == Tok::String) {
                    lex_.take();
                    if (kw) lex_.take();
                    v.scene_label = lex_.take().text;
                    break;
                }
            }
            v.words.push_back(lex_.take().text);
        }
        if (v.words.empty()) fail(lex_.peek(), "expected verb word");
        return v;
    }

    Lexer lex_;
};

}  // namespace

Program parse_program(const std::string& src) { return Parser(src).parse(); }

// -- Unparser -----------------------------------------------------------------

namespace {
void join_words(std::ostringstream& out, const std::vector<std::string>& ws) {
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i) out << ' ';
        out << ws[i];
    }
}
}  // namespace

std::string unparse(const PartRef& p) {
    std::ostringstream out;
    switch (p.form) {
        case PartRef::Form::Definite:
            out << "the ";
            join_words(out, p.words);
            break;
        case PartRef::Form::Indefinite:
            out << "a ";
            join_words(out, p.words);
            break;
        case PartRef::Form::Proper: out << '"' << p.name << '"'; break;
        case PartRef::Form::PronounI: out << 'I'; break;
        case PartRef::Form::Text: out << "text \"" << p.text << '"'; break;
        case PartRef::Form::Chain:
            out << unparse(*p.chain_head) << " -- " << p.chain_relation << " -- "
                << unparse(*p.chain_tail);
            break;
    }
    return out.str();
}

std::string unparse(const VerbPhrase& v) {
    std::ostringstream out;
    if (v.wh) out << "wh ";
    join_words(out, v.words);
    if (v.scene_label) out << " in scene \"" << *v.scene_label << '"';
    return out.str();
}

namespace {
std::string unparse_clause(const Clause& c) {
    std::string s = unparse(c.subject) + " / " + unparse(c.verb);
    if (c.object) s += " / " + unparse(*c.object);
    return s;
}
}  // namespace

std::string unparse(const Statement& s) {
    std::string out = unparse_clause(s.main);
    if (s.quoted) out += " // " + unparse_clause(*s.quoted);
    out += s.term;
    return out;
}

std::string unparse(const Directive& d) {
    std::string out = "$" + d.name;
    for (const auto& a : d.args) out += a.quoted ? (" \"" + a.value + "\"") : (" " + a.value);
    return out;
}

std::string unparse(const Item& item) {
    if (std::holds_alternative<Statement>(item)) return unparse(std::get<Statement>(item));
    return unparse(std::get<Directive>(item));
}

}  // namespace story::xapi
