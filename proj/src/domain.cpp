#include "story/domain.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace story {

const Overlay& DomainLibrary::lookup_word(const std::string& word) const {
    auto it = dictionary.find(word);
    if (it == dictionary.end()) throw Error("unknown word: " + word);
    return it->second;
}

const std::vector<Impact>& DomainLibrary::impacts_of(AtomId verb) const {
    static const std::vector<Impact> kEmpty;
    auto it = impacts.find(verb);
    return it == impacts.end() ? kEmpty : it->second;
}

std::optional<Metaverb> DomainLibrary::metaverb_of(AtomId verb) const {
    auto it = metaverbs.find(verb);
    if (it == metaverbs.end()) return std::nullopt;
    return it->second;
}

std::string DomainLibrary::word_for(AtomId atom) const {
    for (const auto& [word, overlay] : dictionary)
        if (overlay.weights.size() == 1 && overlay.weights.begin()->first == atom &&
            overlay.weights.begin()->second == 1.0)
            return word;
    return vocab.info(atom).name;
}

namespace {

struct Token {
    std::string text;
    bool quoted = false;
    int line = 0;
};

// Tokens up to '.', which closes a clause. '#' comments run to end of line.
class DomainScanner {
public:
    explicit DomainScanner(const std::string& src) : src_(src) {}

    // One clause (tokens before '.'); empty result = end of input.
    std::vector<Token> next_clause() {
        std::vector<Token> toks;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) {
                if (!toks.empty()) throw DomainError(toks.front().line, "missing '.'");
                return toks;
            }
            char c = src_[pos_];
            if (c == '.') {
                ++pos_;
                if (toks.empty()) throw DomainError(line_, "empty clause");
                return toks;
            }
            if (c == '"') {
                toks.push_back(read_string());
            } else {
                toks.push_back(read_word());
            }
        }
    }

private:
    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    Token read_string() {
        int start = line_;
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < src_.size() && src_[pos_] != '"') {
            if (src_[pos_] == '\n') throw DomainError(start, "unterminated string");
            out.push_back(src_[pos_++]);
        }
        if (pos_ >= src_.size()) throw DomainError(start, "unterminated string");
        ++pos_;  // closing quote
        return {out, true, start};
    }

    Token read_word() {
        int start = line_;
        std::string out;
        bool numeric = pos_ < src_.size() &&
                       (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                        src_[pos_] == '-' || src_[pos_] == '+');
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '#') break;
            if (c == '.') {
                // a decimal point, not the clause terminator
                bool digit_next = pos_ + 1 < src_.size() &&
                                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]));
                if (!(numeric && digit_next)) break;
            }
            out.push_back(c);
            ++pos_;
        }
        return {out, false, start};
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

const std::map<std::string, Metaverb>& metaverb_names() {
    static const std::map<std::string, Metaverb> kNames = {
        {"is-a", Metaverb::IsA},
        {"says", Metaverb::Says},
        {"asks", Metaverb::Asks},
        {"utters", Metaverb::Utters},
        {"changes-into", Metaverb::ChangesInto},
        {"action-is", Metaverb::ActionIs},
        {"creates-scene", Metaverb::CreatesScene},
        {"scene-succession", Metaverb::SceneSuccession},
    };
    return kNames;
}

std::optional<ImpactEffect> effect_from_name(const std::string& name) {
    if (name == "consume-object") return ImpactEffect::ConsumeObject;
    if (name == "consume-subject") return ImpactEffect::ConsumeSubject;
    if (name == "push-out-boost") return ImpactEffect::PushOutBoost;
    return std::nullopt;
}

std::string effect_name(ImpactEffect e) {
    switch (e) {
        case ImpactEffect::ConsumeObject: return "consume-object";
        case ImpactEffect::ConsumeSubject: return "consume-subject";
        case ImpactEffect::PushOutBoost: return "push-out-boost";
    }
    return "?";
}

double parse_weight(const Token& t) {
    try {
        std::size_t used = 0;
        double w = std::stod(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing");
        return w;
    } catch (const std::exception&) {
        throw DomainError(t.line, "bad weight '" + t.text + "'");
    }
}

}  // namespace

DomainLibrary load_domain(const std::string& source) {
    DomainLibrary lib;
    DomainScanner scanner(source);

    auto atom_of = [&](const Token& t) -> AtomId {
        auto id = lib.vocab.find(t.text);
        if (!id) throw DomainError(t.line, "unknown atom '" + t.text + "'");
        return *id;
    };

    while (true) {
        auto toks = scanner.next_clause();
        if (toks.empty()) break;
        const auto& head = toks[0];
        auto need = [&](std::size_t n) {
            if (toks.size() != n)
                throw DomainError(head.line, "malformed '" + head.text + "' clause");
        };

        if (head.text == "concept") {
            need(2);
            try {
                lib.vocab.add_atom(toks[1].text, AtomKind::Concept);
            } catch (const DomainError& e) {
                throw DomainError(head.line, e.what());
            }
        } else if (head.text == "verb" && toks.size() == 2) {
            try {
                lib.vocab.add_atom(toks[1].text, AtomKind::Verb);
            } catch (const DomainError& e) {
                throw DomainError(head.line, e.what());
            }
        } else if (head.text == "verb" && toks.size() == 5 && toks[2].text == "impact") {
            AtomId v = atom_of(toks[1]);
            if (lib.vocab.kind(v) != AtomKind::Verb)
                throw DomainError(head.line, "impact on a non-verb atom");
            auto effect = effect_from_name(toks[3].text);
            if (!effect) throw DomainError(toks[3].line, "unknown impact effect '" + toks[3].text + "'");
            double w = parse_weight(toks[4]);
            if (w < 0.0 || w > 1.0) throw DomainError(toks[4].line, "impact magnitude outside [0,1]");
            lib.impacts[v].push_back({*effect, w});
        } else if (head.text == "overlap") {
            need(4);
            AtomId a = atom_of(toks[1]);
            AtomId b = atom_of(toks[2]);
            double w = parse_weight(toks[3]);
            try {
                lib.vocab.set_overlap(a, b, w);
            } catch (const DomainError& e) {
                throw DomainError(head.line, e.what());
            }
        } else if (head.text == "word") {
            // word "<text>" -> id[+id...]
            need(4);
            if (!toks[1].quoted) throw DomainError(toks[1].line, "word text must be quoted");
            if (toks[2].text != "->") throw DomainError(toks[2].line, "expected '->'");
            if (lib.dictionary.count(toks[1].text))
                throw DomainError(head.line, "duplicate word '" + toks[1].text + "'");
            Overlay overlay;
            std::stringstream ss(toks[3].text);
            std::string part;
            bool first = true;
            while (std::getline(ss, part, '+')) {
                if (part.empty()) throw DomainError(toks[3].line, "empty atom in word mapping");
                AtomId a = atom_of({part, false, toks[3].line});
                if (first) {
                    overlay.kind = lib.vocab.kind(a);
                    first = false;
                } else if (lib.vocab.kind(a) != overlay.kind) {
                    throw DomainError(toks[3].line, "word mixes concept and verb atoms");
                }
                overlay.set(a, 1.0);
            }
            if (overlay.empty()) throw DomainError(toks[3].line, "empty word mapping");
            lib.dictionary.emplace(toks[1].text, std::move(overlay));
        } else if (head.text == "metaverb") {
            need(2);
            AtomId v = atom_of(toks[1]);
            if (lib.vocab.kind(v) != AtomKind::Verb)
                throw DomainError(head.line, "metaverb must be a verb atom");
            auto it = metaverb_names().find(toks[1].text);
            if (it == metaverb_names().end())
                throw DomainError(head.line, "unknown metaverb '" + toks[1].text + "'");
            if (lib.metaverbs.count(v))
                throw DomainError(head.line, "duplicate metaverb declaration");
            lib.metaverbs.emplace(v, it->second);
        } else {
            throw DomainError(head.line, "unknown clause '" + head.text + "'");
        }
    }
    return lib;
}

std::string serialize_domain(const DomainLibrary& lib) {
    std::ostringstream out;
    out.precision(17);
    const auto& vocab = lib.vocab;
    for (std::uint32_t i = 0; i < vocab.size(); ++i) {
        AtomId a{i};
        out << (vocab.kind(a) == AtomKind::Concept ? "concept " : "verb ")
            << vocab.info(a).name << ".\n";
    }
    for (std::uint32_t i = 0; i < vocab.size(); ++i) {
        AtomId a{i};
        for (const auto& [b, w] : vocab.neighbors(a))
            if (b > a) out << "overlap " << vocab.info(a).name << " " << vocab.info(b).name
                           << " " << w << ".\n";
    }
    for (const auto& [v, list] : lib.impacts)
        for (const auto& imp : list)
            out << "verb " << vocab.info(v).name << " impact " << effect_name(imp.effect)
                << " " << imp.magnitude << ".\n";
    for (const auto& [v, mv] : lib.metaverbs) {
        (void)mv;
        out << "metaverb " << vocab.info(v).name << ".\n";
    }
    for (const auto& [word, overlay] : lib.dictionary) {
        out << "word \"" << word << "\" -> ";
        bool first = true;
        for (const auto& [a, w] : overlay.weights) {
            (void)w;
            if (!first) out << "+";
            out << vocab.info(a).name;
            first = false;
        }
        out << ".\n";
    }
    return out.str();
}

}  // namespace story
