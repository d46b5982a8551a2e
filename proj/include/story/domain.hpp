#pragma once

#include <map>
#include <string>

#include "story/overlay.hpp"

namespace story {

enum class ImpactEffect { ConsumeObject, ConsumeSubject, PushOutBoost };

struct Impact {
    ImpactEffect effect = ImpactEffect::ConsumeObject;
    double magnitude = 0.0;  // in [0,1]
};

// Verb atoms with engine side effects.
enum class Metaverb {
    IsA,           // attribute assignment
    Says,          // quote
    Asks,          // quote, question flavor
    Utters,        // text-literal object
    ChangesInto,   // create identity-linked new instance
    ActionIs,      // adverb VI
    CreatesScene,  // new scene named by the object
    SceneSuccession,
};

// Concept/verb database plus the word dictionary. Immutable after load.
class DomainLibrary {
public:
    Vocabulary vocab;
    // word -> same-kind overlay over declared atoms
    std::map<std::string, Overlay> dictionary;
    std::map<AtomId, Metaverb> metaverbs;
    std::map<AtomId, std::vector<Impact>> impacts;

    // Exact-match lookup; throws Error("unknown word: ...") on miss.
    const Overlay& lookup_word(const std::string& word) const;
    bool has_word(const std::string& word) const { return dictionary.count(word) != 0; }

    const std::vector<Impact>& impacts_of(AtomId verb) const;
    std::optional<Metaverb> metaverb_of(AtomId verb) const;

    // First dictionary word whose overlay is the single atom at weight 1;
    // falls back to the atom name. Used when rendering templates.
    std::string word_for(AtomId atom) const;
};

// Parses the line-oriented domain format ('#' comments, '.' terminated):
//   concept <id>.  verb <id>.  overlap <a> <b> <w>.
//   word "<text>" -> <id>[+<id>...].  metaverb <id>.
//   verb <id> impact <effect> <w>.
// Unknown atoms, duplicate declarations and malformed clauses raise
// DomainError with the offending line number.
DomainLibrary load_domain(const std::string& source);

// Canonical text form; load_domain(serialize_domain(lib)) reproduces lib.
std::string serialize_domain(const DomainLibrary& lib);

}  // namespace story
