#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "story/error.hpp"
#include "story/ids.hpp"

namespace story {

enum class AtomKind { Concept, Verb };

struct AtomInfo {
    std::string name;
    AtomKind kind = AtomKind::Concept;
    bool proper = false;  // quoted proper name ("LRRH")
    bool text = false;    // quoted text literal carrier
};

// Atom table plus the symmetric overlap relation. Library atoms are loaded
// from the domain file and never change; proper-name and text atoms are
// appended at run time and overlap only with themselves.
class Vocabulary {
public:
    AtomId add_atom(const std::string& name, AtomKind kind);
    AtomId add_proper_atom(const std::string& name);
    AtomId add_text_atom(const std::string& text);

    // Declared overlap between distinct library atoms of the same kind.
    void set_overlap(AtomId a, AtomId b, double w);

    std::optional<AtomId> find(const std::string& name) const;
    std::optional<AtomId> find_proper(const std::string& name) const;

    const AtomInfo& info(AtomId a) const { return atoms_.at(a.v); }
    AtomKind kind(AtomId a) const { return info(a).kind; }
    std::size_t size() const { return atoms_.size(); }

    // overlap(a,a) = 1; dynamic atoms overlap nothing else.
    double overlap(AtomId a, AtomId b) const;

    // Neighbors with nonzero overlap, self included, sorted by atom id.
    const std::vector<std::pair<AtomId, double>>& neighbors(AtomId a) const;

private:
    static std::uint64_t pair_key(AtomId a, AtomId b);

    std::vector<AtomInfo> atoms_;
    std::unordered_map<std::string, std::uint32_t> by_name_;  // namespaced keys
    std::unordered_map<std::uint64_t, double> overlap_;
    std::vector<std::vector<std::pair<AtomId, double>>> adj_;
};

}  // namespace story
