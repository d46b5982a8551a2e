#include "story/vocabulary.hpp"

#include <algorithm>

namespace story {

namespace {
// Dynamic atoms live in the same table as library atoms; the name index
// namespaces them so a proper name can never collide with a word atom.
std::string key_plain(const std::string& name) { return "a:" + name; }
std::string key_proper(const std::string& name) { return "p:" + name; }
std::string key_text(const std::string& text) { return "t:" + text; }
}  // namespace

AtomId Vocabulary::add_atom(const std::string& name, AtomKind kind) {
    auto key = key_plain(name);
    if (by_name_.count(key)) throw DomainError(0, "duplicate atom '" + name + "'");
    AtomId id{static_cast<std::uint32_t>(atoms_.size())};
    atoms_.push_back({name, kind, false, false});
    by_name_.emplace(key, id.v);
    adj_.push_back({{id, 1.0}});
    return id;
}

AtomId Vocabulary::add_proper_atom(const std::string& name) {
    auto key = key_proper(name);
    if (auto it = by_name_.find(key); it != by_name_.end()) return AtomId{it->second};
    AtomId id{static_cast<std::uint32_t>(atoms_.size())};
    atoms_.push_back({name, AtomKind::Concept, true, false});
    by_name_.emplace(key, id.v);
    adj_.push_back({{id, 1.0}});
    return id;
}

AtomId Vocabulary::add_text_atom(const std::string& text) {
    auto key = key_text(text);
    if (auto it = by_name_.find(key); it != by_name_.end()) return AtomId{it->second};
    AtomId id{static_cast<std::uint32_t>(atoms_.size())};
    atoms_.push_back({text, AtomKind::Concept, false, true});
    by_name_.emplace(key, id.v);
    adj_.push_back({{id, 1.0}});
    return id;
}

void Vocabulary::set_overlap(AtomId a, AtomId b, double w) {
    if (a == b) throw DomainError(0, "overlap of an atom with itself is fixed at 1");
    const auto& ia = info(a);
    const auto& ib = info(b);
    if (ia.kind != ib.kind)
        throw DomainError(0, "overlap between different atom kinds ('" + ia.name +
                                 "', '" + ib.name + "')");
    if (ia.proper || ib.proper || ia.text || ib.text)
        throw DomainError(0, "overlap involving a dynamic atom");
    if (w < 0.0 || w > 1.0) throw DomainError(0, "overlap weight outside [0,1]");
    auto key = pair_key(a, b);
    if (overlap_.count(key)) throw DomainError(0, "duplicate overlap declaration");
    overlap_.emplace(key, w);
    if (w > 0.0) {
        adj_[a.v].push_back({b, w});
        adj_[b.v].push_back({a, w});
        std::sort(adj_[a.v].begin(), adj_[a.v].end());
        std::sort(adj_[b.v].begin(), adj_[b.v].end());
    }
}

std::optional<AtomId> Vocabulary::find(const std::string& name) const {
    if (auto it = by_name_.find(key_plain(name)); it != by_name_.end())
        return AtomId{it->second};
    return std::nullopt;
}

std::optional<AtomId> Vocabulary::find_proper(const std::string& name) const {
    if (auto it = by_name_.find(key_proper(name)); it != by_name_.end())
        return AtomId{it->second};
    return std::nullopt;
}

double Vocabulary::overlap(AtomId a, AtomId b) const {
    if (a == b) return 1.0;
    auto it = overlap_.find(pair_key(a, b));
    return it == overlap_.end() ? 0.0 : it->second;
}

const std::vector<std::pair<AtomId, double>>& Vocabulary::neighbors(AtomId a) const {
    return adj_.at(a.v);
}

std::uint64_t Vocabulary::pair_key(AtomId a, AtomId b) {
    auto lo = std::min(a.v, b.v);
    auto hi = std::max(a.v, b.v);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace story
