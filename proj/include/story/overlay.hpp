#pragma once

#include <map>

#include "story/vocabulary.hpp"

namespace story {

// Weighted set of same-kind atoms, the sole attribute representation.
// Weights live in (0,1]; zero-weight entries are never stored.
struct Overlay {
    AtomKind kind = AtomKind::Concept;
    std::map<AtomId, double> weights;

    bool empty() const { return weights.empty(); }
    double weight(AtomId a) const {
        auto it = weights.find(a);
        return it == weights.end() ? 0.0 : it->second;
    }
    void set(AtomId a, double w) {
        if (w > 0.0) weights[a] = std::min(1.0, w);
    }

    friend bool operator==(const Overlay&, const Overlay&) = default;
};

Overlay make_overlay(AtomKind kind, std::initializer_list<std::pair<AtomId, double>> ws);

// Pointwise a+b capped at 1. Throws Error on kind mismatch.
Overlay overlay_merge(const Overlay& a, const Overlay& b);

// Overlap-weighted cosine in [0,1]; 0 if either side is empty.
double overlay_similarity(const Vocabulary& vocab, const Overlay& a, const Overlay& b);

// min over query atoms x of sum_y have(y)*overlap(y,x), clamped to [0,1].
// A candidate covering only a strict subset of the query atoms scores 0.
double coverage_match(const Vocabulary& vocab, const Overlay& have, const Overlay& query);

// Atom with the largest weight (ties: lowest id); null if empty.
std::optional<AtomId> dominant_atom(const Overlay& o);

}  // namespace story
