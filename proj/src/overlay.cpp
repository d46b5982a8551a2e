#include "story/overlay.hpp"

#include <algorithm>
#include <cmath>

namespace story {

Overlay make_overlay(AtomKind kind, std::initializer_list<std::pair<AtomId, double>> ws) {
    Overlay o;
    o.kind = kind;
    for (const auto& [a, w] : ws) o.set(a, w);
    return o;
}

Overlay overlay_merge(const Overlay& a, const Overlay& b) {
    if (!a.empty() && !b.empty() && a.kind != b.kind)
        throw Error("overlay_merge: mixed overlay kinds");
    Overlay out;
    out.kind = a.empty() ? b.kind : a.kind;
    out.weights = a.weights;
    for (const auto& [atom, w] : b.weights) {
        auto it = out.weights.find(atom);
        if (it == out.weights.end())
            out.weights[atom] = w;
        else
            it->second = std::min(1.0, it->second + w);
    }
    return out;
}

namespace {
// sum_{x,y} a(x) b(y) overlap(x,y)
double overlap_dot(const Vocabulary& vocab, const Overlay& a, const Overlay& b) {
    double s = 0.0;
    for (const auto& [x, wx] : a.weights)
        for (const auto& [y, wy] : b.weights) s += wx * wy * vocab.overlap(x, y);
    return s;
}
}  // namespace

double overlay_similarity(const Vocabulary& vocab, const Overlay& a, const Overlay& b) {
    if (a.empty() || b.empty()) return 0.0;
    if (a.kind != b.kind) throw Error("overlay_similarity: mixed overlay kinds");
    double na = overlap_dot(vocab, a, a);
    double nb = overlap_dot(vocab, b, b);
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    double s = overlap_dot(vocab, a, b) / std::sqrt(na * nb);
    return std::clamp(s, 0.0, 1.0);
}

double coverage_match(const Vocabulary& vocab, const Overlay& have, const Overlay& query) {
    if (query.empty() || have.empty()) return 0.0;
    double score = 1.0;
    for (const auto& [x, wx] : query.weights) {
        (void)wx;
        double cover = 0.0;
        for (const auto& [y, wy] : have.weights) cover += wy * vocab.overlap(y, x);
        score = std::min(score, cover);
        if (score <= 0.0) return 0.0;
    }
    return std::clamp(score, 0.0, 1.0);
}

std::optional<AtomId> dominant_atom(const Overlay& o) {
    std::optional<AtomId> best;
    double bw = 0.0;
    for (const auto& [a, w] : o.weights)
        if (w > bw) {
            bw = w;
            best = a;
        }
    return best;
}

}  // namespace story
