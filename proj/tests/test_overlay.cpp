#include <random>

#include "doctest.h"
#include "story/overlay.hpp"

using namespace story;

namespace {

struct SmallWorld {
    Vocabulary vocab;
    AtomId wolf, dog, hood, big, girl, eats, sees;

    SmallWorld() {
        wolf = vocab.add_atom("wolf", AtomKind::Concept);
        dog = vocab.add_atom("dog", AtomKind::Concept);
        hood = vocab.add_atom("hood", AtomKind::Concept);
        big = vocab.add_atom("big", AtomKind::Concept);
        girl = vocab.add_atom("girl", AtomKind::Concept);
        eats = vocab.add_atom("eats", AtomKind::Verb);
        sees = vocab.add_atom("sees", AtomKind::Verb);
        vocab.set_overlap(wolf, dog, 0.5);
    }
};

// brute-force reference for the overlap-weighted cosine
double brute_similarity(const Vocabulary& vocab, const Overlay& a, const Overlay& b) {
    auto dot = [&](const Overlay& x, const Overlay& y) {
        double s = 0.0;
        for (const auto& [ax, wx] : x.weights)
            for (const auto& [ay, wy] : y.weights) s += wx * wy * vocab.overlap(ax, ay);
        return s;
    };
    if (a.empty() || b.empty()) return 0.0;
    double den = std::sqrt(dot(a, a)) * std::sqrt(dot(b, b));
    return den == 0.0 ? 0.0 : dot(a, b) / den;
}

// brute-force reference for the min-coverage rule
double brute_coverage(const Vocabulary& vocab, const Overlay& have, const Overlay& query) {
    if (query.empty() || have.empty()) return 0.0;
    double best = 1.0;
    for (const auto& [x, wx] : query.weights) {
        (void)wx;
        double cover = 0.0;
        for (const auto& [y, wy] : have.weights) cover += wy * vocab.overlap(y, x);
        best = std::min(best, cover);
    }
    return std::clamp(best, 0.0, 1.0);
}

Overlay random_overlay(const Vocabulary& vocab, std::mt19937& rng, AtomKind kind,
                       std::uint32_t lo, std::uint32_t hi) {
    Overlay o;
    o.kind = kind;
    std::uniform_int_distribution<std::uint32_t> atom(lo, hi);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) o.set(AtomId{atom(rng)}, weight(rng));
    (void)vocab;
    return o;
}

}  // namespace

TEST_CASE("overlay_merge basics") {
    SmallWorld w;
    Overlay empty;
    empty.kind = AtomKind::Concept;
    Overlay wolf1 = make_overlay(AtomKind::Concept, {{w.wolf, 1.0}});

    SUBCASE("identity case") {
        Overlay out = overlay_merge(empty, wolf1);
        CHECK(out.weights.size() == 1);
        CHECK(out.weight(w.wolf) == 1.0);
    }
    SUBCASE("cap at 1") {
        Overlay a = make_overlay(AtomKind::Concept, {{w.wolf, 0.6}});
        Overlay out = overlay_merge(a, a);
        CHECK(out.weight(w.wolf) == 1.0);
    }
    SUBCASE("disjoint union") {
        Overlay a = make_overlay(AtomKind::Concept, {{w.wolf, 0.5}});
        Overlay b = make_overlay(AtomKind::Concept, {{w.big, 0.4}});
        Overlay out = overlay_merge(a, b);
        CHECK(out.weight(w.wolf) == doctest::Approx(0.5));
        CHECK(out.weight(w.big) == doctest::Approx(0.4));
        CHECK(out.weights.size() == 2);
    }
    SUBCASE("kind mismatch is an error") {
        Overlay verb = make_overlay(AtomKind::Verb, {{w.eats, 1.0}});
        CHECK_THROWS_AS(overlay_merge(wolf1, verb), Error);
    }
}

TEST_CASE("overlay_similarity frozen examples") {
    SmallWorld w;
    Overlay eats1 = make_overlay(AtomKind::Verb, {{w.eats, 1.0}});
    CHECK(overlay_similarity(w.vocab, eats1, eats1) == doctest::Approx(1.0));

    Overlay wolf1 = make_overlay(AtomKind::Concept, {{w.wolf, 1.0}});
    Overlay hood1 = make_overlay(AtomKind::Concept, {{w.hood, 1.0}});
    CHECK(overlay_similarity(w.vocab, wolf1, hood1) == doctest::Approx(0.0));

    // wolf vs dog with overlap 0.5: hand evaluation gives 0.5; cross-checked
    // against the brute-force summation below
    Overlay dog1 = make_overlay(AtomKind::Concept, {{w.dog, 1.0}});
    CHECK(overlay_similarity(w.vocab, wolf1, dog1) == doctest::Approx(0.5));
    CHECK(brute_similarity(w.vocab, wolf1, dog1) == doctest::Approx(0.5));

    Overlay empty;
    empty.kind = AtomKind::Concept;
    CHECK(overlay_similarity(w.vocab, empty, wolf1) == 0.0);
}

TEST_CASE("overlay_similarity properties: symmetry, self-similarity, bounds") {
    SmallWorld w;
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        Overlay a = random_overlay(w.vocab, rng, AtomKind::Concept, 0, 4);
        Overlay b = random_overlay(w.vocab, rng, AtomKind::Concept, 0, 4);
        double ab = overlay_similarity(w.vocab, a, b);
        double ba = overlay_similarity(w.vocab, b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(overlay_similarity(w.vocab, a, a) == doctest::Approx(1.0));
        CHECK(overlay_similarity(w.vocab, a, b) ==
              doctest::Approx(brute_similarity(w.vocab, a, b)).epsilon(1e-12));
    }
}

TEST_CASE("coverage_match frozen examples") {
    SmallWorld w;
    Overlay superset = make_overlay(AtomKind::Concept, {{w.wolf, 1.0}, {w.big, 1.0}});
    Overlay query_wolf = make_overlay(AtomKind::Concept, {{w.wolf, 1.0}});
    CHECK(coverage_match(w.vocab, superset, query_wolf) == doctest::Approx(1.0));

    Overlay just_girl = make_overlay(AtomKind::Concept, {{w.girl, 1.0}});
    CHECK(coverage_match(w.vocab, just_girl, query_wolf) == 0.0);

    // dog vs wolf with overlap 0.5: brute-force evaluation of the stated rule
    Overlay just_dog = make_overlay(AtomKind::Concept, {{w.dog, 1.0}});
    CHECK(coverage_match(w.vocab, just_dog, query_wolf) == doctest::Approx(0.5));
    CHECK(brute_coverage(w.vocab, just_dog, query_wolf) == doctest::Approx(0.5));

    // a strict subset of the query atoms scores 0
    Overlay query_both = make_overlay(AtomKind::Concept, {{w.wolf, 1.0}, {w.big, 1.0}});
    Overlay only_wolf = make_overlay(AtomKind::Concept, {{w.wolf, 1.0}});
    CHECK(coverage_match(w.vocab, only_wolf, query_both) == 0.0);
}

TEST_CASE("coverage_match agrees with brute force on random overlays") {
    SmallWorld w;
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        Overlay have = random_overlay(w.vocab, rng, AtomKind::Concept, 0, 4);
        Overlay query = random_overlay(w.vocab, rng, AtomKind::Concept, 0, 4);
        CHECK(coverage_match(w.vocab, have, query) ==
              doctest::Approx(brute_coverage(w.vocab, have, query)).epsilon(1e-12));
    }
}

TEST_CASE("vocabulary invariants") {
    SmallWorld w;
    CHECK(w.vocab.overlap(w.wolf, w.wolf) == 1.0);
    CHECK(w.vocab.overlap(w.wolf, w.dog) == 0.5);
    CHECK(w.vocab.overlap(w.dog, w.wolf) == 0.5);
    CHECK_THROWS_AS(w.vocab.set_overlap(w.wolf, w.eats, 0.3), DomainError);  // cross-kind
    CHECK_THROWS_AS(w.vocab.set_overlap(w.wolf, w.wolf, 0.3), DomainError);

    AtomId p = w.vocab.add_proper_atom("LRRH");
    AtomId p2 = w.vocab.add_proper_atom("LRRH");
    CHECK(p == p2);
    CHECK(w.vocab.overlap(p, w.girl) == 0.0);
    CHECK(w.vocab.overlap(p, p) == 1.0);
}
