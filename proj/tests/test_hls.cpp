#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace story;
using testutil::Fixture;

namespace {

// The configuration of the SVR figure: an in-focus S-V-O VI whose shadow
// holds a root VI, the root's parts shadowing the focus parts, and a source
// VI connected to the root by succession. Two extra focus instances E1/E2
// carry the source object in their shadows for the interpretation example.
struct HlsFixture : Fixture {
    InstanceId f1, f2, e1, e2;
    ViId focus_vi;
    InstanceId root_subj, root_obj, src_obj;
    ViId vi_root, vi_source;
    MemoryStore memory;
    ShadowField field;

    HlsFixture() {
        f1 = instance({{"wolf", 1.0}});
        f2 = instance({{"girl", 1.0}});
        e1 = instance({{"lion", 1.0}});
        e2 = instance({{"deer", 1.0}});
        focus_vi = svo(f1, "sees", f2);
        insert(focus_vi);

        SceneId old_scene = world.create_scene("Past");
        auto mk_inst = [&](const char* name) {
            Overlay attrs = make_overlay(AtomKind::Concept, {{atom(name), 1.0}});
            InstanceId id = world.create_instance(old_scene, attrs, 0.0);
            memory.record_instance({id, old_scene, attrs, 0.7, 0.0});
            return id;
        };
        root_subj = mk_inst("lion");
        root_obj = mk_inst("deer");
        src_obj = mk_inst("basket");

        auto mk_vi = [&](InstanceId s, const char* verb, InstanceId o) {
            VerbInstance vi;
            vi.kind = ViKind::Svo;
            vi.verb = make_overlay(AtomKind::Verb, {{atom(verb), 1.0}});
            vi.subject = s;
            vi.object = o;
            ViId id = world.create_vi(vi);
            MemVi m;
            m.id = id;
            m.kind = ViKind::Svo;
            m.verb = vi.verb;
            m.subject = s;
            m.object = o;
            m.scene = old_scene;
            m.salience = 1.0;
            memory.record_vi(m, {}, 5);
            return id;
        };
        // recorded in story order: root then source => source's PREDECESSOR
        // list holds root, and root's SUCCESSOR list holds source at 1/1
        vi_root = mk_vi(root_subj, "sees", root_obj);
        vi_source = mk_vi(root_obj, "takes", src_obj);

        field.init_instance_shadow(f1, 1.0);
        field.init_instance_shadow(f2, 1.0);
        field.init_instance_shadow(e1, 1.0);
        field.init_instance_shadow(e2, 1.0);
        field.init_vi_shadow(focus_vi, 1.0);
        field.instance_shadow(f1).body[root_subj.v] = 0.7;
        field.instance_shadow(f2).body[root_obj.v] = 0.7;
        field.instance_shadow(e1).body[src_obj.v] = 0.6;
        field.instance_shadow(e2).body[src_obj.v] = 0.3;
        field.vi_shadow(focus_vi).body[vi_root.v] = 0.5;
    }
};

const Svr* find_svr(const std::vector<Svr>& svrs, SvrType type, ViId source) {
    for (const Svr& s : svrs)
        if (s.type == type && s.source == source) return &s;
    return nullptr;
}

}  // namespace

TEST_CASE("compute_svrs: empty shadows yield no SVRs") {
    Fixture f;
    MemoryStore memory;
    ShadowField field;
    CHECK(compute_svrs(f.focus, field, memory, f.params).empty());
}

TEST_CASE("compute_svrs: in-shadow root plus one successor neighbor") {
    HlsFixture f;
    auto svrs = compute_svrs(f.focus, f.field, f.memory, f.params);

    const Svr* in_shadow = find_svr(svrs, SvrType::InShadow, f.vi_root);
    REQUIRE(in_shadow != nullptr);
    CHECK(in_shadow->focus_vi == f.focus_vi);
    CHECK(in_shadow->root == f.vi_root);
    CHECK(in_shadow->strength == doctest::Approx(0.5));

    const Svr* succ = find_svr(svrs, SvrType::Successor, f.vi_source);
    REQUIRE(succ != nullptr);
    CHECK(succ->root == f.vi_root);
    CHECK(succ->strength == doctest::Approx(0.5));  // 0.5 participation x 1.0 link
}

TEST_CASE("compute_svrs honors the participation threshold") {
    HlsFixture f;
    f.field.vi_shadow(f.focus_vi).body[f.vi_root.v] = 0.01;  // below theta_svr = 0.02
    CHECK(compute_svrs(f.focus, f.field, f.memory, f.params).empty());
}

TEST_CASE("interpret_svr reproduces the three-prediction example") {
    HlsFixture f;
    auto svrs = compute_svrs(f.focus, f.field, f.memory, f.params);
    const Svr* succ = find_svr(svrs, SvrType::Successor, f.vi_source);
    REQUIRE(succ != nullptr);

    auto svris = interpret_svr(*succ, f.world, f.memory, f.field, f.focus, f.params);
    REQUIRE(svris.size() == 3);

    // subject aligned: source subject == root object => bound to F2, weight 1
    for (const Svri& s : svris) {
        CHECK(s.tmpl.kind == ViKind::Svo);
        CHECK(s.tmpl.subject.kind == TemplatePart::Kind::Bound);
        CHECK(s.tmpl.subject.bound == f.f2);
        CHECK(s.tmpl.verb.weight(f.atom("takes")) == 1.0);  // verb copied from source
    }

    // object by reverse shadowing: E1 0.6, E2 0.3, NEW 0.1 (already normalized)
    CHECK(svris[0].tmpl.object.bound == f.e1);
    CHECK(svris[0].weight == doctest::Approx(0.5 * 0.6));
    CHECK(svris[1].tmpl.object.bound == f.e2);
    CHECK(svris[1].weight == doctest::Approx(0.5 * 0.3));
    CHECK(svris[2].tmpl.object.kind == TemplatePart::Kind::New);
    CHECK(svris[2].weight == doctest::Approx(0.5 * 0.1));
    // the new instance carries the source object's attributes
    CHECK(svris[2].tmpl.object.attributes.weight(f.atom("basket")) == 1.0);
}

TEST_CASE("interpret_svr: source part in no shadow yields only the NEW binding") {
    HlsFixture f;
    f.field.instance_shadow(f.e1).body.erase(f.src_obj.v);
    f.field.instance_shadow(f.e2).body.erase(f.src_obj.v);
    auto svrs = compute_svrs(f.focus, f.field, f.memory, f.params);
    const Svr* succ = find_svr(svrs, SvrType::Successor, f.vi_source);
    auto svris = interpret_svr(*succ, f.world, f.memory, f.field, f.focus, f.params);
    REQUIRE(svris.size() == 1);
    CHECK(svris[0].tmpl.object.kind == TemplatePart::Kind::New);
    CHECK(svris[0].weight == doctest::Approx(0.5));  // NEW normalizes to 1 alone
}

TEST_CASE("SVRI weights stay in (0,1]") {
    HlsFixture f;
    for (const Svr& svr : compute_svrs(f.focus, f.field, f.memory, f.params))
        for (const Svri& s : interpret_svr(svr, f.world, f.memory, f.field, f.focus, f.params)) {
            CHECK(s.weight > 0.0);
            CHECK(s.weight <= 1.0);
        }
}

namespace {

Svri make_svri(const Fixture& f, SvrType type, double weight, InstanceId subject,
               InstanceId object, const char* verb, const Vocabulary& vocab) {
    (void)vocab;
    Svri s;
    s.svr.type = type;
    s.weight = weight;
    s.tmpl.kind = ViKind::Svo;
    s.tmpl.verb = make_overlay(AtomKind::Verb, {{*f.world.vocab().find(verb), 1.0}});
    s.tmpl.subject.kind = TemplatePart::Kind::Bound;
    s.tmpl.subject.bound = subject;
    s.tmpl.object.kind = TemplatePart::Kind::Bound;
    s.tmpl.object.bound = object;
    return s;
}

}  // namespace

TEST_CASE("clustering: identical bindings and verbs join one HLS") {
    Fixture f;
    InstanceId a = f.instance({{"wolf", 1.0}});
    InstanceId b = f.instance({{"girl", 1.0}});
    std::vector<Svri> svris{make_svri(f, SvrType::Successor, 0.4, a, b, "eats", f.world.vocab()),
                            make_svri(f, SvrType::Successor, 0.3, a, b, "eats", f.world.vocab())};
    auto pool = cluster_into_hls(svris, f.world.vocab(), f.params);
    REQUIRE(pool.size() == 1);
    CHECK(pool[0].members.size() == 2);
}

TEST_CASE("clustering: different object bindings split HLSs") {
    Fixture f;
    InstanceId a = f.instance({{"wolf", 1.0}});
    InstanceId b = f.instance({{"girl", 1.0}});
    InstanceId c = f.instance({{"deer", 1.0}});
    std::vector<Svri> svris{make_svri(f, SvrType::Successor, 0.4, a, b, "eats", f.world.vocab()),
                            make_svri(f, SvrType::Successor, 0.3, a, c, "eats", f.world.vocab())};
    auto pool = cluster_into_hls(svris, f.world.vocab(), f.params);
    CHECK(pool.size() == 2);
}

TEST_CASE("clustering: verb similarity below theta_verb splits HLSs") {
    Fixture f;
    InstanceId a = f.instance({{"wolf", 1.0}});
    InstanceId b = f.instance({{"girl", 1.0}});
    // eats vs sees have zero declared overlap -> similarity 0 < 0.8
    std::vector<Svri> svris{make_svri(f, SvrType::Successor, 0.4, a, b, "eats", f.world.vocab()),
                            make_svri(f, SvrType::Successor, 0.3, a, b, "sees", f.world.vocab())};
    auto pool = cluster_into_hls(svris, f.world.vocab(), f.params);
    CHECK(pool.size() == 2);
}

TEST_CASE("scoring: frozen coefficient examples") {
    Fixture f;
    InstanceId a = f.instance({{"wolf", 1.0}});
    InstanceId b = f.instance({{"girl", 1.0}});

    SUBCASE("single SUCCESSOR at 0.4 scores 0.4 for continuation") {
        Hls h;
        h.members = {make_svri(f, SvrType::Successor, 0.4, a, b, "eats", f.world.vocab())};
        score_hls(h, f.params);
        CHECK(h.support_continuation == doctest::Approx(0.4));
    }
    SUBCASE("SUCCESSOR 0.4 + IN_SHADOW 0.6 clamps to 0") {
        Hls h;
        h.members = {make_svri(f, SvrType::Successor, 0.4, a, b, "eats", f.world.vocab()),
                     make_svri(f, SvrType::InShadow, 0.6, a, b, "eats", f.world.vocab())};
        score_hls(h, f.params);
        CHECK(h.support_continuation == 0.0);
    }
    SUBCASE("PREDECESSOR 0.5: continuation clamps to 0, missing-action +0.5") {
        Hls h;
        h.members = {make_svri(f, SvrType::Predecessor, 0.5, a, b, "eats", f.world.vocab())};
        score_hls(h, f.params);
        CHECK(h.support_continuation == 0.0);
        CHECK(h.support_missing == doctest::Approx(0.5));
    }
}

TEST_CASE("pair-coefficient asymmetry over the sign-opposed pairs") {
    Params p;
    const SvrType pairs[][2] = {{SvrType::Predecessor, SvrType::Successor},
                                {SvrType::Summary, SvrType::Elaboration},
                                {SvrType::Answer, SvrType::Question}};
    for (const auto& pr : pairs) {
        for (int dir = 0; dir < 2; ++dir) {
            SvrType from = pr[dir], to = pr[1 - dir];
            double d_cont = p.coef(to, Purpose::Continuation) - p.coef(from, Purpose::Continuation);
            double d_missing =
                p.coef(to, Purpose::MissingAction) - p.coef(from, Purpose::MissingAction);
            bool both_increase = d_cont > 0.0 && d_missing > 0.0;
            CHECK_FALSE(both_increase);
        }
    }
}

TEST_CASE("full pipeline: build, rank, and match incoming") {
    HlsFixture f;
    auto pool = build_hls(f.world, f.memory, f.focus, f.field, f.params);
    REQUIRE_FALSE(pool.empty());
    for (const Hls& h : pool) {
        CHECK(h.support_continuation >= 0.0);
        CHECK(h.support_missing >= 0.0);
    }

    auto ranked = rank_hls(pool, Purpose::Continuation, 3);
    REQUIRE_FALSE(ranked.empty());
    // the top continuation is the successor reading: F2 takes E1
    const Hls* top = ranked[0].first;
    CHECK(top->tmpl.kind == ViKind::Svo);
    CHECK(top->tmpl.subject.bound == f.f2);
    CHECK(top->tmpl.object.bound == f.e1);

    SUBCASE("an incoming VI matching the template binds to that HLS") {
        ViId incoming = f.svo(f.f2, "takes", f.e1);
        double expectedness = 0.0;
        const Hls* matched = match_incoming(f.world.vi(incoming), pool, f.world, {},
                                            f.params, &expectedness);
        CHECK(matched == top);
        CHECK(expectedness == doctest::Approx(ranked[0].second));
    }
    SUBCASE("an unpredicted VI matches nothing at expectedness 0") {
        ViId sneeze = f.sv(f.f1, "sneezes");
        double expectedness = 1.0;
        const Hls* matched =
            match_incoming(f.world.vi(sneeze), pool, f.world, {}, f.params, &expectedness);
        CHECK(matched == nullptr);
        CHECK(expectedness == 0.0);
    }
}

TEST_CASE("empty memory yields an empty prediction list") {
    Fixture f;
    MemoryStore memory;
    ShadowField field;
    auto pool = build_hls(f.world, memory, f.focus, field, f.params);
    CHECK(rank_hls(pool, Purpose::Continuation, 5).empty());
}

TEST_CASE("positive_source_seeds keeps only positive-contribution sources") {
    Fixture f;
    InstanceId a = f.instance({{"wolf", 1.0}});
    InstanceId b = f.instance({{"girl", 1.0}});
    Hls h;
    h.members = {make_svri(f, SvrType::Successor, 0.6, a, b, "eats", f.world.vocab()),
                 make_svri(f, SvrType::Successor, 0.3, a, b, "eats", f.world.vocab()),
                 make_svri(f, SvrType::InShadow, 0.2, a, b, "eats", f.world.vocab())};
    h.members[0].svr.source = ViId{1};
    h.members[1].svr.source = ViId{2};
    h.members[2].svr.source = ViId{3};
    auto seeds = positive_source_seeds(h, f.params);
    CHECK(seeds.size() == 2);
    CHECK(seeds.at(ViId{1}) == doctest::Approx(0.6));
    CHECK(seeds.at(ViId{2}) == doctest::Approx(0.3));
    CHECK_FALSE(seeds.count(ViId{3}));
}

TEST_CASE("pipeline determinism: identical state, identical outputs") {
    HlsFixture f;
    auto pool1 = build_hls(f.world, f.memory, f.focus, f.field, f.params);
    auto pool2 = build_hls(f.world, f.memory, f.focus, f.field, f.params);
    REQUIRE(pool1.size() == pool2.size());
    for (std::size_t i = 0; i < pool1.size(); ++i) {
        CHECK(template_key(pool1[i].tmpl) == template_key(pool2[i].tmpl));
        CHECK(pool1[i].support_continuation == pool2[i].support_continuation);
        CHECK(pool1[i].members.size() == pool2[i].members.size());
    }
}
