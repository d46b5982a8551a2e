#pragma once

#include <memory>

#include "story/engine.hpp"

namespace testutil {

using namespace story;

// tiny animal-story domain shared by the unit tests
inline const char* kSmallDomain = R"(
concept wolf. concept girl. concept lion. concept deer. concept big.
concept human. concept animal. concept basket.
verb eats. verb sees. verb sneezes. verb gives. verb takes. verb exists.
verb of. verb is-a. verb says. verb asks. verb utters. verb changes-into.
verb action-is. verb quickly.
overlap wolf lion 0.5. overlap girl deer 0.3.
verb eats impact consume-object 1.0.
metaverb is-a. metaverb says. metaverb asks. metaverb utters.
metaverb changes-into. metaverb action-is.
word "wolf" -> wolf. word "girl" -> girl. word "lion" -> lion.
word "deer" -> deer. word "big" -> big. word "basket" -> basket.
word "eats" -> eats. word "sees" -> sees. word "sneezes" -> sneezes.
word "gives" -> gives. word "takes" -> takes. word "exists" -> exists.
word "is-a" -> is-a. word "says" -> says. word "asks" -> asks.
word "utters" -> utters. word "changes-into" -> changes-into.
word "quickly" -> quickly.
)";

struct Fixture {
    std::shared_ptr<const DomainLibrary> lib;
    Params params;
    World world;
    FocusState focus;
    SceneId scene;

    Fixture()
        : lib(std::make_shared<const DomainLibrary>(load_domain(kSmallDomain))),
          world(lib->vocab) {
        scene = world.create_scene("Test");
        focus.set_current_scene(scene);
    }

    AtomId atom(const std::string& name) const { return *world.vocab().find(name); }

    InstanceId instance(std::initializer_list<std::pair<std::string, double>> attrs) {
        Overlay o;
        o.kind = AtomKind::Concept;
        for (const auto& [name, w] : attrs) o.set(atom(name), w);
        InstanceId id = world.create_instance(scene, o, focus.clock());
        focus.add_instance(id);
        return id;
    }

    ViId sv(InstanceId subject, const std::string& verb) {
        VerbInstance vi;
        vi.kind = ViKind::Sv;
        vi.verb = make_overlay(AtomKind::Verb, {{atom(verb), 1.0}});
        vi.subject = subject;
        vi.created_at = focus.clock();
        return world.create_vi(vi);
    }

    ViId svo(InstanceId subject, const std::string& verb, InstanceId object) {
        VerbInstance vi;
        vi.kind = ViKind::Svo;
        vi.verb = make_overlay(AtomKind::Verb, {{atom(verb), 1.0}});
        vi.subject = subject;
        vi.object = object;
        vi.created_at = focus.clock();
        return world.create_vi(vi);
    }

    ViId relation(InstanceId subject, const std::string& verb, InstanceId object) {
        VerbInstance vi;
        vi.kind = ViKind::Svo;
        vi.verb = make_overlay(AtomKind::Verb, {{atom(verb), 1.0}});
        vi.subject = subject;
        vi.object = object;
        vi.is_relation = true;
        vi.created_at = focus.clock();
        return world.create_vi(vi);
    }

    InsertReport insert(ViId id) { return focus.insert_vi(world.vi(id), world, *lib, params); }
};

}  // namespace testutil
