#pragma once

#include <string>
#include <vector>

#include "story/overlay.hpp"

namespace story {

// A story entity, valid over the span limited by attribute additivity.
// The scene binding is permanent; attributes only ever grow.
struct Instance {
    InstanceId id;
    SceneId scene;
    Overlay attributes;  // concept overlay, grow-only
    double created_at = 0.0;
};

enum class ViKind { Svo, Sv, IsaAdj, ActionAdverb, Quote };

// The unit of events. Part slots are populated exactly per kind:
//   Svo           subject + object
//   Sv            subject
//   IsaAdj        subject + modifier (concept overlay)
//   ActionAdverb  subject + modifier (verb overlay)
//   Quote         subject (speaker) + quote_scene + quoted VI
struct VerbInstance {
    ViId id;
    ViKind kind = ViKind::Sv;
    Overlay verb;  // verb overlay
    InstanceId subject;
    InstanceId object;    // Svo only
    Overlay modifier;     // IsaAdj / ActionAdverb only
    ViId quoted;          // Quote only
    SceneId quote_scene;  // Quote only
    SceneId scene;        // scene of the subject
    double created_at = 0.0;
    bool is_relation = false;  // auxiliary relation VI (chain "of", ...)
    bool question = false;     // wh-marked

    std::vector<InstanceId> participants() const {
        std::vector<InstanceId> p{subject};
        if (kind == ViKind::Svo) p.push_back(object);
        return p;
    }
};

struct Scene {
    SceneId id;
    std::string label;
    std::vector<InstanceId> members;  // add-only
};

enum class RelationKind { IdentitySomatic, IdentityFictional, NonIdentity, SceneSuccession };

struct Relation {
    RelationKind kind;
    std::uint64_t from = 0;  // instance id, or scene id for SceneSuccession
    std::uint64_t to = 0;
};

// Identity / non-identity / scene-succession registry. Non-identity is
// symmetric; the succession graph over scenes stays acyclic.
class RelationStore {
public:
    void add_identity(InstanceId a, InstanceId b, RelationKind kind);
    void add_non_identity(InstanceId a, InstanceId b);
    // Returns false (and adds nothing) if the edge would close a cycle.
    bool add_succession(SceneId from, SceneId to);

    const std::vector<Relation>& all() const { return all_; }

    // Identity neighbors of a, both directions, sorted by id.
    const std::vector<InstanceId>& identity_neighbors(InstanceId a) const;
    bool non_identical(InstanceId a, InstanceId b) const;
    const std::vector<std::pair<InstanceId, InstanceId>>& non_identity_pairs() const {
        return ni_pairs_;
    }
    const std::vector<SceneId>& successors(SceneId s) const;
    // Connected in the undirected succession graph (or equal).
    bool same_story_line(SceneId a, SceneId b) const;

private:
    std::vector<Relation> all_;
    std::map<InstanceId, std::vector<InstanceId>> id_adj_;
    std::vector<std::pair<InstanceId, InstanceId>> ni_pairs_;  // canonical a<b
    std::map<SceneId, std::vector<SceneId>> succ_adj_;
    std::map<SceneId, std::vector<SceneId>> succ_undirected_;
};

// Owns every instance, VI and scene ever created, plus the vocabulary
// (library atoms + dynamic proper/text atoms) and the relation registry.
// Nothing is ever removed; focus membership is tracked elsewhere.
class World {
public:
    explicit World(Vocabulary vocab) : vocab_(std::move(vocab)) {}

    Vocabulary& vocab() { return vocab_; }
    const Vocabulary& vocab() const { return vocab_; }
    RelationStore& relations() { return relations_; }
    const RelationStore& relations() const { return relations_; }

    SceneId create_scene(const std::string& label);
    InstanceId create_instance(SceneId scene, Overlay attributes, double now);
    ViId create_vi(VerbInstance draft);  // id/scene fields filled from draft

    Instance& instance(InstanceId id);
    const Instance& instance(InstanceId id) const;
    VerbInstance& vi(ViId id);
    const VerbInstance& vi(ViId id) const;
    Scene& scene(SceneId id);
    const Scene& scene(SceneId id) const;

    bool has_instance(InstanceId id) const { return id.v >= 1 && id.v <= instances_.size(); }
    bool has_vi(ViId id) const { return id.v >= 1 && id.v <= vis_.size(); }

    // Most recently created scene with this label, if any.
    std::optional<SceneId> find_scene(const std::string& label) const;

    const std::vector<Instance>& instances() const { return instances_; }
    const std::vector<VerbInstance>& vis() const { return vis_; }
    const std::vector<Scene>& scenes() const { return scenes_; }

    // Grow-only attribute addition (is-a side effect).
    void add_attributes(InstanceId id, const Overlay& extra);

private:
    Vocabulary vocab_;
    RelationStore relations_;
    std::vector<Instance> instances_;  // id 1 at index 0
    std::vector<VerbInstance> vis_;
    std::vector<Scene> scenes_;
};

}  // namespace story
