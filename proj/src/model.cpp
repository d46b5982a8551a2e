#include "story/model.hpp"

#include <algorithm>
#include <set>

namespace story {

void RelationStore::add_identity(InstanceId a, InstanceId b, RelationKind kind) {
    if (kind != RelationKind::IdentitySomatic && kind != RelationKind::IdentityFictional)
        throw EngineError("add_identity: not an identity kind");
    all_.push_back({kind, a.v, b.v});
    auto link = [this](InstanceId x, InstanceId y) {
        auto& v = id_adj_[x];
        if (!std::count(v.begin(), v.end(), y)) {
            v.push_back(y);
            std::sort(v.begin(), v.end());
        }
    };
    link(a, b);
    link(b, a);
}

void RelationStore::add_non_identity(InstanceId a, InstanceId b) {
    if (a == b) throw EngineError("non-identity of an instance with itself");
    auto lo = std::min(a, b), hi = std::max(a, b);
    if (non_identical(lo, hi)) return;
    all_.push_back({RelationKind::NonIdentity, lo.v, hi.v});
    ni_pairs_.push_back({lo, hi});
    std::sort(ni_pairs_.begin(), ni_pairs_.end());
}

bool RelationStore::add_succession(SceneId from, SceneId to) {
    if (from == to) return false;
    // reject edges that would close a directed cycle
    std::set<SceneId> seen;
    std::vector<SceneId> stack{to};
    while (!stack.empty()) {
        SceneId s = stack.back();
        stack.pop_back();
        if (s == from) return false;
        if (!seen.insert(s).second) continue;
        if (auto it = succ_adj_.find(s); it != succ_adj_.end())
            for (SceneId n : it->second) stack.push_back(n);
    }
    all_.push_back({RelationKind::SceneSuccession, from.v, to.v});
    succ_adj_[from].push_back(to);
    succ_undirected_[from].push_back(to);
    succ_undirected_[to].push_back(from);
    return true;
}

const std::vector<InstanceId>& RelationStore::identity_neighbors(InstanceId a) const {
    static const std::vector<InstanceId> kEmpty;
    auto it = id_adj_.find(a);
    return it == id_adj_.end() ? kEmpty : it->second;
}

bool RelationStore::non_identical(InstanceId a, InstanceId b) const {
    auto lo = std::min(a, b), hi = std::max(a, b);
    return std::binary_search(ni_pairs_.begin(), ni_pairs_.end(), std::pair{lo, hi});
}

const std::vector<SceneId>& RelationStore::successors(SceneId s) const {
    static const std::vector<SceneId> kEmpty;
    auto it = succ_adj_.find(s);
    return it == succ_adj_.end() ? kEmpty : it->second;
}

bool RelationStore::same_story_line(SceneId a, SceneId b) const {
    if (a == b) return true;
    std::set<SceneId> seen;
    std::vector<SceneId> stack{a};
    while (!stack.empty()) {
        SceneId s = stack.back();
        stack.pop_back();
        if (s == b) return true;
        if (!seen.insert(s).second) continue;
        if (auto it = succ_undirected_.find(s); it != succ_undirected_.end())
            for (SceneId n : it->second) stack.push_back(n);
    }
    return false;
}

SceneId World::create_scene(const std::string& label) {
    SceneId id{scenes_.size() + 1};
    scenes_.push_back({id, label, {}});
    return id;
}

InstanceId World::create_instance(SceneId scene_id, Overlay attributes, double now) {
    InstanceId id{instances_.size() + 1};
    instances_.push_back({id, scene_id, std::move(attributes), now});
    scene(scene_id).members.push_back(id);
    return id;
}

ViId World::create_vi(VerbInstance draft) {
    draft.id = ViId{vis_.size() + 1};
    draft.scene = instance(draft.subject).scene;
    vis_.push_back(std::move(draft));
    return vis_.back().id;
}

Instance& World::instance(InstanceId id) {
    if (!has_instance(id)) throw EngineError("unknown instance id");
    return instances_[id.v - 1];
}
const Instance& World::instance(InstanceId id) const {
    if (!has_instance(id)) throw EngineError("unknown instance id");
    return instances_[id.v - 1];
}
VerbInstance& World::vi(ViId id) {
    if (!has_vi(id)) throw EngineError("unknown vi id");
    return vis_[id.v - 1];
}
const VerbInstance& World::vi(ViId id) const {
    if (!has_vi(id)) throw EngineError("unknown vi id");
    return vis_[id.v - 1];
}
Scene& World::scene(SceneId id) {
    if (id.v < 1 || id.v > scenes_.size()) throw EngineError("unknown scene id");
    return scenes_[id.v - 1];
}
const Scene& World::scene(SceneId id) const {
    if (id.v < 1 || id.v > scenes_.size()) throw EngineError("unknown scene id");
    return scenes_[id.v - 1];
}

std::optional<SceneId> World::find_scene(const std::string& label) const {
    for (auto it = scenes_.rbegin(); it != scenes_.rend(); ++it)
        if (it->label == label) return it->id;
    return std::nullopt;
}

void World::add_attributes(InstanceId id, const Overlay& extra) {
    auto& inst = instance(id);
    inst.attributes = overlay_merge(inst.attributes, extra);
}

}  // namespace story
