#pragma once

#include <array>
#include <deque>

#include "story/model.hpp"
#include "story/params.hpp"

namespace story {

// Frozen copies of expelled focus content. Never mutated after recording.
struct MemInstance {
    InstanceId id;
    SceneId scene;
    Overlay attributes;
    double salience = 0.0;
    double created_at = 0.0;
};

struct MemVi {
    ViId id;
    ViKind kind = ViKind::Sv;
    Overlay verb;
    InstanceId subject;
    InstanceId object;
    Overlay modifier;
    ViId quoted;
    SceneId quote_scene;
    SceneId scene;
    double salience = 0.0;
    double created_at = 0.0;
    bool is_relation = false;
    bool question = false;
};

// Insert-time facts a VI carries into memory.
struct RecordContext {
    std::vector<std::pair<ViId, double>> context_relations;  // relation VIs in focus
    ViId summary_of;  // designated summary VI when inside an annotated span
};

// Append-only autobiographical memory plus the inter-VI link structure.
// Every link is stored with its inverse-kind twin in the opposite direction.
class MemoryStore {
public:
    void record_instance(const MemInstance& m);
    void record_vi(const MemVi& m, const RecordContext& ctx, int succession_window);

    bool has_instance(InstanceId id) const { return inst_index_.count(id) != 0; }
    bool has_vi(ViId id) const { return vi_index_.count(id) != 0; }
    const MemInstance& instance(InstanceId id) const;
    const MemVi& vi(ViId id) const;

    const std::vector<MemInstance>& instances() const { return instances_; }
    const std::vector<MemVi>& vis() const { return vis_; }

    // Sorted by strength descending (ties: lower id first). O(degree).
    const std::vector<std::pair<ViId, double>>& neighbors(ViId id, SvrType kind) const;

    double max_instance_salience() const { return max_inst_salience_; }
    double max_vi_salience() const { return max_vi_salience_; }
    std::size_t size() const { return instances_.size() + vis_.size(); }

    struct LinkRecord {
        ViId from, to;
        SvrType kind;
        double strength;
    };
    std::vector<LinkRecord> all_links() const;  // for snapshots, from-id order
    void add_link(ViId from, ViId to, SvrType kind, double strength);  // with inverse

    // Snapshot/restore access for persistence.
    struct Raw {
        std::vector<MemInstance> instances;
        std::vector<MemVi> vis;
        std::vector<LinkRecord> links;  // directed entries
        std::map<SceneId, std::deque<ViId>> scene_history;
        std::map<SceneId, std::vector<std::pair<ViId, InstanceId>>> open_questions;
        std::map<ViId, std::vector<std::pair<ViId, double>>> pending_context;
        std::map<ViId, std::vector<ViId>> pending_summary;
    };
    Raw raw() const;
    static MemoryStore from_raw(Raw r);

private:
    void add_directed(ViId from, ViId to, SvrType kind, double strength);

    std::vector<MemInstance> instances_;
    std::vector<MemVi> vis_;
    std::map<InstanceId, std::size_t> inst_index_;
    std::map<ViId, std::size_t> vi_index_;

    // links_[vi][kind] kept sorted by (-strength, id)
    std::map<ViId, std::array<std::vector<std::pair<ViId, double>>, kSvrTypeCount>> links_;

    // recording history of action VIs per scene, most recent first
    std::map<SceneId, std::deque<ViId>> scene_history_;
    // open wh-questions per quote scene: (question vi, speaker)
    std::map<SceneId, std::vector<std::pair<ViId, InstanceId>>> open_questions_;
    // context/summary links awaiting the target's recording
    std::map<ViId, std::vector<std::pair<ViId, double>>> pending_context_;
    std::map<ViId, std::vector<ViId>> pending_summary_;

    double max_inst_salience_ = 0.0;
    double max_vi_salience_ = 0.0;
};

}  // namespace story
