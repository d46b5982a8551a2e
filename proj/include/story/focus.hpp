#pragma once

#include <set>
#include <vector>

#include "story/domain.hpp"
#include "story/model.hpp"
#include "story/params.hpp"

namespace story {

struct ExpelledItem {
    bool is_instance = false;
    std::uint64_t raw_id = 0;  // InstanceId or ViId value
    double salience = 0.0;
};

struct InsertReport {
    std::vector<ExpelledItem> expelled;
};

// Working memory: a weighted set of recent instances and VIs. Weights live in
// (0,1]; anything that drops below the expel threshold moves to memory and can
// never return (tombstones enforce it).
class FocusState {
public:
    void set_current_scene(SceneId s) { current_scene_ = s; }
    SceneId current_scene() const { return current_scene_; }
    double clock() const { return clock_; }

    // New instance enters at weight 1.
    void add_instance(InstanceId id);

    // VI enters at weight 1; participants reinforced to 1 (unless consumed);
    // prior action VIs with the same subject pushed out; verb impacts applied;
    // sub-threshold items expelled.
    InsertReport insert_vi(const VerbInstance& vi, const World& world,
                           const DomainLibrary& lib, const Params& p);

    // Exponential decay over dt story-time units; relation VIs hold their
    // weight while all their instances remain. Salience accrues as the exact
    // integral of the weight trace. Throws on dt < 0.
    std::vector<ExpelledItem> decay(double dt, const World& world, const Params& p);

    // Expels one id (public surface for the expel operation).
    ExpelledItem expel_instance(InstanceId id);
    ExpelledItem expel_vi(ViId id);

    // Expels everything, VIs first (story order), then instances.
    std::vector<ExpelledItem> flush(const World& world);

    bool has_instance(InstanceId id) const { return inst_w_.count(id) != 0; }
    bool has_vi(ViId id) const { return vi_w_.count(id) != 0; }
    bool tombstoned_instance(InstanceId id) const { return tomb_inst_.count(id) != 0; }
    bool tombstoned_vi(ViId id) const { return tomb_vi_.count(id) != 0; }
    double instance_weight(InstanceId id) const;
    double vi_weight(ViId id) const;
    double instance_salience(InstanceId id) const;
    double vi_salience(ViId id) const;
    bool consumed(InstanceId id) const { return consumed_.count(id) != 0; }

    const std::map<InstanceId, double>& instance_weights() const { return inst_w_; }
    const std::map<ViId, double>& vi_weights() const { return vi_w_; }

    // Relation VIs currently in focus, with weights, id order.
    std::vector<std::pair<ViId, double>> relation_vis(const World& world) const;

    // Snapshot/restore access for persistence.
    struct Raw {
        std::map<InstanceId, double> inst_w, inst_s;
        std::map<ViId, double> vi_w, vi_s;
        std::set<InstanceId> tomb_inst, consumed;
        std::set<ViId> tomb_vi;
        SceneId current_scene;
        double clock = 0.0;
    };
    Raw raw() const;
    static FocusState from_raw(Raw r);

private:
    // Cascade: sub-threshold items plus relation VIs missing a participant.
    std::vector<ExpelledItem> expel_below_threshold(const World& world, const Params& p);

    std::map<InstanceId, double> inst_w_, inst_s_;
    std::map<ViId, double> vi_w_, vi_s_;
    std::set<InstanceId> tomb_inst_, consumed_;
    std::set<ViId> tomb_vi_;
    SceneId current_scene_;
    double clock_ = 0.0;
};

}  // namespace story
