#include "story/focus.hpp"

#include <algorithm>
#include <cmath>

namespace story {

void FocusState::add_instance(InstanceId id) {
    if (tomb_inst_.count(id)) throw EngineError("expelled instance can never return");
    if (inst_w_.count(id)) throw EngineError("instance already in focus");
    inst_w_[id] = 1.0;
    inst_s_[id] = 0.0;
}

InsertReport FocusState::insert_vi(const VerbInstance& vi, const World& world,
                                   const DomainLibrary& lib, const Params& p) {
    if (tomb_vi_.count(vi.id)) throw EngineError("expelled VI can never return");
    if (vi_w_.count(vi.id)) throw EngineError("VI already in focus");
    for (InstanceId part : vi.participants()) {
        if (tomb_inst_.count(part))
            throw EngineError("VI references an expelled instance");
        if (!inst_w_.count(part)) throw EngineError("VI part not in focus");
    }

    vi_w_[vi.id] = 1.0;
    vi_s_[vi.id] = 0.0;

    for (InstanceId part : vi.participants())
        if (!consumed_.count(part)) inst_w_[part] = 1.0;

    if (!vi.is_relation) {
        double boost = 0.0;
        for (const auto& [atom, w_atom] : vi.verb.weights)
            for (const Impact& imp : lib.impacts_of(atom))
                if (imp.effect == ImpactEffect::PushOutBoost)
                    boost += imp.magnitude * w_atom;
        double factor = p.push_out * (1.0 - std::min(1.0, boost));
        for (auto& [other, w] : vi_w_) {
            if (other == vi.id) continue;
            const VerbInstance& ov = world.vi(other);
            if (!ov.is_relation && ov.subject == vi.subject) w *= factor;
        }
    }

    for (const auto& [atom, w_atom] : vi.verb.weights) {
        for (const Impact& imp : lib.impacts_of(atom)) {
            double strength = imp.magnitude * w_atom;
            // interpolates between no effect and x0.05 at full strength
            double mult = (1.0 - strength) + 0.05 * strength;
            if (imp.effect == ImpactEffect::ConsumeObject && vi.kind == ViKind::Svo) {
                inst_w_[vi.object] *= mult;
                consumed_.insert(vi.object);
            } else if (imp.effect == ImpactEffect::ConsumeSubject) {
                inst_w_[vi.subject] *= mult;
                consumed_.insert(vi.subject);
            }
        }
    }

    InsertReport report;
    report.expelled = expel_below_threshold(world, p);
    return report;
}

std::vector<ExpelledItem> FocusState::decay(double dt, const World& world, const Params& p) {
    if (dt < 0.0) throw EngineError("decay: negative dt");
    if (dt == 0.0) return {};
    double lambda = p.focus_decay;
    double shrink = std::exp(-lambda * dt);
    // integral of w0*exp(-lambda t) over [0,dt]
    double integ = lambda > 0.0 ? (1.0 - shrink) / lambda : dt;

    for (auto& [id, w] : inst_w_) {
        inst_s_[id] += w * integ;
        w *= shrink;
    }
    for (auto& [id, w] : vi_w_) {
        if (world.vi(id).is_relation) {
            vi_s_[id] += w * dt;  // holds its weight
        } else {
            vi_s_[id] += w * integ;
            w *= shrink;
        }
    }
    clock_ += dt;
    return expel_below_threshold(world, p);
}

ExpelledItem FocusState::expel_instance(InstanceId id) {
    auto it = inst_w_.find(id);
    if (it == inst_w_.end()) throw EngineError("expel: instance not in focus");
    ExpelledItem item{true, id.v, inst_s_.at(id)};
    inst_w_.erase(it);
    inst_s_.erase(id);
    consumed_.erase(id);
    tomb_inst_.insert(id);
    return item;
}

ExpelledItem FocusState::expel_vi(ViId id) {
    auto it = vi_w_.find(id);
    if (it == vi_w_.end()) throw EngineError("expel: VI not in focus");
    ExpelledItem item{false, id.v, vi_s_.at(id)};
    vi_w_.erase(it);
    vi_s_.erase(id);
    tomb_vi_.insert(id);
    return item;
}

std::vector<ExpelledItem> FocusState::flush(const World& world) {
    (void)world;
    std::vector<ExpelledItem> out;
    while (!vi_w_.empty()) out.push_back(expel_vi(vi_w_.begin()->first));
    while (!inst_w_.empty()) out.push_back(expel_instance(inst_w_.begin()->first));
    return out;
}

std::vector<ExpelledItem> FocusState::expel_below_threshold(const World& world,
                                                            const Params& p) {
    std::vector<ExpelledItem> out;
    std::vector<InstanceId> gone_insts;
    for (const auto& [id, w] : inst_w_)
        if (w < p.expel_threshold) gone_insts.push_back(id);

    std::vector<ViId> gone_vis;
    for (const auto& [id, w] : vi_w_) {
        const VerbInstance& vi = world.vi(id);
        if (vi.is_relation) {
            // relation VIs leave with their instances, not by weight
            bool missing = false;
            for (InstanceId part : vi.participants())
                if (!inst_w_.count(part) ||
                    std::count(gone_insts.begin(), gone_insts.end(), part))
                    missing = true;
            if (missing) gone_vis.push_back(id);
        } else if (w < p.expel_threshold) {
            gone_vis.push_back(id);
        }
    }

    // story order: VIs by id, then instances
    std::sort(gone_vis.begin(), gone_vis.end());
    for (ViId id : gone_vis) out.push_back(expel_vi(id));
    for (InstanceId id : gone_insts) out.push_back(expel_instance(id));
    return out;
}

double FocusState::instance_weight(InstanceId id) const {
    auto it = inst_w_.find(id);
    return it == inst_w_.end() ? 0.0 : it->second;
}
double FocusState::vi_weight(ViId id) const {
    auto it = vi_w_.find(id);
    return it == vi_w_.end() ? 0.0 : it->second;
}
double FocusState::instance_salience(InstanceId id) const {
    auto it = inst_s_.find(id);
    return it == inst_s_.end() ? 0.0 : it->second;
}
double FocusState::vi_salience(ViId id) const {
    auto it = vi_s_.find(id);
    return it == vi_s_.end() ? 0.0 : it->second;
}

std::vector<std::pair<ViId, double>> FocusState::relation_vis(const World& world) const {
    std::vector<std::pair<ViId, double>> out;
    for (const auto& [id, w] : vi_w_)
        if (world.vi(id).is_relation) out.push_back({id, w});
    return out;
}

FocusState::Raw FocusState::raw() const {
    return {inst_w_, inst_s_, vi_w_,           vi_s_, tomb_inst_,
            consumed_, tomb_vi_, current_scene_, clock_};
}

FocusState FocusState::from_raw(Raw r) {
    FocusState f;
    f.inst_w_ = std::move(r.inst_w);
    f.inst_s_ = std::move(r.inst_s);
    f.vi_w_ = std::move(r.vi_w);
    f.vi_s_ = std::move(r.vi_s);
    f.tomb_inst_ = std::move(r.tomb_inst);
    f.consumed_ = std::move(r.consumed);
    f.tomb_vi_ = std::move(r.tomb_vi);
    f.current_scene_ = r.current_scene;
    f.clock_ = r.clock;
    return f;
}

}  // namespace story
