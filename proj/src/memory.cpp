#include "story/memory.hpp"

#include <algorithm>

namespace story {

void MemoryStore::record_instance(const MemInstance& m) {
    if (inst_index_.count(m.id)) throw EngineError("instance already recorded");
    inst_index_.emplace(m.id, instances_.size());
    instances_.push_back(m);
    max_inst_salience_ = std::max(max_inst_salience_, m.salience);
}

void MemoryStore::record_vi(const MemVi& m, const RecordContext& ctx,
                            int succession_window) {
    if (vi_index_.count(m.id)) throw EngineError("VI already recorded");
    vi_index_.emplace(m.id, vis_.size());
    vis_.push_back(m);
    max_vi_salience_ = std::max(max_vi_salience_, m.salience);

    if (!m.is_relation) {
        // succession against the previous action VIs recorded from this scene
        auto& history = scene_history_[m.scene];
        int d = 1;
        for (ViId prior : history) {
            if (d > succession_window) break;
            add_link(m.id, prior, SvrType::Predecessor, 1.0 / d);
            ++d;
        }
        history.push_front(m.id);
        while (history.size() > static_cast<std::size_t>(succession_window))
            history.pop_back();
    }

    // context: relation VIs that were in focus at insert time
    for (const auto& [rel, weight] : ctx.context_relations) {
        if (has_vi(rel))
            add_link(m.id, rel, SvrType::Context, weight);
        else
            pending_context_[rel].push_back({m.id, weight});
    }
    if (m.is_relation) {
        if (auto it = pending_context_.find(m.id); it != pending_context_.end()) {
            for (const auto& [from, weight] : it->second)
                add_link(from, m.id, SvrType::Context, weight);
            pending_context_.erase(it);
        }
    }

    // question/answer pairing between quotes in the same quote scene
    if (m.kind == ViKind::Quote) {
        auto& open = open_questions_[m.quote_scene];
        std::vector<std::pair<ViId, InstanceId>> keep;
        for (const auto& [qid, speaker] : open) {
            if (speaker != m.subject)
                add_link(qid, m.id, SvrType::Answer, 1.0);
            else
                keep.push_back({qid, speaker});
        }
        open = std::move(keep);
        if (m.question) open.push_back({m.id, m.subject});
    }

    // summary span membership
    if (ctx.summary_of.valid() && ctx.summary_of != m.id) {
        if (has_vi(ctx.summary_of))
            add_link(m.id, ctx.summary_of, SvrType::Summary, 1.0);
        else
            pending_summary_[ctx.summary_of].push_back(m.id);
    }
    if (auto it = pending_summary_.find(m.id); it != pending_summary_.end()) {
        for (ViId member : it->second) add_link(member, m.id, SvrType::Summary, 1.0);
        pending_summary_.erase(it);
    }
}

const MemInstance& MemoryStore::instance(InstanceId id) const {
    auto it = inst_index_.find(id);
    if (it == inst_index_.end()) throw EngineError("instance not recorded");
    return instances_[it->second];
}

const MemVi& MemoryStore::vi(ViId id) const {
    auto it = vi_index_.find(id);
    if (it == vi_index_.end()) throw EngineError("VI not recorded");
    return vis_[it->second];
}

const std::vector<std::pair<ViId, double>>& MemoryStore::neighbors(ViId id,
                                                                   SvrType kind) const {
    if (!has_vi(id)) throw EngineError("neighbors: VI not recorded");
    static const std::vector<std::pair<ViId, double>> kEmpty;
    auto it = links_.find(id);
    if (it == links_.end()) return kEmpty;
    return it->second[static_cast<int>(kind)];
}

void MemoryStore::add_link(ViId from, ViId to, SvrType kind, double strength) {
    add_directed(from, to, kind, strength);
    add_directed(to, from, opposite(kind), strength);
}

void MemoryStore::add_directed(ViId from, ViId to, SvrType kind, double strength) {
    auto& list = links_[from][static_cast<int>(kind)];
    auto pos = std::find_if(list.begin(), list.end(), [&](const auto& e) {
        return e.second < strength || (e.second == strength && e.first > to);
    });
    list.insert(pos, {to, strength});
}

std::vector<MemoryStore::LinkRecord> MemoryStore::all_links() const {
    std::vector<LinkRecord> out;
    for (const auto& [from, byKind] : links_)
        for (int k = 0; k < kSvrTypeCount; ++k)
            for (const auto& [to, s] : byKind[k])
                out.push_back({from, to, static_cast<SvrType>(k), s});
    return out;
}

MemoryStore::Raw MemoryStore::raw() const {
    return {instances_,       vis_,           all_links(),     scene_history_,
            open_questions_, pending_context_, pending_summary_};
}

MemoryStore MemoryStore::from_raw(Raw r) {
    MemoryStore m;
    for (std::size_t i = 0; i < r.instances.size(); ++i) {
        m.inst_index_.emplace(r.instances[i].id, i);
        m.max_inst_salience_ = std::max(m.max_inst_salience_, r.instances[i].salience);
    }
    for (std::size_t i = 0; i < r.vis.size(); ++i) {
        m.vi_index_.emplace(r.vis[i].id, i);
        m.max_vi_salience_ = std::max(m.max_vi_salience_, r.vis[i].salience);
    }
    m.instances_ = std::move(r.instances);
    m.vis_ = std::move(r.vis);
    for (const auto& link : r.links) m.add_directed(link.from, link.to, link.kind, link.strength);
    m.scene_history_ = std::move(r.scene_history);
    m.open_questions_ = std::move(r.open_questions);
    m.pending_context_ = std::move(r.pending_context);
    m.pending_summary_ = std::move(r.pending_summary);
    return m;
}

}  // namespace story
