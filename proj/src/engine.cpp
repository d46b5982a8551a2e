#include "story/engine.hpp"

#include <algorithm>
#include <cmath>

namespace story {

Engine::Engine(std::shared_ptr<const DomainLibrary> lib, Params params)
    : lib_(std::move(lib)), params_(params), world_(lib_->vocab) {
    SceneId main = world_.create_scene("Main");
    focus_.set_current_scene(main);
}

std::vector<StepRecord> Engine::run_source(const std::string& src, std::size_t top_k) {
    return run_program(xapi::parse_program(src), top_k);
}

std::vector<StepRecord> Engine::run_program(const xapi::Program& program,
                                            std::size_t top_k) {
    std::vector<StepRecord> records;
    for (const xapi::Item& item : program) {
        auto out = run_item(item, top_k);
        records.insert(records.end(), out.begin(), out.end());
    }
    return records;
}

std::vector<StepRecord> Engine::run_item(const xapi::Item& item, std::size_t top_k) {
    std::vector<StepRecord> records;
    if (std::holds_alternative<xapi::Directive>(item)) {
        apply_directive(std::get<xapi::Directive>(item));
        return records;
    }
    const auto& st = std::get<xapi::Statement>(item);
    Resolution res =
        resolve_statement(st, world_, focus_, *lib_, params_, focus_.clock());
    fresh_instances_ = res.created;
    for (InstanceId id : res.created)
        shadows_.init_instance_shadow(id, params_.tick.initial_pool);
    for (ViId vid : res.vis) {
        incorporate(vid);
        StepRecord rec;
        rec.vi = vid;
        rec.rendered = render_vi(vid);
        rec.expectedness = last_expectedness_;
        rec.surprise = last_surprise_;
        rec.continuations = predictions(Purpose::Continuation, top_k);
        rec.missing = predictions(Purpose::MissingAction, top_k);
        records.push_back(std::move(rec));
    }
    fresh_instances_.clear();
    return records;
}

void Engine::apply_directive(const xapi::Directive& d) {
    auto need = [&](std::size_t n) {
        if (d.args.size() != n)
            throw ResolveError("$" + d.name + ": expected " + std::to_string(n) +
                               " argument(s)");
    };
    if (d.name == "new-scene") {
        need(1);
        SceneId s = world_.create_scene(d.args[0].value);
        focus_.set_current_scene(s);
    } else if (d.name == "set-scene") {
        need(1);
        auto s = world_.find_scene(d.args[0].value);
        if (!s) throw ResolveError("$set-scene: unknown scene '" + d.args[0].value + "'");
        focus_.set_current_scene(*s);
    } else if (d.name == "link-scenes") {
        need(3);
        if (d.args[1].value != "succession")
            throw ResolveError("$link-scenes: expected 'succession'");
        auto a = world_.find_scene(d.args[0].value);
        auto b = world_.find_scene(d.args[2].value);
        if (!a || !b) throw ResolveError("$link-scenes: unknown scene label");
        if (!world_.relations().add_succession(*a, *b))
            throw ResolveError("$link-scenes: edge would close a succession cycle");
    } else if (d.name == "summary-begin") {
        need(0);
        if (awaiting_summary_head_ || summary_head_.valid())
            throw ResolveError("$summary-begin: span already open");
        awaiting_summary_head_ = true;
    } else if (d.name == "summary-end") {
        need(0);
        if (!awaiting_summary_head_ && !summary_head_.valid())
            throw ResolveError("$summary-end: no open span");
        awaiting_summary_head_ = false;
        summary_head_ = ViId{};
    } else if (d.name == "non-identical") {
        need(2);
        auto find_named = [&](const std::string& name) -> InstanceId {
            auto atom = world_.vocab().find_proper(name);
            if (!atom) throw ResolveError("$non-identical: unknown name '" + name + "'");
            InstanceId best;
            double best_w = 0.0;
            for (const auto& [id, w] : focus_.instance_weights()) {
                if (world_.instance(id).attributes.weight(*atom) <= 0.0) continue;
                if (w > best_w) {
                    best_w = w;
                    best = id;
                }
            }
            if (!best.valid())
                throw ResolveError("$non-identical: no focus instance named '" + name + "'");
            return best;
        };
        InstanceId a = find_named(d.args[0].value);
        InstanceId b = find_named(d.args[1].value);
        SceneId sa = world_.instance(a).scene;
        SceneId sb = world_.instance(b).scene;
        if (!world_.relations().same_story_line(sa, sb))
            throw ResolveError("$non-identical: instances do not share a story line");
        world_.relations().add_non_identity(a, b);
    } else {
        throw ResolveError("unknown directive $" + d.name);
    }
}

void Engine::incorporate(ViId vi_id) {
    const VerbInstance& vi = world_.vi(vi_id);

    // ambient time before the event
    record_expelled(focus_.decay(params_.event_dt, world_, params_));

    // state immediately before incorporation, for the surprise measure
    std::map<std::uint64_t, std::map<std::uint64_t, double>> pre_inst, pre_vi;
    for (const auto& [head, shadow] : shadows_.instance_shadows())
        pre_inst[head.v] = shadow.body;
    for (const auto& [head, shadow] : shadows_.vi_shadows()) pre_vi[head.v] = shadow.body;
    auto pre_supports = hls_supports_;

    double expectedness = 0.0;
    const Hls* matched =
        match_incoming(vi, hls_pool_, world_, fresh_instances_, params_, &expectedness);

    apply_side_effects(vi);

    // capture insert-time context for the eventual memory record
    pending_context_[vi_id] = focus_.relation_vis(world_);
    if (awaiting_summary_head_) {
        summary_head_ = vi_id;
        awaiting_summary_head_ = false;
    } else if (summary_head_.valid() && summary_head_ != vi_id) {
        summary_of_[vi_id] = summary_head_;
    }

    InsertReport report = focus_.insert_vi(vi, world_, *lib_, params_);

    if (matched)
        shadows_.init_vi_shadow_from_seeds(vi_id, positive_source_seeds(*matched, params_),
                                           params_.tick.initial_pool);
    else
        shadows_.init_vi_shadow(vi_id, params_.tick.initial_pool);

    record_expelled(report.expelled);

    shadows_.tick(params_.event_dt, world_, memory_, params_.tick);

    rebuild_hls();

    double hls_delta = 0.0;
    for (const auto& [key, support] : hls_supports_) {
        auto it = pre_supports.find(key);
        hls_delta += std::abs(support - (it == pre_supports.end() ? 0.0 : it->second));
    }
    for (const auto& [key, support] : pre_supports)
        if (!hls_supports_.count(key)) hls_delta += std::abs(support);

    last_surprise_ = shadow_abs_diff(pre_inst, pre_vi) + hls_delta;
    last_expectedness_ = expectedness;
}

double Engine::shadow_abs_diff(
    const std::map<std::uint64_t, std::map<std::uint64_t, double>>& pre_inst,
    const std::map<std::uint64_t, std::map<std::uint64_t, double>>& pre_vi) const {
    double total = 0.0;
    auto diff_one = [&](const std::map<std::uint64_t, double>& before,
                        const std::map<std::uint64_t, double>& after) {
        for (const auto& [id, w] : after) {
            auto it = before.find(id);
            total += std::abs(w - (it == before.end() ? 0.0 : it->second));
        }
        for (const auto& [id, w] : before)
            if (!after.count(id)) total += std::abs(w);
    };
    static const std::map<std::uint64_t, double> kEmpty;
    for (const auto& [head, shadow] : shadows_.instance_shadows()) {
        auto it = pre_inst.find(head.v);
        diff_one(it == pre_inst.end() ? kEmpty : it->second, shadow.body);
    }
    for (const auto& [head, body] : pre_inst)
        if (!shadows_.has_instance_shadow(InstanceId{head})) diff_one(body, kEmpty);
    for (const auto& [head, shadow] : shadows_.vi_shadows()) {
        auto it = pre_vi.find(head.v);
        diff_one(it == pre_vi.end() ? kEmpty : it->second, shadow.body);
    }
    for (const auto& [head, body] : pre_vi)
        if (!shadows_.has_vi_shadow(ViId{head})) diff_one(body, kEmpty);
    return total;
}

void Engine::record_expelled(const std::vector<ExpelledItem>& items) {
    for (const ExpelledItem& item : items) {
        if (item.is_instance) {
            InstanceId id{item.raw_id};
            const Instance& inst = world_.instance(id);
            memory_.record_instance(
                {id, inst.scene, inst.attributes, item.salience, inst.created_at});
            shadows_.erase_instance_shadow(id);
        } else {
            ViId id{item.raw_id};
            const VerbInstance& vi = world_.vi(id);
            MemVi m{id,        vi.kind,    vi.verb,     vi.subject,     vi.object,
                    vi.modifier, vi.quoted, vi.quote_scene, vi.scene,   item.salience,
                    vi.created_at, vi.is_relation, vi.question};
            RecordContext ctx;
            if (auto it = pending_context_.find(id); it != pending_context_.end()) {
                ctx.context_relations = it->second;
                pending_context_.erase(it);
            }
            if (auto it = summary_of_.find(id); it != summary_of_.end()) {
                ctx.summary_of = it->second;
                summary_of_.erase(it);
            }
            memory_.record_vi(m, ctx, params_.succession_window);
            shadows_.erase_vi_shadow(id);
        }
    }
}

void Engine::apply_side_effects(const VerbInstance& vi) {
    for (const auto& [atom, w] : vi.verb.weights) {
        (void)w;
        auto mv = lib_->metaverb_of(atom);
        if (!mv) continue;
        switch (*mv) {
            case Metaverb::IsA:
                world_.add_attributes(vi.subject, vi.modifier);
                break;
            case Metaverb::ChangesInto:
                if (vi.kind == ViKind::Svo)
                    world_.relations().add_identity(vi.subject, vi.object,
                                                    RelationKind::IdentitySomatic);
                break;
            case Metaverb::CreatesScene:
                world_.create_scene(scene_label_from_object(vi));
                break;
            case Metaverb::SceneSuccession: {
                std::string label = scene_label_from_object(vi);
                SceneId to;
                if (auto s = world_.find_scene(label))
                    to = *s;
                else
                    to = world_.create_scene(label);
                if (!world_.relations().add_succession(vi.scene, to))
                    throw ResolveError("scene-succession would close a cycle");
                break;
            }
            default: break;
        }
    }
}

std::string Engine::scene_label_from_object(const VerbInstance& vi) const {
    if (vi.kind != ViKind::Svo)
        throw ResolveError("scene metaverb requires an object naming the scene");
    const Overlay& attrs = world_.instance(vi.object).attributes;
    for (const auto& [atom, w] : attrs.weights) {
        (void)w;
        const AtomInfo& info = world_.vocab().info(atom);
        if (info.text || info.proper) return info.name;
    }
    throw ResolveError("scene metaverb object must be a text or proper name");
}

void Engine::flush_focus() {
    record_expelled(focus_.decay(params_.event_dt, world_, params_));
    record_expelled(focus_.flush(world_));
    awaiting_summary_head_ = false;
    summary_head_ = ViId{};
    rebuild_hls();
}

void Engine::step_time(double dt) {
    record_expelled(focus_.decay(dt, world_, params_));
    shadows_.tick(dt, world_, memory_, params_.tick);
    rebuild_hls();
}

void Engine::rebuild_hls() {
    hls_pool_ = build_hls(world_, memory_, focus_, shadows_, params_);
    hls_supports_.clear();
    for (const Hls& h : hls_pool_) {
        double& slot = hls_supports_[template_key(h.tmpl)];
        slot = std::max(slot, h.support_continuation);
    }
}

std::vector<ScoredTemplate> Engine::predictions(Purpose purpose, std::size_t k) const {
    std::vector<ScoredTemplate> out;
    for (const auto& [hls, score] : rank_hls(hls_pool_, purpose, k))
        out.push_back({hls->tmpl, score, render_template(hls->tmpl, world_, *lib_)});
    return out;
}

std::string Engine::render_vi(ViId id) const {
    const VerbInstance& vi = world_.vi(id);
    ViTemplate t;
    t.kind = vi.kind;
    t.verb = vi.verb;
    t.subject.kind = TemplatePart::Kind::Bound;
    t.subject.bound = vi.subject;
    if (vi.kind == ViKind::Svo) {
        t.object.kind = TemplatePart::Kind::Bound;
        t.object.bound = vi.object;
    }
    t.modifier = vi.modifier;
    t.quote_scene = vi.quote_scene;
    if (vi.kind == ViKind::Quote) {
        std::string inquit = render_template(t, world_, *lib_);
        // splice the quoted VI into the [x] slot (minus its terminator)
        std::string quoted = render_vi(vi.quoted);
        if (!quoted.empty() && quoted.back() == '.') quoted.pop_back();
        auto pos = inquit.find("[x]");
        if (pos != std::string::npos)
            inquit = inquit.substr(0, pos) + quoted + inquit.substr(pos + 3);
        return inquit;
    }
    return render_template(t, world_, *lib_);
}

}  // namespace story
