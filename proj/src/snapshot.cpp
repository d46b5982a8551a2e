#include "story/snapshot.hpp"

namespace story {

namespace {

using nlohmann::json;

json overlay_to_json(const Overlay& o) {
    json w = json::object();
    for (const auto& [atom, weight] : o.weights) w[std::to_string(atom.v)] = weight;
    return json{{"kind", o.kind == AtomKind::Concept ? "concept" : "verb"}, {"w", w}};
}

Overlay overlay_from_json(const json& j) {
    Overlay o;
    o.kind = j.at("kind") == "concept" ? AtomKind::Concept : AtomKind::Verb;
    for (const auto& [key, value] : j.at("w").items())
        o.weights[AtomId{static_cast<std::uint32_t>(std::stoul(key))}] =
            value.get<double>();
    return o;
}

json body_to_json(const std::map<std::uint64_t, double>& body) {
    json out = json::object();
    for (const auto& [id, w] : body) out[std::to_string(id)] = w;
    return out;
}

std::map<std::uint64_t, double> body_from_json(const json& j) {
    std::map<std::uint64_t, double> out;
    for (const auto& [key, value] : j.items()) out[std::stoull(key)] = value.get<double>();
    return out;
}

std::uint64_t library_fingerprint(const DomainLibrary& lib) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    for (std::uint32_t i = 0; i < lib.vocab.size(); ++i) mix(lib.vocab.info(AtomId{i}).name);
    return h;
}

const char* vi_kind_name(ViKind k) {
    switch (k) {
        case ViKind::Svo: return "svo";
        case ViKind::Sv: return "sv";
        case ViKind::IsaAdj: return "isa-adj";
        case ViKind::ActionAdverb: return "action-adverb";
        case ViKind::Quote: return "quote";
    }
    return "?";
}

ViKind vi_kind_from(const std::string& s) {
    if (s == "svo") return ViKind::Svo;
    if (s == "sv") return ViKind::Sv;
    if (s == "isa-adj") return ViKind::IsaAdj;
    if (s == "action-adverb") return ViKind::ActionAdverb;
    if (s == "quote") return ViKind::Quote;
    throw Error("snapshot: bad vi kind '" + s + "'");
}

}  // namespace

json EngineSnapshot::save(const Engine& engine) {
    const World& world = engine.world_;
    const Vocabulary& vocab = world.vocab();
    const DomainLibrary& lib = *engine.lib_;

    json j;
    j["format"] = "story-engine-session";
    j["version"] = 1;
    j["library"] = {{"atom_count", lib.vocab.size()},
                    {"fingerprint", library_fingerprint(lib)}};

    json dyn = json::array();
    for (std::uint32_t i = lib.vocab.size(); i < vocab.size(); ++i) {
        const AtomInfo& info = vocab.info(AtomId{i});
        dyn.push_back({{"name", info.name}, {"proper", info.proper}, {"text", info.text}});
    }
    j["dynamic_atoms"] = dyn;

    json scenes = json::array();
    for (const Scene& s : world.scenes()) scenes.push_back({{"label", s.label}});
    j["scenes"] = scenes;

    json instances = json::array();
    for (const Instance& inst : world.instances())
        instances.push_back({{"scene", inst.scene.v},
                             {"attrs", overlay_to_json(inst.attributes)},
                             {"created_at", inst.created_at}});
    j["instances"] = instances;

    json vis = json::array();
    for (const VerbInstance& vi : world.vis())
        vis.push_back({{"kind", vi_kind_name(vi.kind)},
                       {"verb", overlay_to_json(vi.verb)},
                       {"subject", vi.subject.v},
                       {"object", vi.object.v},
                       {"modifier", overlay_to_json(vi.modifier)},
                       {"quoted", vi.quoted.v},
                       {"quote_scene", vi.quote_scene.v},
                       {"created_at", vi.created_at},
                       {"is_relation", vi.is_relation},
                       {"question", vi.question}});
    j["vis"] = vis;

    json rels = json::array();
    for (const Relation& r : world.relations().all())
        rels.push_back(
            {{"kind", static_cast<int>(r.kind)}, {"from", r.from}, {"to", r.to}});
    j["relations"] = rels;

    FocusState::Raw focus = engine.focus_.raw();
    json jf;
    jf["current_scene"] = focus.current_scene.v;
    jf["clock"] = focus.clock;
    json inst_w = json::object(), inst_s = json::object();
    for (const auto& [id, w] : focus.inst_w) inst_w[std::to_string(id.v)] = w;
    for (const auto& [id, s] : focus.inst_s) inst_s[std::to_string(id.v)] = s;
    json vi_w = json::object(), vi_s = json::object();
    for (const auto& [id, w] : focus.vi_w) vi_w[std::to_string(id.v)] = w;
    for (const auto& [id, s] : focus.vi_s) vi_s[std::to_string(id.v)] = s;
    jf["instance_weights"] = inst_w;
    jf["instance_salience"] = inst_s;
    jf["vi_weights"] = vi_w;
    jf["vi_salience"] = vi_s;
    json tomb_i = json::array(), tomb_v = json::array(), cons = json::array();
    for (InstanceId id : focus.tomb_inst) tomb_i.push_back(id.v);
    for (ViId id : focus.tomb_vi) tomb_v.push_back(id.v);
    for (InstanceId id : focus.consumed) cons.push_back(id.v);
    jf["tombstoned_instances"] = tomb_i;
    jf["tombstoned_vis"] = tomb_v;
    jf["consumed"] = cons;
    j["focus"] = jf;

    MemoryStore::Raw mem = engine.memory_.raw();
    json jm;
    json mem_insts = json::array();
    for (const MemInstance& m : mem.instances)
        mem_insts.push_back({{"id", m.id.v},
                             {"scene", m.scene.v},
                             {"attrs", overlay_to_json(m.attributes)},
                             {"salience", m.salience},
                             {"created_at", m.created_at}});
    jm["instances"] = mem_insts;
    json mem_vis = json::array();
    for (const MemVi& m : mem.vis)
        mem_vis.push_back({{"id", m.id.v},
                           {"kind", vi_kind_name(m.kind)},
                           {"verb", overlay_to_json(m.verb)},
                           {"subject", m.subject.v},
                           {"object", m.object.v},
                           {"modifier", overlay_to_json(m.modifier)},
                           {"quoted", m.quoted.v},
                           {"quote_scene", m.quote_scene.v},
                           {"scene", m.scene.v},
                           {"salience", m.salience},
                           {"created_at", m.created_at},
                           {"is_relation", m.is_relation},
                           {"question", m.question}});
    jm["vis"] = mem_vis;
    json links = json::array();
    for (const auto& link : mem.links)
        links.push_back({{"from", link.from.v},
                         {"to", link.to.v},
                         {"kind", static_cast<int>(link.kind)},
                         {"strength", link.strength}});
    jm["links"] = links;
    json hist = json::object();
    for (const auto& [scene, dq] : mem.scene_history) {
        json arr = json::array();
        for (ViId id : dq) arr.push_back(id.v);
        hist[std::to_string(scene.v)] = arr;
    }
    jm["scene_history"] = hist;
    json open_q = json::object();
    for (const auto& [scene, qs] : mem.open_questions) {
        json arr = json::array();
        for (const auto& [vi, speaker] : qs) arr.push_back({{"vi", vi.v}, {"speaker", speaker.v}});
        open_q[std::to_string(scene.v)] = arr;
    }
    jm["open_questions"] = open_q;
    json pend_ctx = json::object();
    for (const auto& [rel, froms] : mem.pending_context) {
        json arr = json::array();
        for (const auto& [from, w] : froms) arr.push_back({{"from", from.v}, {"w", w}});
        pend_ctx[std::to_string(rel.v)] = arr;
    }
    jm["pending_context"] = pend_ctx;
    json pend_sum = json::object();
    for (const auto& [head, members] : mem.pending_summary) {
        json arr = json::array();
        for (ViId id : members) arr.push_back(id.v);
        pend_sum[std::to_string(head.v)] = arr;
    }
    jm["pending_summary"] = pend_sum;
    j["memory"] = jm;

    json inst_shadows = json::array();
    for (const auto& [head, shadow] : engine.shadows_.instance_shadows())
        inst_shadows.push_back(
            {{"head", head.v}, {"pool", shadow.pool}, {"body", body_to_json(shadow.body)}});
    json vi_shadows = json::array();
    for (const auto& [head, shadow] : engine.shadows_.vi_shadows())
        vi_shadows.push_back(
            {{"head", head.v}, {"pool", shadow.pool}, {"body", body_to_json(shadow.body)}});
    j["shadows"] = {{"instances", inst_shadows}, {"vis", vi_shadows}};

    json eng;
    json pend = json::object();
    for (const auto& [vi, rels2] : engine.pending_context_) {
        json arr = json::array();
        for (const auto& [rel, w] : rels2) arr.push_back({{"vi", rel.v}, {"w", w}});
        pend[std::to_string(vi.v)] = arr;
    }
    eng["pending_context"] = pend;
    json sum_of = json::object();
    for (const auto& [vi, head] : engine.summary_of_)
        sum_of[std::to_string(vi.v)] = head.v;
    eng["summary_of"] = sum_of;
    eng["awaiting_summary_head"] = engine.awaiting_summary_head_;
    eng["summary_head"] = engine.summary_head_.v;
    eng["last_surprise"] = engine.last_surprise_;
    eng["last_expectedness"] = engine.last_expectedness_;
    j["engine"] = eng;

    return j;
}

Engine EngineSnapshot::load(const json& j, std::shared_ptr<const DomainLibrary> lib,
                            Params params) {
    if (j.value("format", "") != std::string("story-engine-session"))
        throw Error("snapshot: not a session file");
    if (j.at("library").at("atom_count").get<std::size_t>() != lib->vocab.size() ||
        j.at("library").at("fingerprint").get<std::uint64_t>() != library_fingerprint(*lib))
        throw Error("snapshot: domain library does not match the session");

    Engine engine(lib, params);
    World& world = engine.world_;

    for (const auto& d : j.at("dynamic_atoms")) {
        if (d.at("proper").get<bool>())
            world.vocab().add_proper_atom(d.at("name").get<std::string>());
        else if (d.at("text").get<bool>())
            world.vocab().add_text_atom(d.at("name").get<std::string>());
        else
            throw Error("snapshot: dynamic atom is neither proper nor text");
    }

    // scene 1 ("Main") already exists from the constructor
    const auto& scenes = j.at("scenes");
    for (std::size_t i = 1; i < scenes.size(); ++i)
        world.create_scene(scenes[i].at("label").get<std::string>());

    for (const auto& inst : j.at("instances"))
        world.create_instance(SceneId{inst.at("scene").get<std::uint64_t>()},
                              overlay_from_json(inst.at("attrs")),
                              inst.at("created_at").get<double>());

    for (const auto& v : j.at("vis")) {
        VerbInstance draft;
        draft.kind = vi_kind_from(v.at("kind").get<std::string>());
        draft.verb = overlay_from_json(v.at("verb"));
        draft.subject = InstanceId{v.at("subject").get<std::uint64_t>()};
        draft.object = InstanceId{v.at("object").get<std::uint64_t>()};
        draft.modifier = overlay_from_json(v.at("modifier"));
        draft.quoted = ViId{v.at("quoted").get<std::uint64_t>()};
        draft.quote_scene = SceneId{v.at("quote_scene").get<std::uint64_t>()};
        draft.created_at = v.at("created_at").get<double>();
        draft.is_relation = v.at("is_relation").get<bool>();
        draft.question = v.at("question").get<bool>();
        world.create_vi(draft);
    }

    for (const auto& r : j.at("relations")) {
        auto kind = static_cast<RelationKind>(r.at("kind").get<int>());
        std::uint64_t from = r.at("from").get<std::uint64_t>();
        std::uint64_t to = r.at("to").get<std::uint64_t>();
        if (kind == RelationKind::SceneSuccession)
            world.relations().add_succession(SceneId{from}, SceneId{to});
        else if (kind == RelationKind::NonIdentity)
            world.relations().add_non_identity(InstanceId{from}, InstanceId{to});
        else
            world.relations().add_identity(InstanceId{from}, InstanceId{to}, kind);
    }

    const auto& jf = j.at("focus");
    FocusState::Raw focus;
    focus.current_scene = SceneId{jf.at("current_scene").get<std::uint64_t>()};
    focus.clock = jf.at("clock").get<double>();
    for (const auto& [key, value] : jf.at("instance_weights").items())
        focus.inst_w[InstanceId{std::stoull(key)}] = value.get<double>();
    for (const auto& [key, value] : jf.at("instance_salience").items())
        focus.inst_s[InstanceId{std::stoull(key)}] = value.get<double>();
    for (const auto& [key, value] : jf.at("vi_weights").items())
        focus.vi_w[ViId{std::stoull(key)}] = value.get<double>();
    for (const auto& [key, value] : jf.at("vi_salience").items())
        focus.vi_s[ViId{std::stoull(key)}] = value.get<double>();
    for (const auto& id : jf.at("tombstoned_instances"))
        focus.tomb_inst.insert(InstanceId{id.get<std::uint64_t>()});
    for (const auto& id : jf.at("tombstoned_vis"))
        focus.tomb_vi.insert(ViId{id.get<std::uint64_t>()});
    for (const auto& id : jf.at("consumed"))
        focus.consumed.insert(InstanceId{id.get<std::uint64_t>()});
    engine.focus_ = FocusState::from_raw(std::move(focus));

    const auto& jm = j.at("memory");
    MemoryStore::Raw mem;
    for (const auto& m : jm.at("instances"))
        mem.instances.push_back({InstanceId{m.at("id").get<std::uint64_t>()},
                                 SceneId{m.at("scene").get<std::uint64_t>()},
                                 overlay_from_json(m.at("attrs")),
                                 m.at("salience").get<double>(),
                                 m.at("created_at").get<double>()});
    for (const auto& m : jm.at("vis")) {
        MemVi mv;
        mv.id = ViId{m.at("id").get<std::uint64_t>()};
        mv.kind = vi_kind_from(m.at("kind").get<std::string>());
        mv.verb = overlay_from_json(m.at("verb"));
        mv.subject = InstanceId{m.at("subject").get<std::uint64_t>()};
        mv.object = InstanceId{m.at("object").get<std::uint64_t>()};
        mv.modifier = overlay_from_json(m.at("modifier"));
        mv.quoted = ViId{m.at("quoted").get<std::uint64_t>()};
        mv.quote_scene = SceneId{m.at("quote_scene").get<std::uint64_t>()};
        mv.scene = SceneId{m.at("scene").get<std::uint64_t>()};
        mv.salience = m.at("salience").get<double>();
        mv.created_at = m.at("created_at").get<double>();
        mv.is_relation = m.at("is_relation").get<bool>();
        mv.question = m.at("question").get<bool>();
        mem.vis.push_back(std::move(mv));
    }
    for (const auto& link : jm.at("links"))
        mem.links.push_back({ViId{link.at("from").get<std::uint64_t>()},
                             ViId{link.at("to").get<std::uint64_t>()},
                             static_cast<SvrType>(link.at("kind").get<int>()),
                             link.at("strength").get<double>()});
    for (const auto& [key, value] : jm.at("scene_history").items()) {
        std::deque<ViId>& dq = mem.scene_history[SceneId{std::stoull(key)}];
        for (const auto& id : value) dq.push_back(ViId{id.get<std::uint64_t>()});
    }
    for (const auto& [key, value] : jm.at("open_questions").items()) {
        auto& qs = mem.open_questions[SceneId{std::stoull(key)}];
        for (const auto& q : value)
            qs.push_back({ViId{q.at("vi").get<std::uint64_t>()},
                          InstanceId{q.at("speaker").get<std::uint64_t>()}});
    }
    for (const auto& [key, value] : jm.at("pending_context").items()) {
        auto& froms = mem.pending_context[ViId{std::stoull(key)}];
        for (const auto& e : value)
            froms.push_back({ViId{e.at("from").get<std::uint64_t>()}, e.at("w").get<double>()});
    }
    for (const auto& [key, value] : jm.at("pending_summary").items()) {
        auto& members = mem.pending_summary[ViId{std::stoull(key)}];
        for (const auto& id : value) members.push_back(ViId{id.get<std::uint64_t>()});
    }
    engine.memory_ = MemoryStore::from_raw(std::move(mem));

    for (const auto& s : j.at("shadows").at("instances")) {
        Shadow shadow;
        shadow.pool = s.at("pool").get<double>();
        shadow.body = body_from_json(s.at("body"));
        engine.shadows_.instance_shadows().emplace(
            InstanceId{s.at("head").get<std::uint64_t>()}, std::move(shadow));
    }
    for (const auto& s : j.at("shadows").at("vis")) {
        Shadow shadow;
        shadow.pool = s.at("pool").get<double>();
        shadow.body = body_from_json(s.at("body"));
        engine.shadows_.vi_shadows().emplace(ViId{s.at("head").get<std::uint64_t>()},
                                             std::move(shadow));
    }

    const auto& eng = j.at("engine");
    for (const auto& [key, value] : eng.at("pending_context").items()) {
        auto& rels2 = engine.pending_context_[ViId{std::stoull(key)}];
        for (const auto& e : value)
            rels2.push_back({ViId{e.at("vi").get<std::uint64_t>()}, e.at("w").get<double>()});
    }
    for (const auto& [key, value] : eng.at("summary_of").items())
        engine.summary_of_[ViId{std::stoull(key)}] = ViId{value.get<std::uint64_t>()};
    engine.awaiting_summary_head_ = eng.at("awaiting_summary_head").get<bool>();
    engine.summary_head_ = ViId{eng.at("summary_head").get<std::uint64_t>()};
    engine.last_surprise_ = eng.at("last_surprise").get<double>();
    engine.last_expectedness_ = eng.at("last_expectedness").get<double>();

    engine.rebuild_hls();
    return engine;
}

}  // namespace story
