#include "story/hls.hpp"

#include <algorithm>
#include <cmath>

namespace story {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv(std::uint64_t& h, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= kFnvPrime;
    }
}

void fnv_overlay_atoms(std::uint64_t& h, const Overlay& o) {
    for (const auto& [atom, w] : o.weights) {
        (void)w;
        fnv(h, atom.v + 1);
    }
}

void fnv_part(std::uint64_t& h, const TemplatePart& p) {
    fnv(h, static_cast<std::uint64_t>(p.kind));
    switch (p.kind) {
        case TemplatePart::Kind::Bound: fnv(h, p.bound.v); break;
        case TemplatePart::Kind::New: fnv_overlay_atoms(h, p.attributes); break;
        default: break;
    }
}

}  // namespace

std::uint64_t template_key(const ViTemplate& t) {
    std::uint64_t h = kFnvOffset;
    fnv(h, static_cast<std::uint64_t>(t.kind));
    fnv_part(h, t.subject);
    fnv_part(h, t.object);
    if (auto dom = dominant_atom(t.verb)) fnv(h, dom->v + 1);
    if (auto dom = dominant_atom(t.modifier)) fnv(h, dom->v + 101);
    fnv(h, t.quote_scene.v);
    return h;
}

std::vector<Svr> compute_svrs(const FocusState& focus, const ShadowField& shadows,
                              const MemoryStore& memory, const Params& params) {
    std::vector<Svr> out;
    for (const auto& [fid, fw] : focus.vi_weights()) {
        (void)fw;
        if (!shadows.has_vi_shadow(fid)) continue;
        const Shadow& shadow = shadows.vi_shadow(fid);
        for (const auto& [raw_root, w_root] : shadow.body) {
            if (w_root < params.svr_threshold) continue;
            ViId root{raw_root};
            out.push_back({fid, root, root, SvrType::InShadow, w_root});
            for (int k = 1; k < kSvrTypeCount; ++k) {
                auto kind = static_cast<SvrType>(k);
                for (const auto& [nid, strength] : memory.neighbors(root, kind))
                    out.push_back({fid, root, nid, kind, w_root * strength});
            }
        }
    }
    return out;
}

namespace {

struct Binding {
    TemplatePart part;
    double weight = 0.0;
    std::uint64_t order = 0;  // deterministic tie-break
};

// Candidate bindings of one source instance, weights normalized to sum 1.
std::vector<Binding> bind_part(InstanceId source_part, const MemVi& root,
                               const VerbInstance& focus_vi, const World& world,
                               const MemoryStore& memory, const ShadowField& shadows,
                               const FocusState& focus, const Params& params) {
    std::vector<Binding> out;

    // alignment with the root: same position in the focus head
    if (root.kind == focus_vi.kind) {
        std::vector<std::pair<InstanceId, InstanceId>> aligned{{root.subject, focus_vi.subject}};
        if (root.kind == ViKind::Svo) aligned.push_back({root.object, focus_vi.object});
        for (const auto& [mem_part, focus_part] : aligned) {
            if (mem_part == source_part) {
                TemplatePart p;
                p.kind = TemplatePart::Kind::Bound;
                p.bound = focus_part;
                out.push_back({p, 1.0, focus_part.v});
                return out;
            }
        }
    }

    // still in focus: bind directly
    if (focus.has_instance(source_part)) {
        TemplatePart p;
        p.kind = TemplatePart::Kind::Bound;
        p.bound = source_part;
        out.push_back({p, 1.0, source_part.v});
        return out;
    }

    // reverse shadowing
    double total = 0.0;
    for (const auto& [head, w] : shadows.reverse_instance_lookup(source_part)) {
        TemplatePart p;
        p.kind = TemplatePart::Kind::Bound;
        p.bound = head;
        out.push_back({p, w, head.v});
        total += w;
    }
    TemplatePart fresh;
    fresh.kind = TemplatePart::Kind::New;
    if (memory.has_instance(source_part))
        fresh.attributes = memory.instance(source_part).attributes;
    else if (world.has_instance(source_part))
        fresh.attributes = world.instance(source_part).attributes;
    out.push_back({fresh, params.new_binding_weight, 0});
    total += params.new_binding_weight;

    if (total > 0.0)
        for (Binding& b : out) b.weight /= total;
    std::sort(out.begin(), out.end(), [](const Binding& a, const Binding& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.order < b.order;
    });
    return out;
}

}  // namespace

std::vector<Svri> interpret_svr(const Svr& svr, const World& world,
                                const MemoryStore& memory, const ShadowField& shadows,
                                const FocusState& focus, const Params& params) {
    const MemVi& source = memory.vi(svr.source);
    const MemVi& root = memory.vi(svr.root);
    const VerbInstance& fvi = world.vi(svr.focus_vi);

    ViTemplate base;
    base.kind = source.kind;
    base.verb = source.verb;
    base.modifier = source.modifier;
    if (source.kind == ViKind::Quote) {
        base.object.kind = TemplatePart::Kind::Placeholder;
        base.quote_scene = fvi.kind == ViKind::Quote ? fvi.quote_scene : focus.current_scene();
    }

    auto subject_bindings =
        bind_part(source.subject, root, fvi, world, memory, shadows, focus, params);
    std::vector<Binding> object_bindings;
    if (source.kind == ViKind::Svo)
        object_bindings =
            bind_part(source.object, root, fvi, world, memory, shadows, focus, params);

    struct Reading {
        std::size_t si = 0, oi = 0;
        double weight = 0.0;
    };
    std::vector<Reading> readings;
    for (std::size_t si = 0; si < subject_bindings.size(); ++si) {
        if (object_bindings.empty()) {
            readings.push_back({si, 0, subject_bindings[si].weight});
        } else {
            for (std::size_t oi = 0; oi < object_bindings.size(); ++oi)
                readings.push_back(
                    {si, oi, subject_bindings[si].weight * object_bindings[oi].weight});
        }
    }
    std::sort(readings.begin(), readings.end(), [&](const Reading& a, const Reading& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.si != b.si) return a.si < b.si;
        return a.oi < b.oi;
    });
    if (readings.size() > static_cast<std::size_t>(params.interpretation_cap))
        readings.resize(params.interpretation_cap);

    std::vector<Svri> out;
    for (const Reading& r : readings) {
        if (r.weight <= 0.0) continue;
        Svri svri;
        svri.svr = svr;
        svri.tmpl = base;
        svri.tmpl.subject = subject_bindings[r.si].part;
        if (!object_bindings.empty()) svri.tmpl.object = object_bindings[r.oi].part;
        svri.weight = svr.strength * r.weight;
        if (svri.weight > 0.0) out.push_back(std::move(svri));
    }
    return out;
}

namespace {

bool parts_compatible(const TemplatePart& a, const TemplatePart& b,
                      const Vocabulary& vocab, const Params& params) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case TemplatePart::Kind::None:
        case TemplatePart::Kind::Placeholder: return true;
        case TemplatePart::Kind::Bound: return a.bound == b.bound;
        case TemplatePart::Kind::New:
            return overlay_similarity(vocab, a.attributes, b.attributes) >=
                   params.new_threshold;
    }
    return false;
}

bool template_compatible(const ViTemplate& t, const Hls& hls, const Vocabulary& vocab,
                         const Params& params) {
    if (t.kind != hls.tmpl.kind) return false;
    if (!parts_compatible(t.subject, hls.tmpl.subject, vocab, params)) return false;
    if (!parts_compatible(t.object, hls.tmpl.object, vocab, params)) return false;
    if (t.kind == ViKind::Quote && t.quote_scene != hls.tmpl.quote_scene) return false;
    if (t.kind == ViKind::IsaAdj || t.kind == ViKind::ActionAdverb) {
        if (t.modifier.empty() != hls.tmpl.modifier.empty()) return false;
        if (!t.modifier.empty() &&
            overlay_similarity(vocab, t.modifier, hls.tmpl.modifier) < params.new_threshold)
            return false;
    }
    if (overlay_similarity(vocab, t.verb, hls.tmpl.verb) < params.verb_threshold)
        return false;
    return true;
}

}  // namespace

std::vector<Hls> cluster_into_hls(std::vector<Svri> svris, const Vocabulary& vocab,
                                  const Params& params) {
    std::sort(svris.begin(), svris.end(), [](const Svri& a, const Svri& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.svr.focus_vi != b.svr.focus_vi) return a.svr.focus_vi < b.svr.focus_vi;
        if (a.svr.root != b.svr.root) return a.svr.root < b.svr.root;
        if (a.svr.source != b.svr.source) return a.svr.source < b.svr.source;
        return static_cast<int>(a.svr.type) < static_cast<int>(b.svr.type);
    });

    std::vector<Hls> out;
    // running weight-averaged verb per HLS
    std::vector<std::pair<Overlay, double>> verb_acc;  // (sum of w*verb, sum w)
    for (Svri& svri : svris) {
        bool placed = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!template_compatible(svri.tmpl, out[i], vocab, params)) continue;
            auto& [acc, total] = verb_acc[i];
            for (const auto& [atom, w] : svri.tmpl.verb.weights) {
                acc.kind = svri.tmpl.verb.kind;
                acc.weights[atom] += svri.weight * w;
            }
            total += svri.weight;
            out[i].tmpl.verb.kind = acc.kind;
            out[i].tmpl.verb.weights.clear();
            for (const auto& [atom, w] : acc.weights)
                if (w > 0.0) out[i].tmpl.verb.weights[atom] = std::min(1.0, w / total);
            out[i].members.push_back(std::move(svri));
            placed = true;
            break;
        }
        if (!placed) {
            Hls hls;
            hls.tmpl = svri.tmpl;
            Overlay acc = svri.tmpl.verb;
            for (auto& [atom, w] : acc.weights) w *= svri.weight;
            verb_acc.push_back({acc, svri.weight});
            hls.members.push_back(std::move(svri));
            out.push_back(std::move(hls));
        }
    }
    return out;
}

void score_hls(Hls& hls, const Params& params) {
    double cont = 0.0, missing = 0.0;
    for (const Svri& m : hls.members) {
        cont += m.weight * params.coef(m.svr.type, Purpose::Continuation);
        missing += m.weight * params.coef(m.svr.type, Purpose::MissingAction);
    }
    hls.support_continuation = std::max(0.0, cont);
    hls.support_missing = std::max(0.0, missing);
}

std::vector<Hls> build_hls(const World& world, const MemoryStore& memory,
                           const FocusState& focus, const ShadowField& shadows,
                           const Params& params) {
    std::vector<Svri> svris;
    for (const Svr& svr : compute_svrs(focus, shadows, memory, params)) {
        auto interpreted = interpret_svr(svr, world, memory, shadows, focus, params);
        svris.insert(svris.end(), interpreted.begin(), interpreted.end());
    }
    auto pool = cluster_into_hls(std::move(svris), world.vocab(), params);
    for (Hls& h : pool) score_hls(h, params);
    return pool;
}

std::vector<std::pair<const Hls*, double>> rank_hls(const std::vector<Hls>& pool,
                                                    Purpose purpose, std::size_t k) {
    std::vector<std::pair<const Hls*, double>> ranked;
    for (const Hls& h : pool) {
        double s = h.support(purpose);
        if (s > 0.0) ranked.push_back({&h, s});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return template_key(a.first->tmpl) < template_key(b.first->tmpl);
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

namespace {

bool part_matches_vi(const TemplatePart& part, InstanceId actual,
                     const std::set<InstanceId>& fresh_instances) {
    switch (part.kind) {
        case TemplatePart::Kind::Bound: return part.bound == actual;
        case TemplatePart::Kind::New: return fresh_instances.count(actual) != 0;
        default: return false;
    }
}

}  // namespace

const Hls* match_incoming(const VerbInstance& vi, const std::vector<Hls>& pool,
                          const World& world, const std::set<InstanceId>& fresh_instances,
                          const Params& params, double* expectedness) {
    const Hls* best = nullptr;
    double best_support = 0.0;
    for (const Hls& h : pool) {
        if (h.tmpl.kind != vi.kind) continue;
        if (h.support_continuation <= 0.0) continue;
        if (!part_matches_vi(h.tmpl.subject, vi.subject, fresh_instances)) continue;
        if (vi.kind == ViKind::Svo &&
            !part_matches_vi(h.tmpl.object, vi.object, fresh_instances))
            continue;
        if (vi.kind == ViKind::Quote && h.tmpl.quote_scene != vi.quote_scene) continue;
        if ((vi.kind == ViKind::IsaAdj || vi.kind == ViKind::ActionAdverb) &&
            overlay_similarity(world.vocab(), h.tmpl.modifier, vi.modifier) <
                params.match_threshold)
            continue;
        if (overlay_similarity(world.vocab(), h.tmpl.verb, vi.verb) < params.match_threshold)
            continue;
        if (h.support_continuation > best_support ||
            (h.support_continuation == best_support && best &&
             template_key(h.tmpl) < template_key(best->tmpl))) {
            best = &h;
            best_support = h.support_continuation;
        }
    }
    if (expectedness) *expectedness = best ? best_support : 0.0;
    return best;
}

std::map<ViId, double> positive_source_seeds(const Hls& hls, const Params& params) {
    std::map<ViId, double> seeds;
    for (const Svri& m : hls.members) {
        double contribution = m.weight * params.coef(m.svr.type, Purpose::Continuation);
        if (contribution > 0.0) seeds[m.svr.source] += contribution;
    }
    return seeds;
}

std::string render_template(const ViTemplate& t, const World& world,
                            const DomainLibrary& lib) {
    const Vocabulary& vocab = world.vocab();

    // dynamic atoms (proper names, text) live past the library's atom table
    auto word_of = [&](AtomId a) {
        return a.v < lib.vocab.size() ? lib.word_for(a) : vocab.info(a).name;
    };

    auto render_overlay = [&](const Overlay& o) {
        std::vector<std::pair<double, AtomId>> atoms;
        for (const auto& [a, w] : o.weights) atoms.push_back({w, a});
        std::sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        std::string s;
        for (const auto& [w, a] : atoms) {
            if (w < 0.3 && !s.empty()) break;
            if (!s.empty()) s += ' ';
            s += word_of(a);
        }
        return s.empty() ? std::string("?") : s;
    };

    auto render_attrs = [&](const Overlay& o, const char* article) {
        for (const auto& [a, w] : o.weights) {
            (void)w;
            if (vocab.info(a).proper) return '"' + vocab.info(a).name + '"';
        }
        for (const auto& [a, w] : o.weights) {
            (void)w;
            if (vocab.info(a).text) return "text \"" + vocab.info(a).name + '"';
        }
        if (auto dom = dominant_atom(o))
            return std::string(article) + " " + word_of(*dom);
        return std::string(article) + " ?";
    };

    auto render_part = [&](const TemplatePart& p) -> std::string {
        switch (p.kind) {
            case TemplatePart::Kind::Bound: {
                const Instance& inst = world.instance(p.bound);
                return render_attrs(inst.attributes, "the");
            }
            case TemplatePart::Kind::New: return render_attrs(p.attributes, "a");
            case TemplatePart::Kind::Placeholder: return "[x]";
            case TemplatePart::Kind::None: return "";
        }
        return "";
    };

    std::string out = render_part(t.subject) + " / " + render_overlay(t.verb);
    switch (t.kind) {
        case ViKind::Svo: out += " / " + render_part(t.object); break;
        case ViKind::Sv: break;
        case ViKind::IsaAdj:
        case ViKind::ActionAdverb: out += " / " + render_overlay(t.modifier); break;
        case ViKind::Quote:
            out = render_part(t.subject) + " / " + render_overlay(t.verb) + " in scene \"" +
                  world.scene(t.quote_scene).label + "\" // [x]";
            break;
    }
    out += ".";
    return out;
}

}  // namespace story
