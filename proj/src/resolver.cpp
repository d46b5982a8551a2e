#include "story/resolver.hpp"

#include <algorithm>

namespace story {

namespace {

struct QuoteContext {
    InstanceId speaker;
    SceneId speaker_scene;
    SceneId quote_scene;
};

class StatementResolver {
public:
    StatementResolver(World& world, FocusState& focus, const DomainLibrary& lib,
                      const Params& params, double now)
        : world_(world), focus_(focus), lib_(lib), params_(params), now_(now) {}

    Resolution run(const xapi::Statement& st) {
        Clause out = resolve_clause(st.main, focus_.current_scene(), nullptr, st);
        result_.vis.push_back(out.vi);
        return std::move(result_);
    }

private:
    struct Clause {
        ViId vi;
    };

    // -- word lookup -----------------------------------------------------

    Overlay words_overlay(const std::vector<std::string>& words, AtomKind expect) {
        Overlay merged;
        for (const auto& w : words) {
            if (!lib_.has_word(w)) throw ResolveError("unknown word: " + w);
            const Overlay& o = lib_.lookup_word(w);
            if (o.kind != expect)
                throw ResolveError(expect == AtomKind::Concept
                                       ? "word '" + w + "' is not a concept"
                                       : "word '" + w + "' is not a verb");
            merged = overlay_merge(merged, o);
        }
        merged.kind = expect;
        return merged;
    }

    std::optional<Metaverb> single_metaverb(const Overlay& verb) {
        std::optional<Metaverb> found;
        for (const auto& [atom, w] : verb.weights) {
            (void)w;
            if (auto mv = lib_.metaverb_of(atom)) {
                if (found && *found != *mv)
                    throw ResolveError("verb phrase mixes two metaverbs");
                found = mv;
            }
        }
        return found;
    }

    // -- instance creation / reference ------------------------------------

    InstanceId create_instance(SceneId scene, Overlay attrs) {
        InstanceId id = world_.create_instance(scene, std::move(attrs), now_);
        focus_.add_instance(id);
        result_.created.insert(id);
        return id;
    }

    // Best focus instance of the scene for the query, or null.
    std::optional<InstanceId> bind_definite(SceneId scene, const Overlay& query) {
        std::optional<InstanceId> best;
        double best_score = 0.0;
        for (InstanceId cand : world_.scene(scene).members) {
            if (!focus_.has_instance(cand)) continue;
            double score = coverage_match(world_.vocab(), world_.instance(cand).attributes,
                                          query) *
                           focus_.instance_weight(cand);
            if (score > best_score) {
                best_score = score;
                best = cand;
            }
        }
        if (best_score < params_.ref_threshold) return std::nullopt;
        return best;
    }

    InstanceId resolve_part(const xapi::PartRef& part, SceneId scene,
                            const QuoteContext* quote) {
        using Form = xapi::PartRef::Form;
        switch (part.form) {
            case Form::Definite: {
                Overlay query = words_overlay(part.words, AtomKind::Concept);
                if (auto hit = bind_definite(scene, query)) return *hit;
                throw ResolveError("unresolved reference 'the " + part.words[0] + "'");
            }
            case Form::Indefinite:
                return create_instance(scene, words_overlay(part.words, AtomKind::Concept));
            case Form::Proper: {
                AtomId atom = world_.vocab().add_proper_atom(part.name);
                Overlay query = make_overlay(AtomKind::Concept, {{atom, 1.0}});
                if (auto hit = bind_definite(scene, query)) return *hit;
                return create_instance(scene, query);
            }
            case Form::PronounI: return resolve_pronoun_i(scene, quote);
            case Form::Chain: return resolve_chain(part, scene, quote);
            case Form::Text: {
                AtomId atom = world_.vocab().add_text_atom(part.text);
                return create_instance(scene,
                                       make_overlay(AtomKind::Concept, {{atom, 1.0}}));
            }
        }
        throw ResolveError("unhandled part form");
    }

    InstanceId resolve_pronoun_i(SceneId scene, const QuoteContext* quote) {
        if (!quote) {
            // first-person narration: a per-scene self instance named "I"
            AtomId atom = world_.vocab().add_proper_atom("I");
            Overlay query = make_overlay(AtomKind::Concept, {{atom, 1.0}});
            if (auto hit = bind_definite(scene, query)) return *hit;
            return create_instance(scene, query);
        }
        // inside a quote: the speaker's counterpart in the quote scene
        if (quote->quote_scene == quote->speaker_scene) return quote->speaker;
        for (InstanceId linked : world_.relations().identity_neighbors(quote->speaker)) {
            if (world_.instance(linked).scene == quote->quote_scene &&
                focus_.has_instance(linked))
                return linked;
        }
        // create the counterpart, carrying the speaker's proper names (or, if
        // unnamed, the speaker's attributes) and an identity link
        const Overlay& src = world_.instance(quote->speaker).attributes;
        Overlay attrs;
        attrs.kind = AtomKind::Concept;
        for (const auto& [atom, w] : src.weights)
            if (world_.vocab().info(atom).proper) attrs.set(atom, w);
        if (attrs.empty()) attrs = src;
        InstanceId fresh = create_instance(quote->quote_scene, attrs);
        world_.relations().add_identity(quote->speaker, fresh,
                                        RelationKind::IdentityFictional);
        return fresh;
    }

    InstanceId resolve_chain(const xapi::PartRef& part, SceneId scene,
                             const QuoteContext* quote) {
        InstanceId tail = resolve_part(*part.chain_tail, scene, quote);
        auto rel_atom = world_.vocab().find(part.chain_relation);
        if (!rel_atom || world_.vocab().kind(*rel_atom) != AtomKind::Verb)
            throw ResolveError("chain relation '" + part.chain_relation +
                               "' is not a declared verb");
        Overlay rel_verb = make_overlay(AtomKind::Verb, {{*rel_atom, 1.0}});

        const xapi::PartRef& head = *part.chain_head;
        Overlay head_query;
        if (head.form == xapi::PartRef::Form::Definite ||
            head.form == xapi::PartRef::Form::Indefinite)
            head_query = words_overlay(head.words, AtomKind::Concept);
        else
            throw ResolveError("chain head must be a plain part");

        // an in-focus relation VI (head --rel--> tail) wins the reference
        if (head.form == xapi::PartRef::Form::Definite) {
            std::optional<InstanceId> hit;
            double best = 0.0;
            for (const auto& [vid, vw] : focus_.vi_weights()) {
                const VerbInstance& rv = world_.vi(vid);
                if (!rv.is_relation || rv.kind != ViKind::Svo) continue;
                if (rv.object != tail || rv.verb.weight(*rel_atom) <= 0.0) continue;
                if (!focus_.has_instance(rv.subject)) continue;
                double score =
                    coverage_match(world_.vocab(), world_.instance(rv.subject).attributes,
                                   head_query) *
                    focus_.instance_weight(rv.subject);
                (void)vw;
                if (score > best) {
                    best = score;
                    hit = rv.subject;
                }
            }
            if (best >= params_.ref_threshold && hit) return *hit;
        }

        InstanceId head_inst = create_instance(scene, head_query);
        VerbInstance rel;
        rel.kind = ViKind::Svo;
        rel.verb = rel_verb;
        rel.subject = head_inst;
        rel.object = tail;
        rel.is_relation = true;
        rel.created_at = now_;
        result_.vis.push_back(world_.create_vi(rel));
        return head_inst;
    }

    // -- clauses -----------------------------------------------------------

    Clause resolve_clause(const xapi::Clause& clause, SceneId scene,
                          const QuoteContext* quote, const xapi::Statement& st) {
        Overlay verb = words_overlay(clause.verb.words, AtomKind::Verb);
        auto metaverb = single_metaverb(verb);
        bool is_quote_verb =
            metaverb && (*metaverb == Metaverb::Says || *metaverb == Metaverb::Asks);

        if (is_quote_verb) {
            if (quote) throw ResolveError("nested quotes are not supported");
            if (!st.quoted) throw ResolveError("quote verb without a quoted clause");
            if (clause.object) throw ResolveError("quote inquit cannot take an object");
            if (!clause.verb.scene_label)
                throw ResolveError("quote without a quote scene");
            return resolve_quote(clause, scene, st);
        }
        if (&clause == &st.main && st.quoted)
            throw ResolveError("quoted clause requires a quote metaverb");

        InstanceId subject = resolve_part(clause.subject, scene, quote);

        VerbInstance vi;
        vi.verb = verb;
        vi.subject = subject;
        vi.question = clause.verb.wh;
        vi.created_at = now_;

        if (metaverb && *metaverb == Metaverb::IsA) {
            if (!clause.object) throw ResolveError("is-a requires an attribute part");
            vi.kind = ViKind::IsaAdj;
            vi.modifier = modifier_overlay(*clause.object, AtomKind::Concept);
        } else if (metaverb && *metaverb == Metaverb::ActionIs) {
            if (!clause.object) throw ResolveError("action-is requires an adverb part");
            vi.kind = ViKind::ActionAdverb;
            vi.modifier = modifier_overlay(*clause.object, AtomKind::Verb);
        } else if (clause.object) {
            vi.kind = ViKind::Svo;
            vi.object = resolve_part(*clause.object, scene, quote);
        } else {
            vi.kind = ViKind::Sv;
        }
        return {world_.create_vi(vi)};
    }

    // is-a / action-is attribute parts: bare words, a proper name, or text
    Overlay modifier_overlay(const xapi::PartRef& part, AtomKind expect) {
        using Form = xapi::PartRef::Form;
        if (part.form == Form::Proper && expect == AtomKind::Concept) {
            AtomId atom = world_.vocab().add_proper_atom(part.name);
            return make_overlay(AtomKind::Concept, {{atom, 1.0}});
        }
        if (part.form == Form::Definite || part.form == Form::Indefinite)
            return words_overlay(part.words, expect);
        throw ResolveError("attribute part must be plain words or a proper name");
    }

    Clause resolve_quote(const xapi::Clause& inquit, SceneId scene,
                         const xapi::Statement& st) {
        InstanceId speaker = resolve_part(inquit.subject, scene, nullptr);
        SceneId quote_scene;
        if (auto existing = world_.find_scene(*inquit.verb.scene_label))
            quote_scene = *existing;
        else
            quote_scene = world_.create_scene(*inquit.verb.scene_label);

        QuoteContext ctx{speaker, world_.instance(speaker).scene, quote_scene};
        Clause quoted = resolve_clause(*st.quoted, quote_scene, &ctx, st);
        result_.vis.push_back(quoted.vi);

        VerbInstance vi;
        vi.kind = ViKind::Quote;
        vi.verb = words_overlay(inquit.verb.words, AtomKind::Verb);
        vi.subject = speaker;
        vi.quoted = quoted.vi;
        vi.quote_scene = quote_scene;
        vi.question = st.quoted->verb.wh || inquit.verb.wh;
        vi.created_at = now_;
        return {world_.create_vi(vi)};
    }

    World& world_;
    FocusState& focus_;
    const DomainLibrary& lib_;
    const Params& params_;
    double now_;
    Resolution result_;
};

}  // namespace

Resolution resolve_statement(const xapi::Statement& st, World& world, FocusState& focus,
                             const DomainLibrary& lib, const Params& params, double now) {
    if (!focus.current_scene().valid()) throw ResolveError("no current scene");
    return StatementResolver(world, focus, lib, params, now).run(st);
}

}  // namespace story
