#pragma once

#include "story/shadow.hpp"

namespace story {

// One slot of an instantiable VI template.
struct TemplatePart {
    enum class Kind { None, Bound, New, Placeholder };
    Kind kind = Kind::None;
    InstanceId bound;   // Bound: an in-focus instance
    Overlay attributes; // New: attributes the fresh instance would carry
};

struct ViTemplate {
    ViKind kind = ViKind::Sv;
    Overlay verb;
    TemplatePart subject;
    TemplatePart object;   // Svo: Bound/New; Quote: Placeholder ([x])
    Overlay modifier;      // IsaAdj / ActionAdverb
    SceneId quote_scene;   // Quote
};

// Stable identity of a template for tie-breaks and support diffing.
std::uint64_t template_key(const ViTemplate& t);

// The quadruplet: focus VI, shadow root, related source, relation type.
struct Svr {
    ViId focus_vi;
    ViId root;    // in the shadow of focus_vi
    ViId source;  // root itself (InShadow) or a memory neighbor of root
    SvrType type = SvrType::InShadow;
    double strength = 0.0;  // shadow participation of root x link strength
};

// One concrete reading of an SVR's source as an instantiable template.
struct Svri {
    Svr svr;
    ViTemplate tmpl;
    double weight = 0.0;  // svr.strength x product of part binding weights
};

struct Hls {
    ViTemplate tmpl;
    std::vector<Svri> members;
    double support_continuation = 0.0;
    double support_missing = 0.0;

    double support(Purpose p) const {
        return p == Purpose::Continuation ? support_continuation : support_missing;
    }
};

// For every focus VI shadow: an InShadow SVR per body item above the
// threshold, plus one SVR per memory link of that item. Deterministic order.
std::vector<Svr> compute_svrs(const FocusState& focus, const ShadowField& shadows,
                              const MemoryStore& memory, const Params& params);

// Reverse shadowing: aligned source parts bind to the matching focus part;
// parts still in focus bind directly; everything else is weighed by the
// shadows it appears in, with a NEW(source attributes) candidate at nu.
// The cartesian product is capped at the top interpretation_cap readings.
std::vector<Svri> interpret_svr(const Svr& svr, const World& world,
                                const MemoryStore& memory, const ShadowField& shadows,
                                const FocusState& focus, const Params& params);

// Greedy clustering in descending weight order; a member joins the first HLS
// with identical part bindings (NEW unifies at similarity >= theta_new) and
// verb similarity >= theta_verb. The HLS verb is the weight-averaged overlay.
std::vector<Hls> cluster_into_hls(std::vector<Svri> svris, const Vocabulary& vocab,
                                  const Params& params);

// Sum of member weight x coef(type, purpose), clamped at >= 0, both purposes.
void score_hls(Hls& hls, const Params& params);

// compute_svrs -> interpret -> cluster -> score.
std::vector<Hls> build_hls(const World& world, const MemoryStore& memory,
                           const FocusState& focus, const ShadowField& shadows,
                           const Params& params);

// Scored templates for one purpose, best first, positive support only.
std::vector<std::pair<const Hls*, double>> rank_hls(const std::vector<Hls>& pool,
                                                    Purpose purpose, std::size_t k);

// Best continuation HLS whose template matches the incoming VI (identical
// bindings, verb similarity >= theta_match); expectedness = its support.
// fresh_instances: instances created while resolving the current statement
// (these satisfy NEW slots).
const Hls* match_incoming(const VerbInstance& vi, const std::vector<Hls>& pool,
                          const World& world, const std::set<InstanceId>& fresh_instances,
                          const Params& params, double* expectedness);

// Body seeds for a shadow instantiated from a predicting HLS: the viSources of
// members with a positive continuation contribution, sum-normalized.
std::map<ViId, double> positive_source_seeds(const Hls& hls, const Params& params);

std::string render_template(const ViTemplate& t, const World& world,
                            const DomainLibrary& lib);

}  // namespace story
