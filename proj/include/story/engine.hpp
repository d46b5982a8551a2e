#pragma once

#include <memory>

#include "story/hls.hpp"
#include "story/resolver.hpp"

namespace story {

struct ScoredTemplate {
    ViTemplate tmpl;
    double score = 0.0;
    std::string rendered;
};

// One JSON-lines record: emitted after each incorporated VI.
struct StepRecord {
    ViId vi;
    std::string rendered;
    double expectedness = 0.0;
    double surprise = 0.0;
    std::vector<ScoredTemplate> continuations;
    std::vector<ScoredTemplate> missing;
};

// The full agent: world + focus + memory + shadows + HLS pool, advanced one
// VI at a time. Copyable by value (REPL transactions, branch-and-compare).
class Engine {
public:
    Engine(std::shared_ptr<const DomainLibrary> lib, Params params);

    // Parses and runs a whole program; one record per incorporated VI.
    std::vector<StepRecord> run_source(const std::string& src, std::size_t top_k = 3);
    std::vector<StepRecord> run_program(const xapi::Program& program, std::size_t top_k = 3);
    // One item. Statement errors surface as exceptions; directives too.
    std::vector<StepRecord> run_item(const xapi::Item& item, std::size_t top_k = 3);

    void apply_directive(const xapi::Directive& d);

    // Autobiography boundary: settle, then move everything to memory.
    void flush_focus();

    // Story time with no events (REPL :step).
    void step_time(double dt);

    std::vector<ScoredTemplate> predictions(Purpose purpose, std::size_t k) const;

    double last_surprise() const { return last_surprise_; }
    double last_expectedness() const { return last_expectedness_; }

    const World& world() const { return world_; }
    World& world() { return world_; }
    const FocusState& focus() const { return focus_; }
    const MemoryStore& memory() const { return memory_; }
    MemoryStore& memory_for_setup() { return memory_; }  // test fixtures
    const ShadowField& shadows() const { return shadows_; }
    ShadowField& shadows_for_setup() { return shadows_; }  // test fixtures
    const std::vector<Hls>& hls_pool() const { return hls_pool_; }
    const DomainLibrary& lib() const { return *lib_; }
    std::shared_ptr<const DomainLibrary> lib_ptr() const { return lib_; }
    const Params& params() const { return params_; }

    std::string render_vi(ViId id) const;
    std::string render(const ViTemplate& t) const { return render_template(t, world_, *lib_); }

    // Rebuilds the HLS pool from the current state (after fixture setup).
    void rebuild_hls();

    // Incorporates one already-created VI (advances time, matches against the
    // HLS pool, inserts, ticks, recomputes HLS and surprise).
    void incorporate(ViId vi_id);

    friend struct EngineSnapshot;

private:
    void record_expelled(const std::vector<ExpelledItem>& items);
    void apply_side_effects(const VerbInstance& vi);
    std::string scene_label_from_object(const VerbInstance& vi) const;
    double shadow_abs_diff(
        const std::map<std::uint64_t, std::map<std::uint64_t, double>>& pre_inst,
        const std::map<std::uint64_t, std::map<std::uint64_t, double>>& pre_vi) const;

    std::shared_ptr<const DomainLibrary> lib_;
    Params params_;
    World world_;
    FocusState focus_;
    MemoryStore memory_;
    ShadowField shadows_;
    std::vector<Hls> hls_pool_;
    std::map<std::uint64_t, double> hls_supports_;  // template key -> continuation

    // insert-time context awaiting memory recording
    std::map<ViId, std::vector<std::pair<ViId, double>>> pending_context_;
    std::map<ViId, ViId> summary_of_;

    // summary span state
    bool awaiting_summary_head_ = false;
    ViId summary_head_;

    std::set<InstanceId> fresh_instances_;  // created by current statement

    double last_surprise_ = 0.0;
    double last_expectedness_ = 0.0;
};

}  // namespace story
