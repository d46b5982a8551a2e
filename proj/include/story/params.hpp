#pragma once

#include <array>
#include <map>
#include <string>

namespace story {

// SVR relation types; InShadow is the pairless ninth. The other eight keep
// their opposing-pair layout: opposite(k) flips the low bit.
enum class SvrType : int {
    InShadow = 0,
    Predecessor = 1,
    Successor = 2,
    Summary = 3,
    Elaboration = 4,
    Answer = 5,
    Question = 6,
    Context = 7,
    ContextImplication = 8,
};
constexpr int kSvrTypeCount = 9;

constexpr SvrType opposite(SvrType t) {
    switch (t) {
        case SvrType::Predecessor: return SvrType::Successor;
        case SvrType::Successor: return SvrType::Predecessor;
        case SvrType::Summary: return SvrType::Elaboration;
        case SvrType::Elaboration: return SvrType::Summary;
        case SvrType::Answer: return SvrType::Question;
        case SvrType::Question: return SvrType::Answer;
        case SvrType::Context: return SvrType::ContextImplication;
        case SvrType::ContextImplication: return SvrType::Context;
        case SvrType::InShadow: return SvrType::InShadow;
    }
    return t;
}

const char* svr_type_name(SvrType t);

enum class Purpose { Continuation, MissingAction };

// Diffusion-activity rates and the substep cap.
struct TickParams {
    double shadow_decay = 0.1;       // lambda_s
    double match_rate = 0.5;         // kappa_m
    double consistency_rate = 0.5;   // kappa_c
    double sharpen_rate = 0.3;       // kappa_sh
    double non_identity_rate = 0.3;  // kappa_n
    double identity_rate = 0.2;      // kappa_id
    double initial_pool = 1.0;       // E0
    double dt_max = 0.1;
};

struct Params {
    TickParams tick;

    // focus
    double focus_decay = 0.2;        // lambda_f
    double push_out = 0.3;           // gamma_push
    double expel_threshold = 0.05;   // theta_expel

    // memory
    int succession_window = 5;       // k_s

    // resolution
    double ref_threshold = 0.2;      // theta_ref

    // hls
    double svr_threshold = 0.02;     // theta_svr
    double verb_threshold = 0.8;     // theta_verb
    double new_threshold = 0.5;      // theta_new
    double match_threshold = 0.6;    // theta_match
    double new_binding_weight = 0.1; // nu
    int interpretation_cap = 8;      // M

    // story time per incorporated VI
    double event_dt = 1.0;

    // HLS support coefficients per purpose, indexed by SvrType.
    std::array<double, kSvrTypeCount> continuation_coef = {
        /*InShadow*/ -1.0, /*Predecessor*/ -0.5, /*Successor*/ 1.0,
        /*Summary*/ 0.0,   /*Elaboration*/ 0.5,  /*Answer*/ 1.0,
        /*Question*/ 0.0,  /*Context*/ 0.0,      /*ContextImplication*/ 0.5};
    std::array<double, kSvrTypeCount> missing_action_coef = {
        /*InShadow*/ -1.0, /*Predecessor*/ 1.0, /*Successor*/ -0.5,
        /*Summary*/ 0.0,   /*Elaboration*/ 0.0, /*Answer*/ 0.0,
        /*Question*/ 0.0,  /*Context*/ 0.0,     /*ContextImplication*/ 0.25};

    double coef(SvrType t, Purpose p) const {
        const auto& tab = p == Purpose::Continuation ? continuation_coef : missing_action_coef;
        return tab[static_cast<int>(t)];
    }

    // Applies "key=value"; throws Error on unknown key or bad value.
    void set(const std::string& key, const std::string& value);
    // Parses a key=value config file body (one pair per line, '#' comments).
    void apply_config(const std::string& body);

    std::map<std::string, double> numeric_view() const;
};

}  // namespace story
