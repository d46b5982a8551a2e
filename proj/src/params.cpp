#include "story/params.hpp"

#include <functional>
#include <sstream>

#include "story/error.hpp"

namespace story {

const char* svr_type_name(SvrType t) {
    switch (t) {
        case SvrType::InShadow: return "IN_SHADOW";
        case SvrType::Predecessor: return "PREDECESSOR";
        case SvrType::Successor: return "SUCCESSOR";
        case SvrType::Summary: return "SUMMARY";
        case SvrType::Elaboration: return "ELABORATION";
        case SvrType::Answer: return "ANSWER";
        case SvrType::Question: return "QUESTION";
        case SvrType::Context: return "CONTEXT";
        case SvrType::ContextImplication: return "CONTEXT_IMPLICATION";
    }
    return "?";
}

namespace {
std::map<std::string, std::function<double*(Params&)>> field_table() {
    std::map<std::string, std::function<double*(Params&)>> t;
    t["shadow_decay"] = [](Params& p) { return &p.tick.shadow_decay; };
    t["match_rate"] = [](Params& p) { return &p.tick.match_rate; };
    t["consistency_rate"] = [](Params& p) { return &p.tick.consistency_rate; };
    t["sharpen_rate"] = [](Params& p) { return &p.tick.sharpen_rate; };
    t["non_identity_rate"] = [](Params& p) { return &p.tick.non_identity_rate; };
    t["identity_rate"] = [](Params& p) { return &p.tick.identity_rate; };
    t["initial_pool"] = [](Params& p) { return &p.tick.initial_pool; };
    t["dt_max"] = [](Params& p) { return &p.tick.dt_max; };
    t["focus_decay"] = [](Params& p) { return &p.focus_decay; };
    t["push_out"] = [](Params& p) { return &p.push_out; };
    t["expel_threshold"] = [](Params& p) { return &p.expel_threshold; };
    t["ref_threshold"] = [](Params& p) { return &p.ref_threshold; };
    t["svr_threshold"] = [](Params& p) { return &p.svr_threshold; };
    t["verb_threshold"] = [](Params& p) { return &p.verb_threshold; };
    t["new_threshold"] = [](Params& p) { return &p.new_threshold; };
    t["match_threshold"] = [](Params& p) { return &p.match_threshold; };
    t["new_binding_weight"] = [](Params& p) { return &p.new_binding_weight; };
    t["event_dt"] = [](Params& p) { return &p.event_dt; };
    for (int i = 0; i < kSvrTypeCount; ++i) {
        std::string name = svr_type_name(static_cast<SvrType>(i));
        for (auto& ch : name) ch = static_cast<char>(std::tolower(ch));
        t["coef.continuation." + name] = [i](Params& p) { return &p.continuation_coef[i]; };
        t["coef.missing_action." + name] = [i](Params& p) { return &p.missing_action_coef[i]; };
    }
    return t;
}
}  // namespace

void Params::set(const std::string& key, const std::string& value) {
    double num = 0.0;
    try {
        std::size_t used = 0;
        num = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw Error("bad parameter value '" + value + "' for " + key);
    }
    if (key == "succession_window") {
        succession_window = static_cast<int>(num);
        return;
    }
    if (key == "interpretation_cap") {
        interpretation_cap = static_cast<int>(num);
        return;
    }
    static const auto table = field_table();
    auto it = table.find(key);
    if (it == table.end()) throw Error("unknown parameter '" + key + "'");
    *it->second(*this) = num;
}

void Params::apply_config(const std::string& body) {
    std::istringstream in(body);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(lineno) + ": expected key=value");
        auto strip = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
}

std::map<std::string, double> Params::numeric_view() const {
    std::map<std::string, double> out;
    static const auto table = field_table();
    Params& self = const_cast<Params&>(*this);
    for (const auto& [k, get] : table) out[k] = *get(self);
    out["succession_window"] = succession_window;
    out["interpretation_cap"] = interpretation_cap;
    return out;
}

}  // namespace story
