#pragma once

#include "story/engine.hpp"

#include "json.hpp"

namespace story {

// Whole-session persistence. The domain library itself is not embedded; load
// verifies the supplied library matches the one the snapshot was taken with.
struct EngineSnapshot {
    static nlohmann::json save(const Engine& engine);
    static Engine load(const nlohmann::json& j, std::shared_ptr<const DomainLibrary> lib,
                       Params params);
};

}  // namespace story
