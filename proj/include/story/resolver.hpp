#pragma once

#include <set>

#include "story/focus.hpp"
#include "story/xapi.hpp"

namespace story {

// What one statement resolved to. VIs are in emission order (chain relation
// VIs, quoted-clause VIs, then the main VI); instances created on the way are
// already in the world and the focus.
struct Resolution {
    std::vector<ViId> vis;
    std::set<InstanceId> created;
};

// Resolves one parsed statement against the current focus. DEFINITE binds the
// best focus instance in the scene by attribute match x focus weight (>=
// theta_ref), INDEFINITE creates, PROPER binds-or-creates by the proper-name
// atom, quote-"I" binds the speaker's identity-linked counterpart in the quote
// scene. Throws ResolveError when a reference cannot be bound.
Resolution resolve_statement(const xapi::Statement& st, World& world, FocusState& focus,
                             const DomainLibrary& lib, const Params& params, double now);

}  // namespace story
