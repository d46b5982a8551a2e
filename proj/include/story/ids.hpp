#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace story {

// Strongly typed ids. 0 is the null id everywhere; real ids start at 1 and
// are never reused, so an id doubles as creation order.
template <class Tag>
struct Id {
    std::uint64_t v = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint64_t raw) : v(raw) {}

    constexpr bool valid() const { return v != 0; }
    friend constexpr auto operator<=>(Id, Id) = default;
};

struct InstanceTag {};
struct ViTag {};
struct SceneTag {};

using InstanceId = Id<InstanceTag>;
using ViId = Id<ViTag>;
using SceneId = Id<SceneTag>;

// Dense index into the atom table (library atoms first, dynamic atoms after).
struct AtomId {
    std::uint32_t v = 0;
    friend constexpr auto operator<=>(AtomId, AtomId) = default;
};

}  // namespace story

template <class Tag>
struct std::hash<story::Id<Tag>> {
    std::size_t operator()(story::Id<Tag> id) const noexcept {
        return std::hash<std::uint64_t>{}(id.v);
    }
};
