#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>

namespace bww {

/// Grouping of every model element into the five in-scope ontological
/// category families.
enum class CategoryTag {
  Intrinsic,
  Representational,
  PrimitiveRelational,
  Composition,
  Collection,
};

constexpr std::string_view to_string(CategoryTag tag) noexcept {
  switch (tag) {
    case CategoryTag::Intrinsic: return "Intrinsic";
    case CategoryTag::Representational: return "Representational";
    case CategoryTag::PrimitiveRelational: return "PrimitiveRelational";
    case CategoryTag::Composition: return "Composition";
    case CategoryTag::Collection: return "Collection";
  }
  return "Unknown";
}

/// Index into one of the Model registries. The tag keeps the namespaces apart
/// at compile time so a ThingId can never be passed where a StateId belongs.
template <typename Tag>
class Id {
 public:
  using value_type = std::uint32_t;

  constexpr Id() noexcept = default;
  constexpr explicit Id(value_type index) noexcept : index_(index) {}

  static constexpr Id invalid() noexcept { return Id{}; }

  [[nodiscard]] constexpr value_type index() const noexcept { return index_; }
  [[nodiscard]] constexpr bool valid() const noexcept { return index_ != kInvalid; }

  friend constexpr auto operator<=>(Id, Id) noexcept = default;

 private:
  static constexpr value_type kInvalid = std::numeric_limits<value_type>::max();
  value_type index_ = kInvalid;
};

struct PropertyTag {};
struct ThingTag {};
struct StateTag {};
struct SchemaTag {};
struct ClassTag {};
struct KindTag {};
struct ProcessTag {};

using PropertyId = Id<PropertyTag>;
using ThingId = Id<ThingTag>;
using StateId = Id<StateTag>;
using SchemaId = Id<SchemaTag>;
using ClassId = Id<ClassTag>;
using KindId = Id<KindTag>;
using ProcessId = Id<ProcessTag>;

/// The predefined null thing always occupies the first thing slot.
inline constexpr ThingId kNullThing{0};

struct TimePoint {
  std::uint64_t tick = 0;

  friend constexpr auto operator<=>(TimePoint, TimePoint) noexcept = default;
};

}  // namespace bww

template <typename Tag>
struct std::hash<bww::Id<Tag>> {
  std::size_t operator()(bww::Id<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.index());
  }
};
