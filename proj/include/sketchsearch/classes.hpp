#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace sketchsearch {

/// The 23 doodle categories the recognizer distinguishes: 16 stylized icon
/// doodles followed by 7 free-form doodles.
enum class DoodleClass : std::uint8_t {
  Avatar,
  Back,
  Cancel,
  Checkbox,
  Dropdown,
  Forward,
  LeftArrow,
  Menu,
  Play,
  Plus,
  Search,
  Setting,
  Share,
  Slider,
  Squiggle,
  Switch,
  Camera,
  Cloud,
  Envelope,
  House,
  JailWindow,
  Square,
  Star,
};

inline constexpr std::size_t kDoodleClassCount = 23;

/// Screen-element vocabulary shared by the sketch and the screen index.
enum class ElementClass : std::uint8_t {
  Text,
  Image,
  DefaultIcon,
  Container,
  Home,
  Star,
  Camera,
  Envelope,
  Avatar,
  Back,
  Cancel,
  Checkbox,
  Dropdown,
  Forward,
  LeftArrow,
  Menu,
  Play,
  Plus,
  Search,
  Setting,
  Share,
  Slider,
  Switch,
  TextButton,
};

inline constexpr std::size_t kElementClassCount = 24;

const std::array<DoodleClass, kDoodleClassCount>& all_doodle_classes() noexcept;
const std::array<ElementClass, kElementClassCount>& all_element_classes() noexcept;

std::string_view to_string(DoodleClass c) noexcept;
std::string_view to_string(ElementClass c) noexcept;

std::optional<DoodleClass> parse_doodle_class(std::string_view name) noexcept;
std::optional<ElementClass> parse_element_class(std::string_view name) noexcept;

/// Fixed doodle -> screen element mapping (squiggle -> text, jail_window ->
/// image, cloud -> default_icon, square -> container, house -> home; every
/// other class keeps its name).
ElementClass to_element_class(DoodleClass c) noexcept;

inline constexpr std::size_t index_of(DoodleClass c) noexcept {
  return static_cast<std::size_t>(c);
}
inline constexpr std::size_t index_of(ElementClass c) noexcept {
  return static_cast<std::size_t>(c);
}

}  // namespace sketchsearch
