#include "sketchsearch/classes.hpp"

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

constexpr std::array<std::string_view, kDoodleClassCount> kDoodleNames = {
    "avatar",  "back",   "cancel", "checkbox", "dropdown",    "forward",
    "left_arrow", "menu", "play",  "plus",     "search",      "setting",
    "share",   "slider", "squiggle", "switch", "camera",      "cloud",
    "envelope", "house", "jail_window", "square", "star",
};

constexpr std::array<std::string_view, kElementClassCount> kElementNames = {
    "text",     "image",    "default_icon", "container", "home",    "star",
    "camera",   "envelope", "avatar",       "back",      "cancel",  "checkbox",
    "dropdown", "forward",  "left_arrow",   "menu",      "play",    "plus",
    "search",   "setting",  "share",        "slider",    "switch",  "text_button",
};

template <typename E, std::size_t N>
constexpr std::array<E, N> enumerate() {
  std::array<E, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<E>(i);
  return out;
}

constexpr auto kAllDoodles = enumerate<DoodleClass, kDoodleClassCount>();
constexpr auto kAllElements = enumerate<ElementClass, kElementClassCount>();

}  // namespace

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DegenerateStroke: return "DegenerateStroke";
    case ErrorCode::UntrainedClass: return "UntrainedClass";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::InvalidBBox: return "InvalidBBox";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::InvalidTile: return "InvalidTile";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::TargetMissing: return "TargetMissing";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::UnknownScreen: return "UnknownScreen";
    case ErrorCode::EmptyStroke: return "EmptyStroke";
    case ErrorCode::NoPendingStrokes: return "NoPendingStrokes";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

const std::array<DoodleClass, kDoodleClassCount>& all_doodle_classes() noexcept {
  return kAllDoodles;
}

const std::array<ElementClass, kElementClassCount>& all_element_classes() noexcept {
  return kAllElements;
}

std::string_view to_string(DoodleClass c) noexcept { return kDoodleNames[index_of(c)]; }
std::string_view to_string(ElementClass c) noexcept { return kElementNames[index_of(c)]; }

std::optional<DoodleClass> parse_doodle_class(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kDoodleNames.size(); ++i) {
    if (kDoodleNames[i] == name) return static_cast<DoodleClass>(i);
  }
  return std::nullopt;
}

std::optional<ElementClass> parse_element_class(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kElementNames.size(); ++i) {
    if (kElementNames[i] == name) return static_cast<ElementClass>(i);
  }
  return std::nullopt;
}

ElementClass to_element_class(DoodleClass c) noexcept {
  switch (c) {
    case DoodleClass::Squiggle: return ElementClass::Text;
    case DoodleClass::JailWindow: return ElementClass::Image;
    case DoodleClass::Cloud: return ElementClass::DefaultIcon;
    case DoodleClass::Square: return ElementClass::Container;
    case DoodleClass::House: return ElementClass::Home;
    case DoodleClass::Star: return ElementClass::Star;
    case DoodleClass::Camera: return ElementClass::Camera;
    case DoodleClass::Envelope: return ElementClass::Envelope;
    case DoodleClass::Avatar: return ElementClass::Avatar;
    case DoodleClass::Back: return ElementClass::Back;
    case DoodleClass::Cancel: return ElementClass::Cancel;
    case DoodleClass::Checkbox: return ElementClass::Checkbox;
    case DoodleClass::Dropdown: return ElementClass::Dropdown;
    case DoodleClass::Forward: return ElementClass::Forward;
    case DoodleClass::LeftArrow: return ElementClass::LeftArrow;
    case DoodleClass::Menu: return ElementClass::Menu;
    case DoodleClass::Play: return ElementClass::Play;
    case DoodleClass::Plus: return ElementClass::Plus;
    case DoodleClass::Search: return ElementClass::Search;
    case DoodleClass::Setting: return ElementClass::Setting;
    case DoodleClass::Share: return ElementClass::Share;
    case DoodleClass::Slider: return ElementClass::Slider;
    case DoodleClass::Switch: return ElementClass::Switch;
  }
  return ElementClass::DefaultIcon;
}

}  // namespace sketchsearch
