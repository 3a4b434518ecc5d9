#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bww {

/// Failure categories raised by model construction and queries.
enum class ErrorKind {
  DuplicateName,
  DanglingReference,
  IllegalNullDeclaration,
  CyclicConjunction,
  DegenerateConjunction,
  UnknownProperty,
  UnknownThing,
  UnknownState,
  UnknownClass,
  UnknownKind,
  NullAsComponent,
  SelfContainment,
  TimeCollision,
  ForeignState,
  EmptyProcess,
  InvalidEvent,
  EmptyConjunction,
  EmptyAssociation,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::IllegalNullDeclaration: return "IllegalNullDeclaration";
    case ErrorKind::CyclicConjunction: return "CyclicConjunction";
    case ErrorKind::DegenerateConjunction: return "DegenerateConjunction";
    case ErrorKind::UnknownProperty: return "UnknownProperty";
    case ErrorKind::UnknownThing: return "UnknownThing";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::UnknownClass: return "UnknownClass";
    case ErrorKind::UnknownKind: return "UnknownKind";
    case ErrorKind::NullAsComponent: return "NullAsComponent";
    case ErrorKind::SelfContainment: return "SelfContainment";
    case ErrorKind::TimeCollision: return "TimeCollision";
    case ErrorKind::ForeignState: return "ForeignState";
    case ErrorKind::EmptyProcess: return "EmptyProcess";
    case ErrorKind::InvalidEvent: return "InvalidEvent";
    case ErrorKind::EmptyConjunction: return "EmptyConjunction";
    case ErrorKind::EmptyAssociation: return "EmptyAssociation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bww
