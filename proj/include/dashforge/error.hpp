#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dashforge {

enum class Errc {
  // documents
  MalformedDocument,
  SchemaViolation,
  VersionMismatch,
  // artifacts
  MissingField,
  EmptyGroup,
  MalformedCsv,
  ConstraintViolation,
  MalformedChart,
  EmptyDocument,
  UnknownKind,
  // irgen
  CapacityExceeded,
  EmptyArtifactSet,
  UnknownTemplate,
  // modify
  UnknownAction,
  BadSwapArity,
  FileCountMismatch,
  BadCoordinate,
  SwapEmptySlot,
  DeleteEmptySlot,
  UnknownChangeField,
  QueueExhausted,
  TemplateColumnMismatch,
  // render
  MalformedTemplate,
  MissingRequiredSlot,
  IdCollision,
  DanglingRef,
  UnfilledSlot,
  UnknownSlotValue,
  // gor
  EmptyDashboard,
  MixedTokenizer,
  // bridge
  MissingResultBlock,
  UnknownIntent,
  MalformedList,
  MissingJsonBlock,
  TranscriptMiss,
  ProviderFailure,
  // filesystem
  Io,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures are reported through this one exception type; `code`
// is the stable, machine-readable part.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message);

  Errc code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

  // Set by apply_script when a specific action failed.
  std::optional<std::size_t> action_index() const noexcept { return action_index_; }
  Error with_action_index(std::size_t index) const;

 private:
  Errc code_;
  std::string message_;
  std::optional<std::size_t> action_index_;
};

[[noreturn]] void fail(Errc code, std::string message);

}  // namespace dashforge
