#include "dashforge/error.hpp"

namespace dashforge {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::MissingField: return "MissingField";
    case Errc::EmptyGroup: return "EmptyGroup";
    case Errc::MalformedCsv: return "MalformedCsv";
    case Errc::ConstraintViolation: return "ConstraintViolation";
    case Errc::MalformedChart: return "MalformedChart";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::UnknownKind: return "UnknownKind";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::EmptyArtifactSet: return "EmptyArtifactSet";
    case Errc::UnknownTemplate: return "UnknownTemplate";
    case Errc::UnknownAction: return "UnknownAction";
    case Errc::BadSwapArity: return "BadSwapArity";
    case Errc::FileCountMismatch: return "FileCountMismatch";
    case Errc::BadCoordinate: return "BadCoordinate";
    case Errc::SwapEmptySlot: return "SwapEmptySlot";
    case Errc::DeleteEmptySlot: return "DeleteEmptySlot";
    case Errc::UnknownChangeField: return "UnknownChangeField";
    case Errc::QueueExhausted: return "QueueExhausted";
    case Errc::TemplateColumnMismatch: return "TemplateColumnMismatch";
    case Errc::MalformedTemplate: return "MalformedTemplate";
    case Errc::MissingRequiredSlot: return "MissingRequiredSlot";
    case Errc::IdCollision: return "IdCollision";
    case Errc::DanglingRef: return "DanglingRef";
    case Errc::UnfilledSlot: return "UnfilledSlot";
    case Errc::UnknownSlotValue: return "UnknownSlotValue";
    case Errc::EmptyDashboard: return "EmptyDashboard";
    case Errc::MixedTokenizer: return "MixedTokenizer";
    case Errc::MissingResultBlock: return "MissingResultBlock";
    case Errc::UnknownIntent: return "UnknownIntent";
    case Errc::MalformedList: return "MalformedList";
    case Errc::MissingJsonBlock: return "MissingJsonBlock";
    case Errc::TranscriptMiss: return "TranscriptMiss";
    case Errc::ProviderFailure: return "ProviderFailure";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, std::string message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      message_(std::move(message)) {}

Error Error::with_action_index(std::size_t index) const {
  Error copy(code_, "action " + std::to_string(index) + ": " + message_);
  copy.action_index_ = index;
  return copy;
}

void fail(Errc code, std::string message) { throw Error(code, std::move(message)); }

}  // namespace dashforge
