#include "gaussmink/error.hpp"

namespace gaussmink {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPointed: return "NotPointed";
    case ErrorKind::NotFullDimensional: return "NotFullDimensional";
    case ErrorKind::NotUnitVector: return "NotUnitVector";
    case ErrorKind::NotInteriorToPolar: return "NotInteriorToPolar";
    case ErrorKind::DuplicateDirection: return "DuplicateDirection";
    case ErrorKind::NonPositiveSupport: return "NonPositiveSupport";
    case ErrorKind::DirectionNotInteriorToCone: return "DirectionNotInteriorToCone";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::SwitchPointTooClose: return "SwitchPointTooClose";
    case ErrorKind::PeakNotBracketed: return "PeakNotBracketed";
    case ErrorKind::PGreaterEqualN: return "PGreaterEqualN";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what, std::vector<std::size_t> indices)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what),
      kind_(kind),
      indices_(std::move(indices)) {}

}  // namespace gaussmink
