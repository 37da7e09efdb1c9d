#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gaussmink {

enum class ErrorKind {
  EmptyInput,
  InvalidArgument,
  DimensionMismatch,
  NotPointed,
  NotFullDimensional,
  NotUnitVector,
  NotInteriorToPolar,
  DuplicateDirection,
  NonPositiveSupport,
  DirectionNotInteriorToCone,
  DimensionUnsupported,
  NonPositiveRadius,
  StepTooLarge,
  SwitchPointTooClose,
  PeakNotBracketed,
  PGreaterEqualN,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind plus the offending indices (if any).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<std::size_t> indices = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  ErrorKind kind_;
  std::vector<std::size_t> indices_;
};

}  // namespace gaussmink
