#include "metareason/error.hpp"

namespace metareason {

std::string_view category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::kInvalidAction: return "invalid-action";
    case ErrorCategory::kLifecycle: return "lifecycle";
    case ErrorCategory::kConstraint: return "constraint";
    case ErrorCategory::kConfig: return "config";
    case ErrorCategory::kResourceLimit: return "resource-limit";
    case ErrorCategory::kCoverage: return "coverage";
    case ErrorCategory::kDegenerateDesign: return "degenerate-design";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kMissingArtifact: return "missing-artifact";
  }
  return "unknown";
}

Error::Error(ErrorCategory category, const std::string& message)
    : std::runtime_error(message), category_(category) {}

}  // namespace metareason
