#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metareason {

enum class ErrorCategory {
  kInvalidAction,
  kLifecycle,
  kConstraint,
  kConfig,
  kResourceLimit,
  kCoverage,
  kDegenerateDesign,
  kIo,
  kMissingArtifact,
};

/// Stable, machine-parsable name of an error category ("invalid-action", ...).
std::string_view category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message);

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define METAREASON_DEFINE_ERROR(Name, Category)                          \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(Category, message) {} \
  };

METAREASON_DEFINE_ERROR(InvalidActionError, ErrorCategory::kInvalidAction)
METAREASON_DEFINE_ERROR(LifecycleError, ErrorCategory::kLifecycle)
METAREASON_DEFINE_ERROR(ConstraintError, ErrorCategory::kConstraint)
METAREASON_DEFINE_ERROR(ConfigError, ErrorCategory::kConfig)
METAREASON_DEFINE_ERROR(ResourceLimitError, ErrorCategory::kResourceLimit)
METAREASON_DEFINE_ERROR(CoverageError, ErrorCategory::kCoverage)
METAREASON_DEFINE_ERROR(DegenerateDesignError, ErrorCategory::kDegenerateDesign)
METAREASON_DEFINE_ERROR(IoError, ErrorCategory::kIo)
METAREASON_DEFINE_ERROR(MissingArtifactError, ErrorCategory::kMissingArtifact)

#undef METAREASON_DEFINE_ERROR

}  // namespace metareason
