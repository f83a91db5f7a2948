#pragma once

#include <stdexcept>
#include <string>

namespace align {

// Base for every error this library raises; `code()` is the stable
// machine-readable name used in CLI error JSON.
class AlignError : public std::runtime_error {
  public:
    AlignError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

#define ALIGN_DEFINE_ERROR(Name)                              \
    class Name : public AlignError {                          \
      public:                                                 \
        explicit Name(const std::string& message)             \
            : AlignError(#Name, message) {}                   \
    }

ALIGN_DEFINE_ERROR(DegenerateConfiguration);
ALIGN_DEFINE_ERROR(ZeroSurfacePoint);
ALIGN_DEFINE_ERROR(InsufficientPoints);
ALIGN_DEFINE_ERROR(IoError);
ALIGN_DEFINE_ERROR(FormatError);
ALIGN_DEFINE_ERROR(SchemaError);
ALIGN_DEFINE_ERROR(InvalidRotation);
ALIGN_DEFINE_ERROR(RleLengthMismatch);
ALIGN_DEFINE_ERROR(BboxMismatch);
ALIGN_DEFINE_ERROR(EmptyMask);
ALIGN_DEFINE_ERROR(BudgetOverflow);
ALIGN_DEFINE_ERROR(PlacementFailure);
ALIGN_DEFINE_ERROR(MismatchedSceneIds);
ALIGN_DEFINE_ERROR(InvalidConfig);

#undef ALIGN_DEFINE_ERROR

}  // namespace align
