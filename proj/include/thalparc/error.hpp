#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thalparc {

enum class ErrorCode {
    invalid_argument,
    schema,
    data,
    degenerate_tensor,
    explicit_k_required,
    convergence,
    non_finite,
    io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `code()` is stable and is what the
/// CLI prints as the machine-readable reason.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace thalparc
