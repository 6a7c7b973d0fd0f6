#ifndef TORIX_ERRORS_HPP
#define TORIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torix {

// Raised when input data violates a documented precondition or invariant.
// The CLI maps these to exit code 2; anything else reaching main is treated
// as an internal error (exit 1).
class validation_error : public std::runtime_error {
public:
    validation_error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Thrown by build_resolution when the coarse partition has s <= 2 parts.
// The bundle is a direct sum of line bundles; callers should use
// split_summands instead of a resolution.
class splits_error : public validation_error {
public:
    explicit splits_error(std::size_t parts)
        : validation_error("Splits", "bundle splits: coarse partition has " +
                                         std::to_string(parts) + " part(s)"),
          parts_(parts) {}

    std::size_t parts() const noexcept { return parts_; }

private:
    std::size_t parts_;
};

} // namespace torix

#endif
