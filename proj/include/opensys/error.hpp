#pragma once

#include <stdexcept>
#include <string>

namespace opensys {

// Machine-readable failure. `code` is a stable identifier such as
// "SchemaMismatch" or "GluingViolation".
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(std::move(detail)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string code_;
    std::string detail_;
};

struct Violation {
    std::string code;
    std::string detail;
};

} // namespace opensys
