#ifndef DSM_ERROR_HPP
#define DSM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsm {

enum class ErrorCode {
    bad_request,        // invalid parameter or malformed query
    unknown_dimension,
    unknown_value,
    degenerate_input,   // input valid but analysis undefined (zero inertia, K = 1, ...)
    invalid_data,       // dataset violates a load-time invariant
    io,
    internal,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), m_code(code) {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

} // namespace dsm

#endif // DSM_ERROR_HPP
