#ifndef RMH_ERRORS_HPP
#define RMH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rmh {

// Raised when a file or user-supplied value cannot be parsed or fails
// validation.  The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a numerical routine cannot reach its accuracy target.
// The CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rmh

#endif
