#ifndef GAFSYM_ERRORS_HPP
#define GAFSYM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gafsym
{

// Raised when an operation's input violates its documented precondition.
class precondition_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when an internal consistency check fails (two routes disagree, an
// exact identity does not hold). Signals a bug, not bad input.
class consistency_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

namespace detail
{

inline void require(bool cond, const std::string &msg)
{
    if (!cond) {
        throw precondition_error(msg);
    }
}

} // namespace detail

} // namespace gafsym

#endif
