// Error types shared by all modules.
//
// argument_error: a precondition or hypothesis violation (bad range, bad
//                 flag, degenerate band).  Maps to CLI exit code 1.
// resource_error: a request exceeding a configured ceiling (sieve limit,
//                 grid size) or an I/O failure.  Maps to CLI exit code 2.

#pragma once

#include <stdexcept>
#include <string>

namespace zrf {

class argument_error : public std::invalid_argument {
public:
    explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zrf
