// Error types shared across the library. ValidationError covers anything a
// user can cause (bad files, bad flags, inconsistent data); InternalCheckError
// marks a broken internal invariant and maps to a distinct process exit code.
#pragma once

#include <stdexcept>
#include <string>

namespace revpref {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class InternalCheckError : public std::logic_error {
public:
    explicit InternalCheckError(const std::string& what) : std::logic_error(what) {}
};

// Precondition check for internal consistency. Throws InternalCheckError so
// the CLI can exit with code 2 instead of crashing.
inline void internal_check(bool ok, const std::string& message) {
    if (!ok) throw InternalCheckError(message);
}

} // namespace revpref
