#ifndef DESCOMP_ERRORS_HPP
#define DESCOMP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace descomp {

/// Input text could not be parsed; `line` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class AlphabetMismatch : public std::runtime_error {
public:
    explicit AlphabetMismatch(const std::string& what) : std::runtime_error(what) {}
};

class SystemMismatch : public std::runtime_error {
public:
    explicit SystemMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was requested that the system's capability flags do not license.
class CapabilityError : public std::runtime_error {
public:
    CapabilityError(const std::string& missing_flag, const std::string& what)
        : std::runtime_error(what + " (missing capability: " + missing_flag + ")"),
          missing_flag_(missing_flag) {}
    const std::string& missing_flag() const { return missing_flag_; }

private:
    std::string missing_flag_;
};

class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Enumeration would exceed the configured descriptor ceiling.
class CeilingExceeded : public std::runtime_error {
public:
    CeilingExceeded(const std::string& estimate, const std::string& what)
        : std::runtime_error(what + " (estimated descriptor count: " + estimate + ")"),
          estimate_(estimate) {}
    const std::string& estimate() const { return estimate_; }

private:
    std::string estimate_;
};

class UnsupportedSystem : public std::runtime_error {
public:
    explicit UnsupportedSystem(const std::string& what) : std::runtime_error(what) {}
};

} // namespace descomp

#endif
