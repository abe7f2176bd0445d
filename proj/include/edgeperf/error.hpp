#pragma once

#include <stdexcept>
#include <string>

namespace edgeperf {

// Base for every error the library raises. The CLI maps these to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value lies outside its documented domain (box corners, n/q ranges, counts).
class DomainViolation : public Error {
public:
    using Error::Error;
};

class MixedProfiles : public Error {
public:
    using Error::Error;
};

class EmptyGrid : public Error {
public:
    using Error::Error;
};

// Least-squares design matrix without full column rank. `component()` names the
// SystemModel component being fitted, empty for standalone fits.
class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& what, std::string component = {})
        : Error(component.empty() ? what : component + ": " + what),
          component_(std::move(component)) {}

    const std::string& component() const noexcept { return component_; }

private:
    std::string component_;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class NonPositiveLatency : public Error {
public:
    using Error::Error;
};

class BurstOverflow : public Error {
public:
    using Error::Error;
};

// Malformed input text (CSV, config, model files). Messages carry file and line.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace edgeperf
