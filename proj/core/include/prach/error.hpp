// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prach {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidRoot : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Combiner/coherence case for which an operation is not defined.
class UnsupportedCase : public Error {
public:
    using Error::Error;
};

struct ValidationIssue {
    std::string field;
    std::string message;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    ValidationError(std::string field, std::string message)
        : ValidationError(std::vector<ValidationIssue>{{std::move(field), std::move(message)}})
    {
    }
    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

} // namespace prach
