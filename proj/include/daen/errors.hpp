#pragma once

#include <stdexcept>
#include <string>

namespace daen {

// Broken precondition inside the library (shape mismatch, empty batch, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed or inconsistent input data: CSV parse failures, duplicate dates,
// missing covariates, incomplete records.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid run configuration (bad keys, overlapping ranges, unreadable paths).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Not enough history before a forecast date, or actuals missing for it.
class InsufficientHistory : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace daen
