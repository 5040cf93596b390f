#pragma once

#include <stdexcept>
#include <string>

namespace rvdlm {

// Error hierarchy. The CLI maps each family onto a process exit code:
// ConfigError/UsageError -> 2, DataError -> 3, NumericalError/DomainError -> 4.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument to a mathematical function (bad parameters, out-of-support input).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent market data.
class DataError : public Error {
public:
    using Error::Error;
};

// Loss of positivity/finiteness inside the filter or smoother.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Inconsistent call sequence, e.g. comparing ledgers over different windows.
class UsageError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace rvdlm

namespace rvdlm {

// Process exit code for an error family: 2 config/usage, 3 data, 4 numerical.
inline int exit_code_for(const Error& e) {
    if (dynamic_cast<const DataError*>(&e)) return 3;
    if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 4;
    return 2;
}

// Rethrows `e` as the same error family with `context` prepended.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& context) {
    const std::string msg = context + ": " + e.what();
    if (dynamic_cast<const DataError*>(&e)) throw DataError(msg);
    if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(msg);
    if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
    if (dynamic_cast<const UsageError*>(&e)) throw UsageError(msg);
    if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(msg);
    throw Error(msg);
}

}  // namespace rvdlm
