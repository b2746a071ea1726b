#pragma once

#include <stdexcept>
#include <string>

namespace hdrwm {

// Exit codes used by the CLI. Library errors map onto these.
enum ExitCode : int {
    kExitOk = 0,
    kExitCapacity = 2,
    kExitIo = 3,
    kExitFormat = 4,
    kExitConfig = 5,
};

class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

class IoError : public Error {
public:
    explicit IoError(std::string msg) : Error(std::move(msg), kExitIo) {}
};

class FormatError : public Error {
public:
    explicit FormatError(std::string msg) : Error(std::move(msg), kExitFormat) {}
};

class CapacityError : public Error {
public:
    CapacityError(std::string msg, long long available, long long needed)
        : Error(std::move(msg), kExitCapacity), available_(available), needed_(needed) {}
    long long available() const { return available_; }
    long long needed() const { return needed_; }

private:
    long long available_;
    long long needed_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::string msg) : Error(std::move(msg), kExitConfig) {}
};

} // namespace hdrwm
