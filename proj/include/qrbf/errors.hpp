#pragma once

#include <stdexcept>
#include <string>

namespace qrbf {

// Exit-code mapping used by the CLI: DataError -> 1, ConfigError -> 2,
// NumericalError -> 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qrbf
