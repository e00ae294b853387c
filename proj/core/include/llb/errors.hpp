#pragma once

#include <stdexcept>
#include <string>

namespace llb {

struct NonRealOutput : std::runtime_error {
    explicit NonRealOutput(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooSmall : std::runtime_error {
    explicit GridTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct CutoffViolation : std::runtime_error {
    explicit CutoffViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct MissingData : std::runtime_error {
    explicit MissingData(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace llb
