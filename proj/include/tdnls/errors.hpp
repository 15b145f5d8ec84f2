#pragma once

#include <stdexcept>
#include <string>

namespace tdnls {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularY1 : std::runtime_error {
    explicit SingularY1(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientRange : std::runtime_error {
    explicit InsufficientRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct BlowupDetected : std::runtime_error {
    explicit BlowupDetected(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateData : std::runtime_error {
    explicit DegenerateData(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridMismatch : std::runtime_error {
    explicit GridMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tdnls
