#pragma once

#include <chrono>
#include <optional>

#include "unroll/error.hpp"

namespace unroll {

/// Wall-clock budget shared by the expansion loops. `check()` throws
/// Error(Timeout) once expired; loops call it every few thousand steps.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(std::chrono::duration<double> budget)
        : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(budget)) {}

    bool expired() const { return end_ && Clock::now() >= *end_; }
    void check() const {
        if (expired()) throw Error(ErrorKind::Timeout, "time limit exceeded");
    }

private:
    std::optional<Clock::time_point> end_;
};

}  // namespace unroll
