#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <stdexcept>

namespace wcoj {

/// Raised inside an engine when its stop token fires.
class Interrupted : public std::runtime_error {
public:
    Interrupted() : std::runtime_error("execution interrupted") {}
};

/// Cooperative cancellation: a shared flag plus an optional deadline.
/// Engines call poll() in their inner loops; it only looks at the clock
/// every few thousand calls.
class StopToken {
public:
    StopToken() : flag_(std::make_shared<std::atomic<bool>>(false)) {}

    static StopToken with_timeout(std::chrono::duration<double> limit) {
        StopToken t;
        t.deadline_ = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(limit);
        t.has_deadline_ = true;
        return t;
    }

    void request_stop() const { flag_->store(true, std::memory_order_relaxed); }

    bool stop_requested() const {
        if (flag_->load(std::memory_order_relaxed)) return true;
        if (has_deadline_ && std::chrono::steady_clock::now() >= deadline_) {
            flag_->store(true, std::memory_order_relaxed);
            return true;
        }
        return false;
    }

    /// Throws Interrupted once stopped; cheap between clock checks.
    void poll(unsigned& counter) const {
        if ((++counter & 4095U) == 0 && stop_requested()) throw Interrupted();
    }

private:
    std::shared_ptr<std::atomic<bool>> flag_;
    std::chrono::steady_clock::time_point deadline_{};
    bool has_deadline_ = false;
};

}  // namespace wcoj
