#pragma once

#include <exception>
#include <mutex>
#include <utility>

namespace fockmaj::detail {

// Exceptions must not escape an OpenMP region. Loop bodies run through
// guard(), which stashes the first exception; the caller rethrows it
// after the region ends.
class ErrorCollector {
public:
    template <class F>
    void guard(F&& f) noexcept {
        try {
            std::forward<F>(f)();
        } catch (...) {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!error_)
                error_ = std::current_exception();
        }
    }

    void rethrow() {
        if (error_)
            std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

} // namespace fockmaj::detail
