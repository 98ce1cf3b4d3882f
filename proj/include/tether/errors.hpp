#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace tether {

/// Raised when the host has observed a user interruption. Callers are
/// expected to unwind and clean up.
class Interrupted : public std::runtime_error {
public:
    Interrupted() : std::runtime_error("C++ call interrupted by the user.") {}
};

/// A task body raised. The original exception is kept and can be rethrown.
class TaskFailed : public std::runtime_error {
public:
    explicit TaskFailed(std::exception_ptr original)
        : std::runtime_error(describe(original)), original_(std::move(original)) {}

    const std::exception_ptr& original() const noexcept { return original_; }
    [[noreturn]] void rethrow_original() const { std::rethrow_exception(original_); }

private:
    static std::string describe(const std::exception_ptr& e) {
        try {
            if (e) std::rethrow_exception(e);
        } catch (const std::exception& ex) {
            return std::string("task failed: ") + ex.what();
        } catch (...) {
            return "task failed: unknown exception";
        }
        return "task failed";
    }

    std::exception_ptr original_;
};

class AlreadyInitializedElsewhere : public std::logic_error {
public:
    AlreadyInitializedElsewhere()
        : std::logic_error("host context already initialized by another thread") {}
};

class NotHostThread : public std::logic_error {
public:
    explicit NotHostThread(const char* what_op)
        : std::logic_error(std::string(what_op) + " may only be called from the host thread") {}
};

class SinkError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SpawnFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class NotJoinable : public std::logic_error {
public:
    NotJoinable() : std::logic_error("thread is not joinable") {}
};

class PoolStopped : public std::logic_error {
public:
    PoolStopped() : std::logic_error("thread pool has been joined") {}
};

class AlreadyJoined : public std::logic_error {
public:
    AlreadyJoined() : std::logic_error("thread pool was already joined") {}
};

class DegenerateSample : public std::domain_error {
    using std::domain_error::domain_error;
};

class LengthMismatch : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class AllTied : public std::domain_error {
    using std::domain_error::domain_error;
};

class OutputMismatch : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tether
