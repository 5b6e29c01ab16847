#pragma once

#include <stdexcept>
#include <string>

namespace mgsim {

enum class ErrKind {
    Config = 2,  // bad key, bad value, malformed file
    Sim = 3,     // solver failure, non-finite state, consistency fault
    Io = 4,      // file read/write failure
};

class Error : public std::runtime_error {
public:
    Error(ErrKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrKind kind() const noexcept { return kind_; }
    int code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrKind::Config, msg); }
[[noreturn]] inline void throw_sim(const std::string& msg) { throw Error(ErrKind::Sim, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrKind::Io, msg); }

}  // namespace mgsim
