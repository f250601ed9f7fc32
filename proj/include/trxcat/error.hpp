#pragma once

#include <stdexcept>
#include <string>

namespace trxcat {

enum class ErrorKind {
    io,
    schema,
    config,
    validation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::io, msg); }
[[noreturn]] inline void throw_schema(const std::string& msg) { throw Error(ErrorKind::schema, msg); }
[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::config, msg); }
[[noreturn]] inline void throw_validation(const std::string& msg) { throw Error(ErrorKind::validation, msg); }

}  // namespace trxcat
