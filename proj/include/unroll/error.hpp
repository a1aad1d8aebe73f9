#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace unroll {

/// Location of a construct in a model or parameter file.
struct SourceSpan {
    std::shared_ptr<const std::string> file;
    int line = 0;
    int column = 0;
    std::size_t begin = 0;
    std::size_t end = 0;

    bool valid() const { return line > 0; }
};

enum class ErrorKind {
    Syntax,
    Type,
    Validation,
    MissingParam,
    UnknownParam,
    DomainViolation,
    DivByZero,
    Overflow,
    UnboundName,
    IndexOutOfBounds,
    Arithmetic,
    Timeout,
    Io,
    Internal,
};

const char* kind_name(ErrorKind kind);

/// True for errors raised while evaluating expressions (as opposed to
/// errors in the model text itself).
bool is_evaluation_error(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, SourceSpan span = {});

    ErrorKind kind() const { return kind_; }
    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }

    /// "file:line:col: KindName: message", omitting the parts that are unknown.
    std::string describe(const std::string& fallback_file = {}) const;

private:
    ErrorKind kind_;
    SourceSpan span_;
    std::string message_;
};

}  // namespace unroll
