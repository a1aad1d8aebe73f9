#include "unroll/error.hpp"

namespace unroll {

const char* kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::Type: return "TypeError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::MissingParam: return "MissingParam";
    case ErrorKind::UnknownParam: return "UnknownParam";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::DivByZero: return "DivByZero";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::UnboundName: return "UnboundName";
    case ErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorKind::Arithmetic: return "ArithmeticError";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::Io: return "IOError";
    case ErrorKind::Internal: return "InternalError";
    }
    return "Error";
}

bool is_evaluation_error(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DivByZero:
    case ErrorKind::Overflow:
    case ErrorKind::UnboundName:
    case ErrorKind::IndexOutOfBounds:
    case ErrorKind::Arithmetic:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, const std::string& message, SourceSpan span)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
      kind_(kind),
      span_(std::move(span)),
      message_(message) {}

std::string Error::describe(const std::string& fallback_file) const {
    std::string out;
    const std::string* file = span_.file ? span_.file.get() : &fallback_file;
    if (!file->empty()) out += *file + ":";
    if (span_.valid()) out += std::to_string(span_.line) + ":" + std::to_string(span_.column) + ":";
    if (!out.empty()) out += " ";
    out += kind_name(kind_);
    out += ": ";
    out += message_;
    return out;
}

}  // namespace unroll
