#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace splforge {

enum class ErrorCode {
    SyntaxError,
    InvalidPath,
    InvalidInput,
    DuplicateProductName,
    InternalCollision,
    EmptyContext,
    InvalidContext,
    EmptyRepository,
    UnknownGroup,
    UnknownFeature,
    UnknownArtefactId,
    OrphanSelection,
    MalformedAnnotation,
    EmptyProduct,
    CompositionError,
    RepositoryError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain failure raised by every module. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::string path, int line, int column, const std::string& message)
        : Error(ErrorCode::SyntaxError,
                (path.empty() ? std::string("<input>") : path) + ":" + std::to_string(line) + ":" +
                    std::to_string(column) + ": " + message),
          path_(std::move(path)), line_(line), column_(column) {}

    const std::string& path() const noexcept { return path_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string path_;
    int line_;
    int column_;
};

} // namespace splforge
