#pragma once

#include <stdexcept>
#include <string>

namespace relprop {

enum class ErrorCode {
    InvalidNumeric,
    InvalidParameter,
    InvalidWeights,
    EmptyInput,
    EmptyDimensions,
    UnknownAgent,
    UnknownEntity,
    UnknownStatement,
    NotAStatement,
    NotComparable,
    NotEnoughMessages,
    InconsistentChain,
    DuplicateId,
    ParseError,
    ExpectFailed,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Parse failures carry the 1-based line number of the offending line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

class ExpectFailed : public Error {
public:
    ExpectFailed(std::size_t step, const std::string& entity, const std::string& detail)
        : Error(ErrorCode::ExpectFailed,
                "step " + std::to_string(step) + " entity " + entity + ": " + detail),
          step_(step), entity_(entity) {}

    std::size_t step() const { return step_; }
    const std::string& entity() const { return entity_; }

private:
    std::size_t step_;
    std::string entity_;
};

}  // namespace relprop
