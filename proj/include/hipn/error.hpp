#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hipn {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A text input could not be parsed. Positions are 1-based.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, std::size_t column, const std::string& message)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          file_(std::move(file)), line_(line), column_(column) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

// A search or tree construction ran out of its node budget.
class BudgetExhausted : public Error {
public:
    using Error::Error;
};

}  // namespace hipn
