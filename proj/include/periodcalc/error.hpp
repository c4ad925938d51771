#pragma once

#include <stdexcept>
#include <string>

namespace periodcalc {

// Raised on contract violations: bad declarations, rule misuse, unsatisfied
// preconditions of an axiom.  The message always names the failed condition.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the DSL front end; carries a source position.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message, std::string expected = "")
        : std::runtime_error(format(line, column, message, expected)),
          line_(line),
          column_(column),
          expected_(std::move(expected))
    {
    }

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    static std::string format(int line, int column, const std::string& message, const std::string& expected)
    {
        std::string s = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
        if (!expected.empty())
            s += " (expected " + expected + ")";
        return s;
    }

    int line_;
    int column_;
    std::string expected_;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw Error(message);
}

} // namespace periodcalc
