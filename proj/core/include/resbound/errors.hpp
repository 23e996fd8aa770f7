// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace resbound {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnboundVariable : public Error {
  public:
    explicit UnboundVariable(const std::string& name) : Error("unbound variable: " + name), name_(name) {}
    [[nodiscard]] const std::string& name() const { return name_; }

  private:
    std::string name_;
};

class DomainError : public Error {
  public:
    using Error::Error;
};

class MinMaxUnsupported : public Error {
  public:
    using Error::Error;
};

class UnsupportedForm : public Error {
  public:
    using Error::Error;
};

class ZeroPolynomial : public Error {
  public:
    ZeroPolynomial() : Error("zero polynomial has infinitely many roots") {}
};

class NoConvergence : public Error {
  public:
    using Error::Error;
};

class IterationLimit : public Error {
  public:
    using Error::Error;
};

class MonotonicityUnverified : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(const std::string& message, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
          column_(column) {}
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

  private:
    int line_;
    int column_;
};

class PredicateMismatch : public Error {
  public:
    using Error::Error;
};

class MetricMismatch : public Error {
  public:
    using Error::Error;
};

class DomainUnbounded : public Error {
  public:
    DomainUnbounded() : Error("domain must be bounded") {}
};

class JobError : public Error {
  public:
    using Error::Error;
};

} // namespace resbound
