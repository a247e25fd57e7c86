#pragma once

#include <stdexcept>
#include <string>

namespace cgvf {

// Base for all library failures. Each subclass maps to one CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Scenario text could not be parsed; carries a 1-based location when known.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : ConfigError(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Two virtual coordinates came within the safe radius. The controller is
// undefined there, so this always aborts a simulation.
class BarrierViolation : public Error {
 public:
  BarrierViolation(const std::string& what, int robot_a, int robot_b, double distance)
      : Error(what), robot_a_(robot_a), robot_b_(robot_b), distance_(distance) {}
  int robot_a() const { return robot_a_; }
  int robot_b() const { return robot_b_; }
  double distance() const { return distance_; }

 private:
  int robot_a_;
  int robot_b_;
  double distance_;
};

class NumericFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace cgvf
