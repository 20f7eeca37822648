#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace newsgraph {

// File-level problems: wrong header, wrong column count, unreadable file.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A single input row failed validation; carries the 1-based line number.
class RowError : public std::runtime_error {
 public:
  RowError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Unparseable LLM response; carries the raw text for diagnosis.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string raw)
      : std::runtime_error(what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Replay mode was asked for a response that is not in the cache.
class CacheMissError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace newsgraph
