#pragma once

#include <stdexcept>
#include <string>

namespace bppr {

// Exit-code classes shared by the library and the command-line front end.
enum class ErrorClass {
  kInput = 2,
  kSchema = 3,
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const { return class_; }
  int exit_code() const { return static_cast<int>(class_); }

 private:
  ErrorClass class_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorClass::kInput, what) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorClass::kSchema, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorClass::kNumeric, what) {}
};

// Proposal-level failures. The sampler converts these into rejections.
class DegenerateProjection : public NumericError {
 public:
  DegenerateProjection() : NumericError("degenerate projection: all projected values equal") {}
};

class DegenerateKnots : public NumericError {
 public:
  explicit DegenerateKnots(const std::string& why) : NumericError("degenerate knots: " + why) {}
};

class SingularDesign : public NumericError {
 public:
  explicit SingularDesign(const std::string& why) : NumericError("singular design: " + why) {}
};

// Malformed model file. `offset` is the byte position where parsing stopped.
class ParseError : public InputError {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : InputError("parse error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace bppr
