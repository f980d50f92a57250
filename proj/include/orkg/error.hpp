#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orkg {

// Base for every error raised by the library. Input errors (bad files, bad
// mappings, unreachable attributes) derive from InputError so the CLI can map
// them onto exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& reason)
      : InputError("syntax error at " + std::to_string(line) + ":" +
                   std::to_string(column) + ": " + reason),
        line_(line),
        column_(column),
        reason_(reason) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

#define ORKG_DEFINE_INPUT_ERROR(Name)   \
  class Name : public InputError {      \
   public:                              \
    using InputError::InputError;       \
  }

// rdf-core
ORKG_DEFINE_INPUT_ERROR(DuplicatePrefixError);
ORKG_DEFINE_INPUT_ERROR(InvalidTermError);
// ontology
ORKG_DEFINE_INPUT_ERROR(MissingDomainError);
ORKG_DEFINE_INPUT_ERROR(MissingRangeError);
ORKG_DEFINE_INPUT_ERROR(UndeclaredClassError);
ORKG_DEFINE_INPUT_ERROR(UnknownClassError);
ORKG_DEFINE_INPUT_ERROR(OntologyConflictError);
// mapping
ORKG_DEFINE_INPUT_ERROR(RaggedRowError);
ORKG_DEFINE_INPUT_ERROR(EmptyHeaderError);
ORKG_DEFINE_INPUT_ERROR(DuplicateAttributeError);
ORKG_DEFINE_INPUT_ERROR(UnknownTableClassError);
ORKG_DEFINE_INPUT_ERROR(InvalidMappingError);
// reshape
ORKG_DEFINE_INPUT_ERROR(CompactionCycleError);
// kgen
ORKG_DEFINE_INPUT_ERROR(NoPathError);
ORKG_DEFINE_INPUT_ERROR(MissingHomeError);
ORKG_DEFINE_INPUT_ERROR(DuplicateKeyError);
// query
ORKG_DEFINE_INPUT_ERROR(DisconnectedPatternError);
ORKG_DEFINE_INPUT_ERROR(UnboundVariableError);
ORKG_DEFINE_INPUT_ERROR(TypeMismatchError);
ORKG_DEFINE_INPUT_ERROR(UnreachableAttributeError);
ORKG_DEFINE_INPUT_ERROR(InvalidIntentError);
// bench
ORKG_DEFINE_INPUT_ERROR(ConfigError);
ORKG_DEFINE_INPUT_ERROR(SampleTooLargeError);

#undef ORKG_DEFINE_INPUT_ERROR

}  // namespace orkg
