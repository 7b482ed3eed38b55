#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ldslab {

// Base class for every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LDSLAB_ERROR_CLASS(Name) \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  }

// Input ingestion.
LDSLAB_ERROR_CLASS(ParseError);
LDSLAB_ERROR_CLASS(SchemaError);
LDSLAB_ERROR_CLASS(DomainError);
LDSLAB_ERROR_CLASS(LengthError);
LDSLAB_ERROR_CLASS(RangeError);
LDSLAB_ERROR_CLASS(MissingColumnError);

// Aggregation.
LDSLAB_ERROR_CLASS(DimensionError);
LDSLAB_ERROR_CLASS(InvalidK);
LDSLAB_ERROR_CLASS(EmptyClusterError);

// LP construction and solving.
LDSLAB_ERROR_CLASS(DuplicateName);
LDSLAB_ERROR_CLASS(InvertedBounds);
LDSLAB_ERROR_CLASS(UnknownVariable);
LDSLAB_ERROR_CLASS(IoError);
LDSLAB_ERROR_CLASS(SizeLimit);
LDSLAB_ERROR_CLASS(NumericalError);
LDSLAB_ERROR_CLASS(SpawnError);
LDSLAB_ERROR_CLASS(SolutionParseError);
LDSLAB_ERROR_CLASS(Timeout);

// Model assembly.
LDSLAB_ERROR_CLASS(MappingMismatch);
LDSLAB_ERROR_CLASS(IndexError);
LDSLAB_ERROR_CLASS(NotLds);
LDSLAB_ERROR_CLASS(MissingDesignated);

// Analysis.
LDSLAB_ERROR_CLASS(StatusError);
LDSLAB_ERROR_CLASS(HandleMismatch);
LDSLAB_ERROR_CLASS(InvalidDims);

#undef LDSLAB_ERROR_CLASS

// Nonzero exit of an external solver process; keeps the captured stderr.
class ExitCodeError : public Error {
 public:
  ExitCodeError(const std::string& message, int exit_code, std::string stderr_text)
      : Error(message), exit_code_(exit_code), stderr_text_(std::move(stderr_text)) {}

  int exit_code() const { return exit_code_; }
  const std::string& stderr_text() const { return stderr_text_; }

 private:
  int exit_code_;
  std::string stderr_text_;
};

}  // namespace ldslab
