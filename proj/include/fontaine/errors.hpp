#pragma once

#include <stdexcept>
#include <string>

namespace fontaine {

enum class ErrorCode {
  InfiniteGroup,
  BadModulus,
  NonCoprimeArtinQuery,
  FactorizationMismatch,
  RamifiedAtTwo,
  MissingExtensionData,
  EmptyS,
  UnsortableContext,
  RootDiscTooLarge,
  ParseError,
  ValidationError,
  NetworkError,
  SchemaDrift,
  NonMonotone,
  NoGenerator,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fontaine
