#pragma once

#include <stdexcept>
#include <string>

namespace kmm {

/// Parameters or arguments outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (parse failures, alphabet
/// violations, duplicate ids, shape mismatches).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Brute-force enumeration requested over more than kOracleLimit k-mers.
class OracleScaleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kmm
