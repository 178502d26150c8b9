// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ucalc {

enum class ErrorKind {
  PrecisionLoss,
  DivisionByZero,
  ContextMismatch,
  InvalidArgument,
  ParseError,
  EmptyRegion,
  CoverIncomplete,
  NotContained,
  OutOfDomain,
  CompositionUncertified,
  CertificateInvalid,
  MembershipFailure,
  NotProductPartition,
  Singular,
  NotAUnit,
  SMatrixSingular,
  NotCertified,
  IterationBudgetExceeded,
  MalformedIndex,
  NotBijective,
  ZeroConditionViolated,
  RefinementMismatch,
  UnknownSuite,
  ConfigInvalid,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ucalc
