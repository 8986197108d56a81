/*
 * Copyright 2026 The instanton-workbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace instanton {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FieldMismatch : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class SingularMatrix : public Error { using Error::Error; };
class DivisionByZero : public Error { using Error::Error; };
class NonSkewBlock : public Error { using Error::Error; };
class SymmetryViolation : public Error { using Error::Error; };
class ZeroHyperweb : public Error { using Error::Error; };
class StrategyMismatch : public Error { using Error::Error; };
class NotInS0 : public Error { using Error::Error; };
class NotAnInstanton : public Error { using Error::Error; };
class NotExactFiber : public Error { using Error::Error; };
class MembershipFailure : public Error { using Error::Error; };
class UnsupportedStratum : public Error { using Error::Error; };
class PreconditionViolation : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };
class NotAMonad : public Error { using Error::Error; };

/// Raised when a seeded generator runs out of attempts. `log` lists the
/// condition that failed on each attempt.
class GeneratorFailed : public Error {
 public:
  GeneratorFailed(const std::string& what, std::string log)
      : Error(what), log_(std::move(log)) {}
  const std::string& log() const { return log_; }

 private:
  std::string log_;
};

/// Raised when the 't Hooft monad fails to be a monad at a tested point.
class DegenerateThooftMonad : public Error {
 public:
  DegenerateThooftMonad(const std::string& what, std::string witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

/// Internal consistency check that must never fail.
class InvariantBroken : public Error { using Error::Error; };

inline void ensure(bool cond, const char* what) {
  if (!cond) throw InvariantBroken(what);
}

}  // namespace instanton
