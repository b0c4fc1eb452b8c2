// Copyright 2026 The ksum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ksum {

// Every failure raised by the library derives from ksum::Error so callers can
// catch the whole family at once.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvertible : public Error {
 public:
  explicit NotInvertible(const std::string& what) : Error("not invertible: " + what) {}
};

class EvenModulus : public Error {
 public:
  explicit EvenModulus(const std::string& what) : Error("even modulus: " + what) {}
};

class BadInput : public Error {
 public:
  explicit BadInput(const std::string& what) : Error("bad input: " + what) {}
};

class NonCoprime : public Error {
 public:
  explicit NonCoprime(const std::string& what) : Error("not coprime: " + what) {}
};

class TooLarge : public Error {
 public:
  explicit TooLarge(const std::string& what) : Error("too large: " + what) {}
};

class ZeroInSupport : public Error {
 public:
  explicit ZeroInSupport(const std::string& what) : Error("zero in support: " + what) {}
};

// Raised when a bound is evaluated outside its registered parameter range.
// precondition() returns the violated condition verbatim.
class OutOfRange : public Error {
 public:
  explicit OutOfRange(std::string precondition)
      : Error("out of range: " + precondition), precondition_(std::move(precondition)) {}
  const std::string& precondition() const noexcept { return precondition_; }

 private:
  std::string precondition_;
};

}  // namespace ksum
