/*
 * Copyright 2025-present the resext authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RESEXT_ERRORS_HPP_
#define RESEXT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace resext {

/// Base class for all library errors. Carries a mutable message so callers
/// can prepend context (reservoir id, date, file name) while keeping the
/// concrete error type intact across a rethrow.
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }

  void prepend_context(const std::string& context) {
    message_ = context + ": " + message_;
  }

 private:
  std::string message_;
};

#define RESEXT_DEFINE_ERROR(name)                          \
  class name : public Error {                              \
   public:                                                 \
    explicit name(std::string m) : Error(std::move(m)) {}  \
  }

RESEXT_DEFINE_ERROR(ParseError);
RESEXT_DEFINE_ERROR(IoError);
RESEXT_DEFINE_ERROR(UnsupportedGeometry);
RESEXT_DEFINE_ERROR(SeriesOrderError);
RESEXT_DEFINE_ERROR(DomainError);
RESEXT_DEFINE_ERROR(UnitsError);
RESEXT_DEFINE_ERROR(ParamError);
RESEXT_DEFINE_ERROR(EmptyInput);
RESEXT_DEFINE_ERROR(DegenerateDistribution);
RESEXT_DEFINE_ERROR(GridMismatch);
RESEXT_DEFINE_ERROR(EmptyPeriod);
RESEXT_DEFINE_ERROR(EmptyMask);
RESEXT_DEFINE_ERROR(CrsError);
RESEXT_DEFINE_ERROR(ShapeError);

#undef RESEXT_DEFINE_ERROR

}  // namespace resext

#endif  // RESEXT_ERRORS_HPP_
