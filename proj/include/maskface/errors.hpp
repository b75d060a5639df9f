// Copyright 2026 the maskface authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MASKFACE_ERRORS_HPP
#define MASKFACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace maskface {

// Base class for all library errors. Subclasses split along the CLI's
// exit-code contract: I/O failures exit 1, everything else (bad data,
// bad arguments, degenerate geometry) exits 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain data violates an invariant (wrong point count, non-unit
// embedding, chin above nose, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A call was made with arguments that cannot be satisfied (dimension
// mismatch, zero output size, empty pair list, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An input file is syntactically malformed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A keyed lookup failed (unknown mask type, missing template bin, ...).
class LookupError : public Error {
 public:
  using Error::Error;
};

// A geometric computation is degenerate (coincident points, collinear
// anchor sets, singular transforms).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Pairs cannot be split into folds satisfying the stratification
// contract (e.g. a fold without negatives).
class StratificationError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure: missing file, unreadable image, unwritable
// output directory.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace maskface

#endif  // MASKFACE_ERRORS_HPP
