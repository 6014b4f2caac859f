// Copyright 2026 The qfid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qfid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

#define QFID_DEFINE_ERROR(Name)              \
    class Name : public Error {              \
       public:                               \
        using Error::Error;                  \
    }

QFID_DEFINE_ERROR(NotHermitian);
QFID_DEFINE_ERROR(NegativeEigenvalue);
QFID_DEFINE_ERROR(UnknownSegment);
QFID_DEFINE_ERROR(DimensionMismatch);
QFID_DEFINE_ERROR(RankOutOfRange);
QFID_DEFINE_ERROR(InsufficientAncilla);
QFID_DEFINE_ERROR(InvalidState);
QFID_DEFINE_ERROR(RegisterTooLarge);
QFID_DEFINE_ERROR(NotPowerOfTwo);
QFID_DEFINE_ERROR(IndexOutOfRange);
QFID_DEFINE_ERROR(SpectrumOutOfRange);
QFID_DEFINE_ERROR(OutOfRange);
QFID_DEFINE_ERROR(InvalidParams);
QFID_DEFINE_ERROR(InfeasibleParams);
QFID_DEFINE_ERROR(UnknownSuite);
QFID_DEFINE_ERROR(FormatError);

#undef QFID_DEFINE_ERROR

}  // namespace qfid
