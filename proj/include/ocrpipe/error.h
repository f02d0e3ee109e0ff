// Copyright 2026 The ocrpipe Authors.
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

#ifndef OCRPIPE_ERROR_H_
#define OCRPIPE_ERROR_H_

#include <stdexcept>
#include <string>

namespace ocrpipe {

// Root of every error the library throws. The CLI maps any Error to exit
// code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OCRPIPE_DEFINE_ERROR(Name)           \
  class Name : public Error {                \
   public:                                   \
    explicit Name(const std::string& what)   \
        : Error(#Name ": " + what) {}        \
  }

// I/O and format errors.
OCRPIPE_DEFINE_ERROR(IoError);
OCRPIPE_DEFINE_ERROR(ParseError);
OCRPIPE_DEFINE_ERROR(ValidationError);
OCRPIPE_DEFINE_ERROR(VersionMismatch);

// langid
OCRPIPE_DEFINE_ERROR(InsufficientData);
OCRPIPE_DEFINE_ERROR(EmptyInput);

// maskio
OCRPIPE_DEFINE_ERROR(LabelMismatch);
OCRPIPE_DEFINE_ERROR(MissingRecord);

// postcorrect
OCRPIPE_DEFINE_ERROR(EmptyTrainingSet);
OCRPIPE_DEFINE_ERROR(ProcessFailure);
OCRPIPE_DEFINE_ERROR(ProtocolError);

// translit
OCRPIPE_DEFINE_ERROR(DuplicateSource);

// eval
OCRPIPE_DEFINE_ERROR(EmptyReference);
OCRPIPE_DEFINE_ERROR(PageCountMismatch);

// Bad arguments or configuration supplied by a caller.
OCRPIPE_DEFINE_ERROR(InvalidArgument);

#undef OCRPIPE_DEFINE_ERROR

}  // namespace ocrpipe

#endif  // OCRPIPE_ERROR_H_
