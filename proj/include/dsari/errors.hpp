#ifndef DSARI_ERRORS_HPP
#define DSARI_ERRORS_HPP

#include <stdexcept>

namespace dsari {

/// Base class for all data errors raised by this library. The CLI maps
/// these to exit code 2; everything else is a usage or internal error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class EmptyReferenceError : public Error {
 public:
  using Error::Error;
};

class EmptyDocumentError : public Error {
 public:
  using Error::Error;
};

class LineCountMismatchError : public Error {
 public:
  using Error::Error;
};

class DecodingError : public Error {
 public:
  using Error::Error;
};

class SizesExceedCorpusError : public Error {
 public:
  using Error::Error;
};

class ZeroDenominatorError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsari

#endif  // DSARI_ERRORS_HPP
