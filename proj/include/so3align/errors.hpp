#pragma once

#include <stdexcept>
#include <string>

namespace so3align {

// Base for all library errors. `kind()` is a stable machine-readable tag
// used by the CLI's JSON error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct EmptySet : Error {
  explicit EmptySet(const std::string& what = "point/rotation set is empty")
      : Error("EmptySet", what) {}
};

struct DegenerateMatrix : Error {
  explicit DegenerateMatrix(const std::string& what = "matrix rank < 2, projection not unique")
      : Error("DegenerateMatrix", what) {}
};

struct DegenerateMean : Error {
  explicit DegenerateMean(const std::string& what)
      : Error("DegenerateMean", what) {}
};

struct NonConvergent : Error {
  explicit NonConvergent(const std::string& what) : Error("NonConvergent", what) {}
};

struct MismatchedBins : Error {
  explicit MismatchedBins(const std::string& what = "histograms have different bin counts")
      : Error("MismatchedBins", what) {}
};

struct InvalidMapping : Error {
  explicit InvalidMapping(const std::string& what) : Error("InvalidMapping", what) {}
};

struct AllHypothesesDegenerate : Error {
  explicit AllHypothesesDegenerate(const std::string& what)
      : Error("AllHypothesesDegenerate", what) {}
};

struct MissingTimestamps : Error {
  explicit MissingTimestamps(const std::string& what = "both sets need timestamps for pairing")
      : Error("MissingTimestamps", what) {}
};

struct EmptyPairing : Error {
  explicit EmptyPairing(const std::string& what = "no index pairs to evaluate")
      : Error("EmptyPairing", what) {}
};

struct ParseError : Error {
  ParseError(const std::string& what, int row, int column)
      : Error("ParseError", what), row(row), column(column) {}
  int row;
  int column;
};

struct NonUnitQuaternion : Error {
  explicit NonUnitQuaternion(const std::string& what) : Error("NonUnitQuaternion", what) {}
};

struct EmptyFile : Error {
  explicit EmptyFile(const std::string& what) : Error("EmptyFile", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

}  // namespace so3align
