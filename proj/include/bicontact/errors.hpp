#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bicontact {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension/order mismatch between operands.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  DomainError(std::string fn, double value);
  const std::string& function() const { return fn_; }
  double value() const { return value_; }

 private:
  std::string fn_;
  double value_;
};

class BudgetError : public Error {
 public:
  explicit BudgetError(std::string stage);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class SingularVolumeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Raised while reading coframe definition files.
class InputError : public Error {
 public:
  InputError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

// Pipeline failures that depend on more than one sample point carry the
// indices of the offending points.
class SampleError : public Error {
 public:
  SampleError(const std::string& what, std::vector<std::size_t> points)
      : Error(what), points_(std::move(points)) {}
  const std::vector<std::size_t>& points() const { return points_; }

 private:
  std::vector<std::size_t> points_;
};

class ContactFailure : public SampleError {
 public:
  using SampleError::SampleError;
};
class MixedEpsilon : public SampleError {
 public:
  using SampleError::SampleError;
};
class BranchError : public SampleError {
 public:
  using SampleError::SampleError;
};
class AmbiguousCase : public SampleError {
 public:
  using SampleError::SampleError;
};

class CriticalPoint : public Error {
 public:
  using Error::Error;
};
class DegenerateB : public Error {
 public:
  using Error::Error;
};
class DegenerateTranslation : public Error {
 public:
  using Error::Error;
};
class NotIntegrable : public Error {
 public:
  explicit NotIntegrable(double defect);
  double defect() const { return defect_; }

 private:
  double defect_;
};
class OdeStepFailure : public Error {
 public:
  using Error::Error;
};
class DegenerateH : public Error {
 public:
  using Error::Error;
};

}  // namespace bicontact
