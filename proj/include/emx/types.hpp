#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace emx {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

enum class ErrorCode {
  InvalidArgument,
  UnknownPreset,
  DomainError,
  DegenerateColumn,
  AllTruncated,
  ConvergenceFailure,
  RankDeficient,
  DegenerateDesign,
  SizeMismatch,
  IoError,
  ConfigError,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code and, when raised inside the
/// recovery pipeline, the name of the stage that failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::string stage = {})
      : std::runtime_error(what), code_(code), stage_(std::move(stage)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const { return Error(code_, what(), std::move(stage)); }

 private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace emx
