#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace rgqm {

struct FlowTrace;

// Raised when a log argument (or 2x2 determinant) falls to the guard value.
// This is the sharp-cutoff spinodal: the flow stops at scale m, position x0.
class ConvexityError : public std::runtime_error {
public:
  ConvexityError(int m, double x0, double argument);

  int m() const { return m_; }
  double x0() const { return x0_; }
  double argument() const { return argument_; }

  std::shared_ptr<const FlowTrace> trace;

private:
  int m_;
  double x0_;
  double argument_;
};

class NonConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class QuadratureNonConvergence : public NonConvergence {
public:
  QuadratureNonConvergence(const std::string& what, double relative_error);
  double relative_error() const { return relative_error_; }

private:
  double relative_error_;
};

class NegativeGapError : public std::runtime_error {
public:
  explicit NegativeGapError(double g00);
  double g00() const { return g00_; }

private:
  double g00_;
};

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string path, const std::string& reason);
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

}  // namespace rgqm
