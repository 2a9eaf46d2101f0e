#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anisoflow {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node left the k-convex cone during time stepping.
class ConeViolation : public Error {
 public:
  ConeViolation(std::size_t node, double margin, double tau);
  std::size_t node() const noexcept { return node_; }
  double margin() const noexcept { return margin_; }
  double tau() const noexcept { return tau_; }

 private:
  std::size_t node_;
  double margin_;
  double tau_;
};

class NonFiniteRhs : public Error {
 public:
  NonFiniteRhs(std::size_t node, double tau);
  std::size_t node() const noexcept { return node_; }
  double tau() const noexcept { return tau_; }

 private:
  std::size_t node_;
  double tau_;
};

class StepTooSmall : public Error {
 public:
  StepTooSmall(double dt, double tau);
  double dt() const noexcept { return dt_; }
  double tau() const noexcept { return tau_; }

 private:
  double dt_;
  double tau_;
};

/// lambda^beta g(r / lambda) could not be represented.
class ScaleOverflow : public Error {
 public:
  ScaleOverflow(double lambda, double r);
  double lambda() const noexcept { return lambda_; }
  double r() const noexcept { return r_; }

 private:
  double lambda_;
  double r_;
};

/// First fundamental form is (numerically) degenerate.
class SingularMetric : public Error {
 public:
  explicit SingularMetric(std::size_t node);
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace anisoflow
