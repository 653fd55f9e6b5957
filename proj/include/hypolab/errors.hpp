#pragma once

#include <stdexcept>
#include <string>

namespace hypolab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
public:
  DimensionMismatch(int a, int b)
      : Error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b))
  {}
};

class NotClosed : public Error
{
public:
  using Error::Error;
};

class DefectiveMatrix : public Error
{
public:
  using Error::Error;
};

class ZeroCoupling : public Error
{
public:
  using Error::Error;
};

class FluctuationDissipationViolated : public Error
{
public:
  FluctuationDissipationViolated(std::string what, double residual)
      : Error(std::move(what)), residual_(residual)
  {}
  double residual() const { return residual_; }

private:
  double residual_;
};

class NotPositive : public Error
{
public:
  using Error::Error;
};

class RealizationFailure : public Error
{
public:
  using Error::Error;
};

class Unsupported : public Error
{
public:
  using Error::Error;
};

class IncompatibleInteraction : public Error
{
public:
  using Error::Error;
};

class SearchFailed : public Error
{
public:
  SearchFailed(std::string what, double best_margin) : Error(std::move(what)), best_margin_(best_margin) {}
  double best_margin() const { return best_margin_; }

private:
  double best_margin_;
};

class ConditionsFailed : public Error
{
public:
  using Error::Error;
};

class SamplingViolation : public Error
{
public:
  SamplingViolation(std::string what, double worst_point, double worst_value)
      : Error(std::move(what)), worst_point_(worst_point), worst_value_(worst_value)
  {}
  /// Radius (or coordinate) of the worst sample.
  double worst_point() const { return worst_point_; }
  double worst_value() const { return worst_value_; }

private:
  double worst_point_;
  double worst_value_;
};

class NotSumOfSquares : public Error
{
public:
  using Error::Error;
};

class Blowup : public Error
{
public:
  Blowup(std::size_t path, double t, int coordinate, double value)
      : Error("trajectory blowup on path " + std::to_string(path) + " at t=" + std::to_string(t) + " (coordinate " +
              std::to_string(coordinate) + " = " + std::to_string(value) + ")"),
        path_(path), t_(t), coordinate_(coordinate), value_(value)
  {}
  std::size_t path() const { return path_; }
  double time() const { return t_; }
  int coordinate() const { return coordinate_; }
  double value() const { return value_; }

private:
  std::size_t path_;
  double t_;
  int coordinate_;
  double value_;
};

class MissingReplica : public Error
{
public:
  using Error::Error;
};

class NonPositiveValue : public Error
{
public:
  using Error::Error;
};

class LambdaTooSmall : public Error
{
public:
  LambdaTooSmall(std::string what, int offending_index) : Error(std::move(what)), index_(offending_index) {}
  int offending_index() const { return index_; }

private:
  int index_;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace hypolab
