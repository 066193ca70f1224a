#pragma once

#include <stdexcept>
#include <string>

namespace sympath {

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or type invariant.
class ValidationError : public Error
{
  public:
    using Error::Error;
};

/// Sampling grid too coarse to resolve the requested quantity.
class ResolutionError : public Error
{
  public:
    using Error::Error;
};

/// Point outside the region where a formula is defined.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// Geometric degeneracy (vanishing normalisation, tangency).
class DegeneracyError : public Error
{
  public:
    using Error::Error;
};

/// Flow meets a section tangentially.
class TangencyError : public DegeneracyError
{
  public:
    using DegeneracyError::DegeneracyError;
};

/// Adaptive integrator could not make progress.
class StiffnessError : public Error
{
  public:
    using Error::Error;
};

/// Event search exhausted its horizon.
class TimeoutError : public Error
{
  public:
    using Error::Error;
};

/// A crossing could not be regularised; carries the crossing time.
class DegenerateCrossingError : public Error
{
  public:
    DegenerateCrossingError(double time, const std::string& what)
        : Error(what), time_(time)
    {
    }
    double time() const noexcept { return time_; }

  private:
    double time_;
};

/// Monte-Carlo estimate not precise enough for the requested check.
class PrecisionError : public Error
{
  public:
    using Error::Error;
};

} // namespace sympath
