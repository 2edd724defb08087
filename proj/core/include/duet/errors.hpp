#ifndef DUET_ERRORS_HPP
#define DUET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace duet {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// -- parameter validation --------------------------------------------------

class NonPositiveFrequency : public Error {
public:
  using Error::Error;
};

/// |lambda| >= omega1*omega2: the lower eigenfrequency turns imaginary and
/// trajectories become unbounded.
class UnstablePotential : public Error {
public:
  using Error::Error;
};

class NegativeFrequency : public Error {
public:
  using Error::Error;
};

// -- bath coefficient evaluation -------------------------------------------

class QuadratureFailure : public Error {
public:
  using Error::Error;
};

class MatsubaraNonconvergence : public Error {
public:
  using Error::Error;
};

/// Two coefficient sets from different (system, bath) configurations were
/// combined.
class MismatchedParams : public Error {
public:
  using Error::Error;
};

// -- propagation -------------------------------------------------------------

class IntegrationError : public Error {
public:
  using Error::Error;
};

class StepSizeUnderflow : public IntegrationError {
public:
  using IntegrationError::IntegrationError;
};

class NonFiniteState : public IntegrationError {
public:
  using IntegrationError::IntegrationError;
};

/// The drift matrix is not Hurwitz, so no steady state exists (e.g. a common
/// bath at resonance, where one mode never decays).
class NotDissipative : public Error {
public:
  using Error::Error;
};

// -- measures ----------------------------------------------------------------

class NonPhysicalState : public Error {
public:
  using Error::Error;
};

class EmptyTrajectory : public Error {
public:
  using Error::Error;
};

// -- configuration -----------------------------------------------------------

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace duet

#endif
