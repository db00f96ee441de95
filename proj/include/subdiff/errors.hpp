#pragma once

#include <stdexcept>
#include <string>

namespace subdiff {

/// Base class for all toolkit errors. Subcommands map these to nonzero exit
/// codes; tests match on the concrete type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A series or iteration failed to reach its tolerance within the term/step cap.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// An evaluator was asked for a parameter/argument combination it does not cover.
class UnsupportedRange : public Error {
public:
    using Error::Error;
};

/// Invalid argument values (non-positive period, bad bracket, m = 0 mode, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Sample array length does not match the grid it claims to live on.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// A coefficient sample escaped its declared bounds [nu, mu] (or nu <= 0).
class EllipticityViolation : public Error {
public:
    using Error::Error;
};

/// A matrix coefficient failed the symmetry check.
class AsymmetricInput : public Error {
public:
    using Error::Error;
};

/// Tabulated coefficient data outside its declared bounds.
class CoefficientOutOfBounds : public Error {
public:
    using Error::Error;
};

/// A linear solve hit a (near-)zero pivot.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Observation point/region outside the space-time domain.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// Observation value outside the attainable range [h(nu), h(mu)].
class ObservationOutOfRange : public Error {
public:
    using Error::Error;
};

/// Forward data failed the monotonicity precondition of the recovery.
class MonotonicityViolation : public Error {
public:
    using Error::Error;
};

/// Initial data has (numerically) no first-mode content at the sensor.
class DegenerateInitialData : public Error {
public:
    using Error::Error;
};

/// Trace fit window starts before higher-order terms are negligible.
class WindowTooEarly : public Error {
public:
    using Error::Error;
};

/// Coefficient family s -> a0(s) is not strictly monotone on the search range.
class FamilyNotMonotone : public Error {
public:
    using Error::Error;
};

/// Config file missing/unparsable/inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Spatial grid too coarse for the requested microstructure period.
class ResolutionError : public Error {
public:
    using Error::Error;
};

} // namespace subdiff
