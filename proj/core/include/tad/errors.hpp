#pragma once

#include <stdexcept>
#include <string>

namespace tad {

// Root of the library's exception hierarchy. Every error thrown by tad_core
// derives from this type so callers can catch domain failures in one place.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A commanded target velocity exceeds the allowed speed bound.
class CommandOutOfBounds : public Error {
 public:
  using Error::Error;
};

// Proportional navigation requires a line-of-sight rate, which is undefined
// when the target range is below the minimum usable range.
class LOSRateUndefined : public Error {
 public:
  using Error::Error;
};

// The target->attacker line has (numerically) zero length, so a line-of-sight
// offset for the defender cannot be formed.
class DegenerateLOS : public Error {
 public:
  using Error::Error;
};

// A measurement function was evaluated with the estimated attacker position
// coincident with an observer, making the range/bearing map singular.
class SingularGeometry : public Error {
 public:
  using Error::Error;
};

// The innovation covariance is too ill-conditioned to invert reliably.
class SingularInnovationCov : public Error {
 public:
  using Error::Error;
};

// An Apollonius circle is requested for a speed ratio of exactly one, where
// the locus degenerates to a line.
class DegenerateRatio : public Error {
 public:
  using Error::Error;
};

// A scenario or map file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A scenario parsed correctly but contains physically invalid values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A quantity tied to a terminal event (e.g. interception time) was requested
// from a run that ended without any event.
class NoEvent : public Error {
 public:
  using Error::Error;
};

}  // namespace tad
