#pragma once

#include <stdexcept>
#include <string>

namespace ertf {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration value is outside its admissible range.
class InvalidParameters : public Error
{
public:
    using Error::Error;
};

/// Tail sums of 1/f cannot be certified finite.
class NonSummable : public Error
{
public:
    using Error::Error;
};

/// A truncated series or product failed to reach the requested accuracy.
class NonConvergent : public Error
{
public:
    using Error::Error;
};

class UnsupportedVariant : public Error
{
public:
    using Error::Error;
};

/// All attachment rates vanished (or overflowed) during growth.
class DegenerateFitness : public Error
{
public:
    using Error::Error;
};

/// Ordering enumeration refused: the tree exceeds the configured size cap.
class CapExceeded : public Error
{
public:
    using Error::Error;
};

class NotInStarPhase : public Error
{
public:
    using Error::Error;
};

}  // namespace ertf
