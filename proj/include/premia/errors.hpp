#pragma once

#include <stdexcept>
#include <string>

namespace premia {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A distribution constructor received data violating a DiscreteDist invariant.
class InvalidDistribution : public Error {
public:
    using Error::Error;
};

/// A convolution result would exceed the configured support size cap.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

/// A floating-point evaluation left the representable range (exp overflow).
class NumericRangeError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its stated precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A market state violates a hypothesis the equilibrium argument requires
/// (empty insurer set, empty quote book, nonpositive premium).
class HypothesisViolation : public Error {
public:
    using Error::Error;
};

/// An arbitrage action no longer matches the state it is applied to.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A scenario file failed schema validation; the message carries the field path.
class ScenarioError : public Error {
public:
    using Error::Error;
};

} // namespace premia
