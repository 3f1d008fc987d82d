#pragma once

#include <stdexcept>
#include <string>

namespace bsgal {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unknown family letter, rank out of range, or a Cartan matrix whose
/// reflection closure does not match the expected finite root count.
struct InvalidCartanError : Error {
  using Error::Error;
};

/// A word that is not a reduced decomposition where one is required.
struct NonReducedWordError : Error {
  using Error::Error;
};

/// A gallery handed to a fibre operation whose target is not the given point.
struct TargetMismatchError : Error {
  using Error::Error;
};

/// A load-bearing bend with no earlier load-bearing crossing on its wall.
/// This would break the block decomposition, so we abort loudly instead of
/// repairing the structure.
struct MalformedStructureError : Error {
  using Error::Error;
};

/// Fixed point requested outside the Schubert variety of the word.
struct PointNotInVarietyError : Error {
  using Error::Error;
};

/// Matrix-level operations are implemented for family A only.
struct UnsupportedTypeError : Error {
  using Error::Error;
};

/// Finite-field enumeration would exceed the configured point budget.
struct BudgetExceededError : Error {
  using Error::Error;
};

/// Equation check requested on relations whose signs were never resolved.
struct UnresolvedSignsError : Error {
  using Error::Error;
};

/// Two independent computations of the same predicate disagreed.  Signals a
/// bug or a violated structural assumption; never caught internally.
struct InvariantViolationError : Error {
  using Error::Error;
};

}  // namespace bsgal
