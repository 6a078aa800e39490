#pragma once

#include <stdexcept>
#include <string>

namespace taulab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// numberfield
struct NotMonic : Error { using Error::Error; };
struct NotSquarefree : Error { using Error::Error; };
struct DegreeZero : Error { using Error::Error; };
struct Reducible : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };

// matgroup
struct SingularMatrix : Error { using Error::Error; };
struct NotReduced : Error { using Error::Error; };
struct DegenerateGenerators : Error { using Error::Error; };

// reduction
struct NonInvertibleDenominator : Error { using Error::Error; };
struct EmptyRange : Error { using Error::Error; };
struct InvalidIdeal : Error { using Error::Error; };

// cayley
struct CapacityExceeded : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct VertexSetMismatch : Error { using Error::Error; };

// cli
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

}  // namespace taulab
