#pragma once

#include <stdexcept>
#include <string>

namespace qlocality {

// Every failure raised by the library derives from Error so callers (the CLI in
// particular) can map categories onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Incompatible or invalid matrix/tensor shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A parameter or probability weight outside its admissible range.
class DomainError : public Error {
public:
    using Error::Error;
};

// A composite dimension or enumeration count above the configured guard.
class SizeError : public Error {
public:
    using Error::Error;
};

// Input expected to be Hermitian is not, beyond tolerance.
class HermiticityError : public Error {
public:
    using Error::Error;
};

// Marginals passed alongside a joint distribution do not belong to it.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Iterative solvers that hit their iteration cap or lose accuracy.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace qlocality
