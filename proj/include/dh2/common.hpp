#pragma once
//
// Shared scalar/matrix aliases and the exception hierarchy used across dh2.
//

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dh2 {

using real    = double;
using complex = std::complex<double>;

using Vec3          = Eigen::Vector3d;
using Matrix        = Eigen::MatrixXcd;
using Vector        = Eigen::VectorXcd;
using RealMatrix    = Eigen::MatrixXd;
using RealVector    = Eigen::VectorXd;

inline constexpr real pi = 3.14159265358979323846;

// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class OpenSurface : public Error {
public:
    using Error::Error;
};

class InconsistentOrientation : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Raised when a recursion is evaluated out of order (missing child/parent data).
class TraversalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace dh2
