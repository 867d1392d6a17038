#pragma once

#include <stdexcept>
#include <string>

namespace lifeins {

/// Argument outside the mathematical domain of an operation (negative time,
/// bankrupt full wealth, negative consumption, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// sigma * sigma^T (or another SPD system) is singular or too ill-conditioned.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical kernel could not meet its requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An independent oracle (e.g. the numeric Hamiltonian maximiser) failed.
class OracleFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model parameters or scenario input.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A strategy produced an unusable action during simulation.
class PathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lifeins
