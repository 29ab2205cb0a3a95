#pragma once

#include <stdexcept>
#include <string>

namespace herdsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters: bad triplets, infeasible gains, zero time step.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A root or fixed-point solve did not converge.
class SolverError : public Error {
public:
    using Error::Error;
};

// Geometric input outside the domain of a field (coincident points).
class DomainError : public Error {
public:
    using Error::Error;
};

// Obstacle repulsion stronger than the arc formation can cancel.
class InfeasibleHeadingError : public Error {
public:
    using Error::Error;
};

// NaN or Inf produced during a simulation step.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Scenario document does not match the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace herdsim
