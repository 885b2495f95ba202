#pragma once

#include <stdexcept>
#include <string>

namespace covertfas {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical routine failed in a way its preconditions should have excluded.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace covertfas
