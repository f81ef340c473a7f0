#pragma once

#include <stdexcept>
#include <string>

namespace symmetra {

/// A computation ran out of retries, iterations or budget.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace symmetra
