#pragma once

#include <stdexcept>
#include <string>

namespace arqft {

// input violates a documented precondition (CLI exit 3)
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// a configured work budget would be exceeded (CLI exit 4)
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a hard mathematical check failed (CLI exit 2)
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace arqft
