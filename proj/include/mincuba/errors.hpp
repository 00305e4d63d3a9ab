#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mincuba {

// Invalid Jacobi / weight parameters.
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct range_error : std::range_error {
    using std::range_error::range_error;
};

// An iterative numerical step did not converge.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested computation is not supported for this weight.
struct capability_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Rule passed to an operation built for another family.
struct contract_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A user callback returned a non-finite value.
struct evaluation_error : std::runtime_error {
    evaluation_error(const std::string& what, std::size_t idx)
        : std::runtime_error(what), index(idx) {}
    std::size_t index;
};

} // namespace mincuba
