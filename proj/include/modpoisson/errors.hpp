#pragma once

#include <stdexcept>
#include <string>

namespace modpoisson {

// A truncated product/series could not reach the requested tolerance within
// the allowed number of terms (or the table handed in was too short).
class truncation_not_reached : public std::runtime_error {
public:
    explicit truncation_not_reached(const std::string& what)
        : std::runtime_error(what) {}
};

// Input exceeds a documented resource bound (degree, sieve size, ...).
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what)
        : std::runtime_error(what) {}
};

// Evaluation requested at a frequency where the quantity is undefined
// (division by a zero of the limiting function).
class degenerate_frequency_error : public std::invalid_argument {
public:
    explicit degenerate_frequency_error(const std::string& what)
        : std::invalid_argument(what) {}
};

}  // namespace modpoisson
