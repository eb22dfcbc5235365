#pragma once

#include <stdexcept>
#include <string>

namespace cantor_ei {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A depth, denominator-size, matrix-size or operation-budget cap was hit.
class resource_limit_error : public error {
public:
    using error::error;
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

/// The operation needs an exact piecewise-affine map and got something else.
class unsupported_map_error : public error {
public:
    using error::error;
};

/// No closed-form extremal index is known for the requested map.
class no_closed_form_error : public error {
public:
    using error::error;
};

/// An iterative numerical method stopped without meeting its tolerance.
class convergence_error : public error {
public:
    convergence_error(const std::string& what, double last, double previous)
        : error(what), last_(last), previous_(previous) {}

    double last() const noexcept { return last_; }
    double previous() const noexcept { return previous_; }

private:
    double last_;
    double previous_;
};

class config_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

} // namespace cantor_ei
