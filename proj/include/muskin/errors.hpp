#pragma once

#include <stdexcept>
#include <string>

namespace muskin {

/// Parameter outside the admissible physical domain (e.g. omega = 0, sigma <= 0).
class ParameterDomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Special-function order outside the supported envelope.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Singular special function evaluated at the origin.
class SingularArgumentError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Point outside the normal-coordinate chart.
class ChartDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Modal linear system too ill-conditioned to trust.
class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string& what, int mode, double condition)
        : std::runtime_error(what), mode_(mode), condition_(condition) {}

    [[nodiscard]] int mode() const noexcept { return mode_; }
    [[nodiscard]] double condition() const noexcept { return condition_; }

private:
    int mode_;
    double condition_;
};

/// Quadrature or iteration failed to reach the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    [[nodiscard]] double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Scalar transmission data violating the mean-zero condition.
class CompatibilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace muskin
