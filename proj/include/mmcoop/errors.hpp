#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mmcoop {

/*! Invalid argument outside an operation's documented domain. */
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/*! Iteration cap or convergence failure inside a numerical kernel. */
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/*! A sampled deployment cannot satisfy the requested cooperation scheme. */
class InsufficientDeployment : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/*! Scenario configuration violates one or more invariants. */
class ValidationError : public std::runtime_error {
  public:
    ValidationError(const std::string &what, std::vector<std::string> violations)
        : std::runtime_error(what), violations_(std::move(violations)) {}
    const std::vector<std::string> &violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

} // namespace mmcoop
