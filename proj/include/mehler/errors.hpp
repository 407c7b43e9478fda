#pragma once

#include <stdexcept>
#include <string>

namespace mehler {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad arguments, violated preconditions
class DomainError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimated_order = 0.0)
        : Error(what), estimated_order_(estimated_order) {}
    // power of the integrand near the troublesome endpoint, when known
    double estimated_order() const { return estimated_order_; }

private:
    double estimated_order_;
};

class DivergentIntegral : public Error {
public:
    using Error::Error;
};

// a structural hypothesis on the model fails; clause() names which one
class HypothesisError : public Error {
public:
    HypothesisError(const std::string& clause, const std::string& what)
        : Error(clause + ": " + what), clause_(clause) {}
    const std::string& clause() const { return clause_; }

private:
    std::string clause_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mehler
