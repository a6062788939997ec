#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twoscale {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A vector argument does not match the dimension of the model.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Invalid model, simulation, or sweep parameters.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Node doubling did not reach the requested tolerance within the node budget.
class QuadratureError : public Error {
  public:
    QuadratureError(const std::string& what, double previous, double last)
        : Error(what), previous_(previous), last_(last) {}

    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

  private:
    double previous_;
    double last_;
};

/// The integrator produced a non-finite or runaway state.
class BlowUpError : public Error {
  public:
    BlowUpError(const std::string& what, std::size_t step) : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

/// Too few observations for the requested operation.
class InsufficientDataError : public Error {
  public:
    using Error::Error;
};

/// The normal equations (or a scalar denominator) of an estimator are singular.
class DegenerateRegressionError : public Error {
  public:
    using Error::Error;
};

/// The estimator is not defined for the given model family.
class UnsupportedModelError : public Error {
  public:
    using Error::Error;
};

/// Reading or writing a file failed.
class FileError : public Error {
  public:
    FileError(const std::string& what, std::string path) : Error(what + ": " + path), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
};

}  // namespace twoscale
