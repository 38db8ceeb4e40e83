#ifndef PNM_ERRORS_HPP
#define PNM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pnm
{
/// Invalid parameters or configuration (bad sizes, negative variances, unsupported modulation).
class ConfigError : public std::invalid_argument
{
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error
{
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Bit-stream length does not match the frame layout.
class FramingError : public std::runtime_error
{
public:
    explicit FramingError(const std::string& what) : std::runtime_error(what) {}
};

/// An estimator had no usable observations.
class EstimationError : public std::runtime_error
{
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

/// Broken internal invariant (non-PSD correlation, singular loaded matrix).
class InternalError : public std::logic_error
{
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

class IoError : public std::runtime_error
{
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};
} // namespace pnm

#endif // PNM_ERRORS_HPP
