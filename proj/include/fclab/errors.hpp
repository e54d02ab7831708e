#pragma once
#include <stdexcept>
#include <string>

namespace fclab {

// One exception type per distinguishable failure so callers can react by kind.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unsupported_dimension : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_exponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct undefined_fiber : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an operation requires a specific exponent regime (e.g. a fiber
// maximizer only exists above the mass-critical exponent).
struct regime_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dilation resampling lost too much mass; carries the renormalization factor.
struct scaling_degraded : std::runtime_error {
    double factor;
    explicit scaling_degraded(double f)
        : std::runtime_error("scaling degraded: mass renormalization factor " +
                             std::to_string(f) + " outside [1-1e-4, 1+1e-4]"),
          factor(f) {}
};

// The clamped dilation iteration onto the zero set of the Pohozaev functional
// did not converge (the input needed an out-of-range total rescaling).
struct projection_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct estimation_unstable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct insufficient_data : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fclab
