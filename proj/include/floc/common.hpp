#ifndef FLOC_COMMON_HPP
#define FLOC_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace floc {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input/validation failures map to exit code 2 at the CLI, runtime
// failures to exit code 3.
struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

// Absolute angular difference wrapped into [0, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    if (d > kPi) d = kTwoPi - d;
    return d;
}

}  // namespace floc

#endif
