#pragma once

#include <stdexcept>
#include <string>

namespace phe {

/// A requested enumeration or pairwise loop would exceed a configured cap.
struct TooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A cell carries observed mass but zero reference measure.
struct ViolatedSupportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace phe
