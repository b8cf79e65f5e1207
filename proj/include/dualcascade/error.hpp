#pragma once

#include <stdexcept>
#include <string>

namespace dualcascade {

/// Raised for malformed or inconsistent input data (record files, images,
/// profiles, configs). The CLI maps it to exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dualcascade
