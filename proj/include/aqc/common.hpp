#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace aqc {

// Thrown when an exhaustive enumeration would exceed its configured cap.
// Callers treat this as "inconclusive", never as a negative result.
class cap_exceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a construction's own post-hoc verification fails. Carries a
// human-readable witness of the violated property.
class verification_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown on malformed .aqc / .pkg input.
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration limits. vector_cap bounds q^m full-space scans (distance,
// hyperplane counts); subspace_cap bounds Grassmannian streams.
struct EnumCaps {
    long long vector_cap = 1LL << 24;
    long long subspace_cap = 1000000;
};

}  // namespace aqc
