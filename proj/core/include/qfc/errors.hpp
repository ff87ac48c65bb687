#ifndef QFC_ERRORS_HPP
#define QFC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qfc {

/// Base class for all library errors so callers can catch qfc failures in one place.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotSquare : Error {
    using Error::Error;
};
struct DegenerateForm : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
/// A projected workload exceeds the configured hard cap; refuse rather than thrash.
struct CapacityExceeded : Error {
    using Error::Error;
};
struct UnsupportedArity : Error {
    using Error::Error;
};
struct BandwidthUnstable : Error {
    using Error::Error;
};
struct SignatureUnsupported : Error {
    using Error::Error;
};
struct ViolationFound : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct TruncationBudgetExceeded : Error {
    using Error::Error;
};
struct QuadratureFailure : Error {
    using Error::Error;
};
struct InsufficientData : Error {
    using Error::Error;
};
struct CacheCorrupt : Error {
    using Error::Error;
};
struct VersionMismatch : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace qfc

#endif
