#ifndef QFC_BLOCK_CATALOG_HPP
#define QFC_BLOCK_CATALOG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qfc/interval.hpp"
#include "qfc/qform.hpp"

namespace qfc {

/// One integer point of a d-block, reduced to the two scalars the counters
/// need: q = Q(v) and s = ||v||^2 (s is an exact integer in double).
struct BlockRecord {
    double q;
    double s;
};

/// All integer points of one d-dimensional block inside the ball of radius T
/// (Euclidean) or the box [-T, T]^d (Max), sorted ascending by (q, s).
struct BlockCatalog {
    double T = 0.0;
    int d = 0;
    Ball ball = Ball::Euclidean;
    std::vector<BlockRecord> records;

    std::uint64_t count() const { return records.size(); }
};

struct EnumerationLimits {
    std::uint64_t max_block_points = (1ULL << 31);
};

/// Exact enumeration of the block points. Deterministic (q, s)-sorted output.
/// Throws CapacityExceeded when the projected count exceeds the limit.
BlockCatalog enumerate_block(const QuadraticForm& q, double T, Ball ball,
                             const EnumerationLimits& limits = {});

/// Cache key: SHA-256 over the matrix entry bit patterns, T and the ball mode.
std::string catalog_cache_key(const QuadraticForm& q, double T, Ball ball);

/// Binary cache. Layout: magic "QFCB", u32 version=1, u32 d, f64 T,
/// u8 ball mode, u64 count, then count * (f64 q, f64 s), little endian,
/// records in q-ascending order. Round-trips bit-exactly.
void save_catalog(const BlockCatalog& cat, const std::string& path);
BlockCatalog load_catalog(const std::string& path);

/// Loads the catalog from `cache_dir` if present, otherwise enumerates and
/// stores it. Empty cache_dir disables caching.
BlockCatalog cached_enumerate_block(const QuadraticForm& q, double T, Ball ball,
                                    const std::string& cache_dir,
                                    const EnumerationLimits& limits = {});

}  // namespace qfc

#endif
