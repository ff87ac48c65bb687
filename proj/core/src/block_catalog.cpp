#include "qfc/block_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>

#include "qfc/errors.hpp"
#include "qfc/hash.hpp"

namespace qfc {

namespace {

// Volume-based estimate of the point count, padded; used only for the refusal check.
std::uint64_t estimate_block_points(int d, double T, Ball ball) {
    if (ball == Ball::Max) {
        double side = 2.0 * std::floor(T) + 1.0;
        double est = std::pow(side, d);
        return est > 1e18 ? UINT64_MAX : static_cast<std::uint64_t>(est);
    }
    // Euclidean: vol of d-ball of radius T plus a surface-layer cushion.
    double logv = (d / 2.0) * std::log(M_PI) + d * std::log(std::max(T, 1.0)) - std::lgamma(d / 2.0 + 1.0);
    double est = std::exp(logv) + std::pow(2 * T + 1, d - 1) * d;
    return est > 1e18 ? UINT64_MAX : static_cast<std::uint64_t>(est);
}

}  // namespace

BlockCatalog enumerate_block(const QuadraticForm& q, double T, Ball ball,
                             const EnumerationLimits& limits) {
    if (T < 0) throw DomainError("enumerate_block requires T >= 0");
    const int d = q.dim();
    if (estimate_block_points(d, T, ball) > limits.max_block_points)
        throw CapacityExceeded("projected block point count exceeds limit");

    BlockCatalog cat;
    cat.T = T;
    cat.d = d;
    cat.ball = ball;

    const Matrix& A = q.matrix();
    std::vector<int> v(d, 0);
    Vector x(d);
    const long long K = static_cast<long long>(std::floor(T));
    const double T2 = T * T;

    // Depth-first over coordinates; Euclidean prunes each axis by the
    // remaining squared radius.
    std::vector<long long> lo(d), hi(d);
    std::vector<double> budget(d + 1);
    budget[0] = T2;
    int level = 0;
    auto axis_range = [&](int lev) {
        if (ball == Ball::Max) {
            lo[lev] = -K;
            hi[lev] = K;
        } else {
            const long long r = static_cast<long long>(std::floor(std::sqrt(std::max(0.0, budget[lev]))));
            lo[lev] = -r;
            hi[lev] = r;
        }
        v[lev] = static_cast<int>(lo[lev]);
    };
    axis_range(0);
    while (level >= 0) {
        if (v[level] > hi[level]) {
            --level;
            if (level >= 0) ++v[level];
            continue;
        }
        const double c2 = static_cast<double>(v[level]) * v[level];
        if (ball == Ball::Euclidean && c2 > budget[level]) {
            ++v[level];
            continue;
        }
        if (level == d - 1) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                x(j) = v[j];
                s += static_cast<double>(v[j]) * v[j];
            }
            if (ball == Ball::Max || s <= T2) {
                if (cat.records.size() >= limits.max_block_points)
                    throw CapacityExceeded("block point count exceeded limit during enumeration");
                cat.records.push_back(BlockRecord{x.dot(A * x), s});
            }
            ++v[level];
        } else {
            budget[level + 1] = budget[level] - c2;
            ++level;
            axis_range(level);
        }
    }

    std::sort(cat.records.begin(), cat.records.end(), [](const BlockRecord& a, const BlockRecord& b) {
        if (a.q != b.q) return a.q < b.q;
        return a.s < b.s;
    });
    return cat;
}

std::string catalog_cache_key(const QuadraticForm& q, double T, Ball ball) {
    ByteSink sink;
    sink.put_u32(static_cast<std::uint32_t>(q.dim()));
    for (Eigen::Index i = 0; i < q.matrix().rows(); ++i)
        for (Eigen::Index j = 0; j < q.matrix().cols(); ++j) sink.put_f64(q.matrix()(i, j));
    sink.put_f64(T);
    sink.put_u32(ball == Ball::Euclidean ? 0u : 1u);
    return sha256_hex(sink.bytes());
}

namespace {
constexpr char kMagic[4] = {'Q', 'F', 'C', 'B'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace

void save_catalog(const BlockCatalog& cat, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw CacheCorrupt("cannot open cache file for writing: " + path);
    auto w = [&](const void* p, std::size_t n) {
        if (std::fwrite(p, 1, n, f.get()) != n) throw CacheCorrupt("short write: " + path);
    };
    w(kMagic, 4);
    std::uint32_t ver = kVersion, d = static_cast<std::uint32_t>(cat.d);
    w(&ver, 4);
    w(&d, 4);
    w(&cat.T, 8);
    std::uint8_t mode = cat.ball == Ball::Euclidean ? 0 : 1;
    w(&mode, 1);
    std::uint64_t count = cat.records.size();
    w(&count, 8);
    if (count) w(cat.records.data(), count * sizeof(BlockRecord));
}

BlockCatalog load_catalog(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw CacheCorrupt("cannot open cache file: " + path);
    auto r = [&](void* p, std::size_t n) {
        if (std::fread(p, 1, n, f.get()) != n) throw CacheCorrupt("truncated cache file: " + path);
    };
    char magic[4];
    r(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw CacheCorrupt("bad magic in cache file: " + path);
    std::uint32_t ver = 0, d = 0;
    r(&ver, 4);
    if (ver != kVersion) throw VersionMismatch("unsupported cache version");
    r(&d, 4);
    BlockCatalog cat;
    cat.d = static_cast<int>(d);
    r(&cat.T, 8);
    std::uint8_t mode = 0;
    r(&mode, 1);
    if (mode > 1) throw CacheCorrupt("bad ball mode byte");
    cat.ball = mode == 0 ? Ball::Euclidean : Ball::Max;
    std::uint64_t count = 0;
    r(&count, 8);
    cat.records.resize(count);
    if (count) r(cat.records.data(), count * sizeof(BlockRecord));
    // anything left over means the writer and reader disagree
    std::uint8_t probe;
    if (std::fread(&probe, 1, 1, f.get()) == 1) throw CacheCorrupt("trailing bytes in cache file");
    return cat;
}

BlockCatalog cached_enumerate_block(const QuadraticForm& q, double T, Ball ball,
                                    const std::string& cache_dir,
                                    const EnumerationLimits& limits) {
    if (cache_dir.empty()) return enumerate_block(q, T, ball, limits);
    std::filesystem::create_directories(cache_dir);
    const std::string path = cache_dir + "/" + catalog_cache_key(q, T, ball) + ".qfcb";
    if (std::filesystem::exists(path)) return load_catalog(path);
    BlockCatalog cat = enumerate_block(q, T, ball, limits);
    save_catalog(cat, path);
    return cat;
}

}  // namespace qfc
