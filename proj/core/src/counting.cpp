#include "qfc/counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qfc/errors.hpp"
#include "qfc/hash.hpp"

namespace qfc {

std::string int128_to_string(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

std::string CorrelationSpec::fingerprint() const {
    ByteSink sink;
    sink.put_u32(static_cast<std::uint32_t>(form.dim()));
    for (Eigen::Index i = 0; i < form.matrix().rows(); ++i)
        for (Eigen::Index j = 0; j < form.matrix().cols(); ++j) sink.put_f64(form.matrix()(i, j));
    sink.put_u32(static_cast<std::uint32_t>(n));
    for (const auto& iv : intervals) {
        sink.put_f64(iv.a);
        sink.put_f64(iv.b);
    }
    sink.put_u32(ball == Ball::Euclidean ? 0u : 1u);
    return sha256_hex(sink.bytes()).substr(0, 16);
}

namespace {

// First index with q[i] - qref >= a; the subtraction matches the oracle's
// predicate exactly (IEEE subtraction is monotone, so this is a valid
// partition point).
std::size_t window_lo(const std::vector<BlockRecord>& r, double qref, double a) {
    return static_cast<std::size_t>(std::partition_point(r.begin(), r.end(), [&](const BlockRecord& rec) {
               return !(rec.q - qref >= a);
           }) - r.begin());
}

// One past the last index with q[i] - qref <= b.
std::size_t window_hi(const std::vector<BlockRecord>& r, double qref, double b) {
    return static_cast<std::size_t>(std::partition_point(r.begin(), r.end(), [&](const BlockRecord& rec) {
               return rec.q - qref <= b;
           }) - r.begin());
}

void check_spec_catalog(const CorrelationSpec& spec, const BlockCatalog& cat) {
    if (cat.d != spec.dim() || cat.ball != spec.ball)
        throw DimensionMismatch("catalog does not match the correlation spec");
}

}  // namespace

CountResult count_naive(const CorrelationSpec& spec, double T, const CountingLimits& limits) {
    return count_naive(spec, enumerate_block(spec.form, T, spec.ball, limits.enumeration), limits);
}

CountResult count_naive(const CorrelationSpec& spec, const BlockCatalog& cat,
                        const CountingLimits& limits) {
    check_spec_catalog(spec, cat);
    const auto& r = cat.records;
    const std::size_t P = r.size();
    if (std::pow(static_cast<double>(P), spec.n) > limits.max_naive_tuples)
        throw CapacityExceeded("count_naive: projected tuple count exceeds limit");

    const bool euclid = spec.ball == Ball::Euclidean;
    const double T2 = cat.T * cat.T;
    const int n = spec.n;
    __int128 total = 0;

    // Nested iteration over tuples. Each level visits exactly the records
    // satisfying its interval constraint: q ascending makes q_prev - q
    // nonincreasing, so the members form the contiguous range below. Every
    // candidate is still re-checked with the direct predicate.
    auto level_range = [&](double q_prev, const Interval& iv) {
        auto first = std::partition_point(r.begin(), r.end(), [&](const BlockRecord& rec) {
            return q_prev - rec.q > iv.b;
        });
        auto last = std::partition_point(first, r.end(), [&](const BlockRecord& rec) {
            return q_prev - rec.q >= iv.a;
        });
        return std::pair<std::size_t, std::size_t>(first - r.begin(), last - r.begin());
    };

    std::vector<std::size_t> idx(n, 0), last(n, P);
    std::vector<double> ssum(n + 1, 0.0);
    int level = 0;
    while (level >= 0) {
        if (idx[level] >= last[level]) {
            --level;
            if (level >= 0) ++idx[level];
            continue;
        }
        const BlockRecord& cur = r[idx[level]];
        bool ok = true;
        if (level > 0) {
            const double diff = r[idx[level - 1]].q - cur.q;
            ok = spec.intervals[level - 1].contains(diff);
        }
        if (ok && euclid) ok = ssum[level] + cur.s <= T2;
        if (!ok) {
            ++idx[level];
            continue;
        }
        if (level == n - 1) {
            ++total;
            ++idx[level];
        } else {
            ssum[level + 1] = ssum[level] + cur.s;
            ++level;
            auto [lo, hi] = level_range(cur.q, spec.intervals[level - 1]);
            idx[level] = lo;
            last[level] = hi;
        }
    }

    CountResult res;
    res.count = total;
    res.T = cat.T;
    res.spec_fingerprint = spec.fingerprint();
    return res;
}

namespace {

/// Sliding q-window over the (q,s)-sorted catalog with an s-sorted shadow
/// array, rebuilt from scratch every sqrt(P) slides.
class ShadowWindow {
public:
    ShadowWindow(const std::vector<BlockRecord>& recs, double a, double b)
        : recs_(recs), a_(a), b_(b) {
        rebuild_every_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(recs.size()))));
    }

    void slide_to(double qref) {
        const std::size_t nlo = window_lo(recs_, qref, a_);
        const std::size_t nhi = window_hi(recs_, qref, b_);
        if (++slides_since_rebuild_ >= rebuild_every_) {
            lo_ = nlo;
            hi_ = std::max(nhi, nlo);
            rebuild();
            return;
        }
        // windows only move right as qref increases
        for (std::size_t i = lo_; i < std::min(nlo, hi_); ++i) remove_s(recs_[i].s);
        if (nlo > hi_) {
            lo_ = nlo;
            hi_ = nlo;
            shadow_.clear();
        } else {
            lo_ = nlo;
        }
        for (std::size_t i = std::max(hi_, nlo); i < nhi; ++i) insert_s(recs_[i].s);
        hi_ = std::max(nhi, lo_);
    }

    const std::vector<double>& sorted_s() const { return shadow_; }

private:
    void rebuild() {
        shadow_.clear();
        shadow_.reserve(hi_ - lo_);
        for (std::size_t i = lo_; i < hi_; ++i) shadow_.push_back(recs_[i].s);
        std::sort(shadow_.begin(), shadow_.end());
        slides_since_rebuild_ = 0;
    }
    void insert_s(double s) {
        shadow_.insert(std::upper_bound(shadow_.begin(), shadow_.end(), s), s);
    }
    void remove_s(double s) {
        auto it = std::lower_bound(shadow_.begin(), shadow_.end(), s);
        shadow_.erase(it);
    }

    const std::vector<BlockRecord>& recs_;
    double a_, b_;
    std::size_t lo_ = 0, hi_ = 0;
    std::size_t slides_since_rebuild_ = 0, rebuild_every_ = 1;
    std::vector<double> shadow_;
};

/// Pairs (x, y) from the two ascending arrays with x + y + s_fixed <= cap.
__int128 merge_pair_count(const std::vector<double>& s1, const std::vector<double>& s3,
                          double s_fixed, double cap) {
    __int128 pairs = 0;
    std::size_t k = s3.size();
    for (std::size_t j = 0; j < s1.size(); ++j) {
        while (k > 0 && s1[j] + s3[k - 1] + s_fixed > cap) --k;
        if (k == 0) break;
        pairs += static_cast<__int128>(k);
    }
    return pairs;
}

__int128 join_count_n3(const CorrelationSpec& spec, const BlockCatalog& cat) {
    const auto& r = cat.records;
    const double T2 = cat.T * cat.T;
    ShadowWindow w1(r, spec.intervals[0].a, spec.intervals[0].b);
    ShadowWindow w3(r, -spec.intervals[1].b, -spec.intervals[1].a);
    __int128 total = 0;
    for (const BlockRecord& mid : r) {
        w1.slide_to(mid.q);
        w3.slide_to(mid.q);
        total += merge_pair_count(w1.sorted_s(), w3.sorted_s(), mid.s, T2);
    }
    return total;
}

/// Recursive extension for 4 <= n <= 6: explicit loops over the leading
/// blocks, merge-walk pair count for the last two.
__int128 join_count_recursive(const CorrelationSpec& spec, const BlockCatalog& cat) {
    const auto& r = cat.records;
    const int n = spec.n;
    const double T2 = cat.T * cat.T;

    // count tuples (v_level, ..., v_n) given the previous block value / budget
    std::function<__int128(int, double, double)> rec = [&](int level, double q_prev,
                                                           double s_used) -> __int128 {
        const Interval& iv = spec.intervals[level - 2];
        const std::size_t lo = window_lo(r, q_prev, -iv.b);
        const std::size_t hi = window_hi(r, q_prev, -iv.a);
        // window of candidates v_level: q_prev - q ∈ iv  <=>  q - q_prev ∈ [-b, -a]
        __int128 total = 0;
        if (level == n) {
            for (std::size_t i = lo; i < hi; ++i)
                if (s_used + r[i].s <= T2) ++total;
            return total;
        }
        for (std::size_t i = lo; i < hi; ++i) {
            if (s_used + r[i].s > T2) continue;
            total += rec(level + 1, r[i].q, s_used + r[i].s);
        }
        return total;
    };

    __int128 total = 0;
    for (const BlockRecord& first : r) {
        if (first.s > T2) continue;
        total += rec(2, first.q, first.s);
    }
    return total;
}

}  // namespace

CountResult count_euclidean_join(const CorrelationSpec& spec, double T,
                                 const CountingLimits& limits) {
    return count_euclidean_join(spec, enumerate_block(spec.form, T, spec.ball, limits.enumeration),
                                limits);
}

CountResult count_euclidean_join(const CorrelationSpec& spec, const BlockCatalog& cat,
                                 const CountingLimits& limits) {
    (void)limits;
    check_spec_catalog(spec, cat);
    if (spec.ball != Ball::Euclidean)
        throw DomainError("count_euclidean_join requires the Euclidean ball");
    if (spec.n > 6) throw UnsupportedArity("count_euclidean_join supports n <= 6");

    CountResult res;
    res.T = cat.T;
    res.spec_fingerprint = spec.fingerprint();
    res.count = spec.n == 2   ? join_count_recursive(spec, cat)
                : spec.n == 3 ? join_count_n3(spec, cat)
                              : join_count_recursive(spec, cat);
    return res;
}

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw CapacityExceeded("counter overflow in chain stage (64-bit)");
    return out;
}

}  // namespace

CountResult count_chain_max(const CorrelationSpec& spec, double T, const CountingLimits& limits) {
    return count_chain_max(spec, enumerate_block(spec.form, T, spec.ball, limits.enumeration),
                           limits);
}

CountResult count_chain_max(const CorrelationSpec& spec, const BlockCatalog& cat,
                            const CountingLimits& limits) {
    check_spec_catalog(spec, cat);
    if (spec.ball != Ball::Max) throw DomainError("count_chain_max requires the Max ball");
    const auto& r = cat.records;
    const std::size_t P = r.size();
    if (P > limits.max_chain_points)
        throw CapacityExceeded("count_chain_max: catalog exceeds the point limit");
    if (P == 0) {
        CountResult res;
        res.T = cat.T;
        res.spec_fingerprint = spec.fingerprint();
        return res;
    }

    // w_1 = 1; w_{i+1}(v') = sum over v with q(v) - q(v') in I_i of w_i(v),
    // evaluated with prefix sums over the q-sorted catalog.
    std::vector<std::uint64_t> weight(P, 1), prefix(P + 1, 0), next(P);
    for (int stage = 0; stage + 1 < spec.n; ++stage) {
        const Interval& iv = spec.intervals[stage];
        prefix[0] = 0;
        for (std::size_t i = 0; i < P; ++i) prefix[i + 1] = checked_add(prefix[i], weight[i]);
        for (std::size_t i = 0; i < P; ++i) {
            const std::size_t lo = window_lo(r, r[i].q, iv.a);
            const std::size_t hi = window_hi(r, r[i].q, iv.b);
            next[i] = prefix[std::max(hi, lo)] - prefix[lo];
        }
        weight.swap(next);
    }

    __int128 total = 0;
    for (std::size_t i = 0; i < P; ++i) total += static_cast<__int128>(weight[i]);

    CountResult res;
    res.count = total;
    res.T = cat.T;
    res.spec_fingerprint = spec.fingerprint();
    return res;
}

CountResult count_fast(const CorrelationSpec& spec, const BlockCatalog& cat,
                       const CountingLimits& limits) {
    return spec.ball == Ball::Euclidean ? count_euclidean_join(spec, cat, limits)
                                        : count_chain_max(spec, cat, limits);
}

}  // namespace qfc
