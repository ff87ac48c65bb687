#ifndef QFC_COUNTING_HPP
#define QFC_COUNTING_HPP

#include <cstdint>
#include <string>

#include "qfc/block_catalog.hpp"
#include "qfc/interval.hpp"

namespace qfc {

/// Exact correlation count. `count` is 128-bit: vacuous-interval stress cases
/// reach P^n which overflows 64 bits.
struct CountResult {
    __int128 count = 0;
    double T = 0.0;
    std::string spec_fingerprint;

    double count_as_double() const { return static_cast<double>(count); }
};

std::string int128_to_string(__int128 v);

struct CountingLimits {
    EnumerationLimits enumeration;
    double max_naive_tuples = 1e9;       // refusal threshold for the oracle
    std::uint64_t max_chain_points = 50000000;  // 5e7
};

/// Brute-force oracle: iterates all n-tuples of block points (with an early
/// rejection after each prefix constraint) and applies the radius and interval
/// constraints directly. Exact; refuses when the projected tuple count is
/// too large.
CountResult count_naive(const CorrelationSpec& spec, double T,
                        const CountingLimits& limits = {});
CountResult count_naive(const CorrelationSpec& spec, const BlockCatalog& cat,
                        const CountingLimits& limits = {});

/// Fast exact counter for the Euclidean ball. For each middle point the two
/// q-windows are located in the sorted catalog; pairs with s_1 + s_3 within
/// the remaining squared radius are counted by a two-sorted-array merge walk.
/// Windows are maintained as sliding ranges with s-sorted shadow arrays,
/// rebuilt from scratch every sqrt(P) slides. n >= 4 recurses over the leading
/// blocks. Identical to count_naive by construction.
CountResult count_euclidean_join(const CorrelationSpec& spec, double T,
                                 const CountingLimits& limits = {});
CountResult count_euclidean_join(const CorrelationSpec& spec, const BlockCatalog& cat,
                                 const CountingLimits& limits = {});

/// Fast exact counter for the Max ball: chain dynamic programming with integer
/// weights and prefix sums over the q-sorted catalog; two binary searches per
/// point per stage, O(n P log P).
CountResult count_chain_max(const CorrelationSpec& spec, double T,
                            const CountingLimits& limits = {});
CountResult count_chain_max(const CorrelationSpec& spec, const BlockCatalog& cat,
                            const CountingLimits& limits = {});

/// Mode dispatch used by the experiment runner.
CountResult count_fast(const CorrelationSpec& spec, const BlockCatalog& cat,
                       const CountingLimits& limits = {});

}  // namespace qfc

#endif
