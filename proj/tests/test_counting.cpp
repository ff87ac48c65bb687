#include "doctest.h"

#include <cmath>
#include <vector>

#include "qfc/counting.hpp"
#include "qfc/errors.hpp"
#include "qfc/rng.hpp"

using namespace qfc;

namespace {

Matrix diag(std::initializer_list<double> entries) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(entries.size()),
                            static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (double e : entries) m(i, i) = e, ++i;
    return m;
}

// Independent brute force: nested loops over [-floor(T), floor(T)]^d.
long long brute_block_count(int d, double T, Ball ball) {
    const long long K = static_cast<long long>(std::floor(T));
    long long count = 0;
    std::vector<long long> v(d, -K);
    for (;;) {
        double s = 0;
        for (int j = 0; j < d; ++j) s += static_cast<double>(v[j]) * v[j];
        if (ball == Ball::Max || s <= T * T) ++count;
        int lev = d - 1;
        while (lev >= 0 && ++v[lev] > K) v[lev--] = -K;
        if (lev < 0) break;
    }
    return count;
}

QuadraticForm random_diag_form(Rng& rng, bool with_sqrt2) {
    Vector ev(5);
    for (int i = 0; i < 5; ++i) ev(i) = (0.5 + 1.5 * rng.uniform()) * (i < 3 ? 1.0 : -1.0);
    if (with_sqrt2) ev(4) = -std::sqrt(2.0);
    return QuadraticForm::construct(Matrix(ev.asDiagonal()));
}

}  // namespace

TEST_CASE("enumerate_block trivial counts") {
    auto q2 = QuadraticForm::construct(Matrix::Identity(2, 2));
    CHECK(enumerate_block(q2, 1.0, Ball::Euclidean).count() == 5);

    auto q5 = QuadraticForm::construct(Matrix::Identity(5, 5));
    CHECK(enumerate_block(q5, 1.0, Ball::Max).count() == 243);  // {-1,0,1}^5
}

TEST_CASE("enumerate_block d=5 T=2 Euclidean matches brute force") {
    auto q5 = QuadraticForm::construct(Matrix::Identity(5, 5));
    auto cat = enumerate_block(q5, 2.0, Ball::Euclidean);
    CHECK(brute_block_count(5, 2.0, Ball::Euclidean) == 221);
    CHECK(cat.count() == 221);
    // records sorted by q, s within bounds
    for (std::size_t i = 1; i < cat.records.size(); ++i) CHECK(cat.records[i - 1].q <= cat.records[i].q);
    for (const auto& rec : cat.records) CHECK(rec.s <= 4.0);
}

TEST_CASE("enumerate_block capacity refusal") {
    auto q5 = QuadraticForm::construct(Matrix::Identity(5, 5));
    EnumerationLimits lim;
    lim.max_block_points = 100;
    CHECK_THROWS_AS(enumerate_block(q5, 5.0, Ball::Max, lim), CapacityExceeded);
}

TEST_CASE("count_naive examples") {
    auto q = QuadraticForm::construct(diag({1, 1, 1, -1, -1}));
    CorrelationSpec spec(q, 3, {Interval(-0.5, 0.5), Interval(-0.5, 0.5)}, Ball::Euclidean);
    auto res = count_naive(spec, 1.0);
    // Only the zero tuple: any unit vector forces a Q-difference of +-1.
    CHECK(static_cast<long long>(res.count) == 1);

    CorrelationSpec frac(q, 3, {Interval(0.25, 0.75), Interval(0.25, 0.75)}, Ball::Euclidean);
    CHECK(static_cast<long long>(count_naive(frac, 1.0).count) == 0);  // Q(Z^5) is integral
}

TEST_CASE("count zero tuple whenever 0 is interior") {
    auto q = QuadraticForm::construct(diag({1, 1, 1, -1, -1}));
    CorrelationSpec spec(q, 3, {Interval(-0.1, 0.1), Interval(-0.1, 0.1)}, Ball::Max);
    CHECK(static_cast<long long>(count_naive(spec, 1.0).count) >= 1);
}

TEST_CASE("n=2 reduction cross-check with an independent double loop") {
    Rng rng(11);
    auto q = random_diag_form(rng, true);
    CorrelationSpec spec(q, 2, {Interval(-0.4, 0.9)}, Ball::Euclidean);
    auto cat = enumerate_block(q, 2.0, Ball::Euclidean);
    // independent two-loop pair count
    long long pairs = 0;
    const double T2 = 4.0;
    for (const auto& a : cat.records)
        for (const auto& b : cat.records)
            if (a.s + b.s <= T2 && spec.intervals[0].contains(a.q - b.q)) ++pairs;
    CHECK(static_cast<long long>(count_naive(spec, cat).count) == pairs);
    CHECK(static_cast<long long>(count_euclidean_join(spec, cat).count) == pairs);
}

TEST_CASE("euclidean join equals naive on randomized specs") {
    Rng rng(20240818);
    for (int trial = 0; trial < 12; ++trial) {
        auto q = random_diag_form(rng, trial == 0);
        const double T = 1.0 + 1.5 * rng.uniform();
        const double a1 = -rng.uniform(), b1 = rng.uniform();
        const double a2 = rng.uniform(-1.0, 0.2), b2 = rng.uniform(0.3, 1.2);
        CorrelationSpec spec(q, 3, {Interval(a1, b1), Interval(a2, b2)}, Ball::Euclidean);
        auto cat = enumerate_block(q, T, Ball::Euclidean);
        auto fast = count_euclidean_join(spec, cat);
        auto oracle = count_naive(spec, cat);
        CHECK(fast.count == oracle.count);
    }
}

TEST_CASE("chain max equals naive on randomized specs") {
    Rng rng(20240819);
    CountingLimits lim;
    lim.max_naive_tuples = 1e11;  // windowed oracle handles this easily
    for (int trial = 0; trial < 10; ++trial) {
        auto q = random_diag_form(rng, trial == 0);
        const double T = trial % 2 == 0 ? 1.0 : 2.0;
        CorrelationSpec spec(q, 3,
                             {Interval(rng.uniform(-1.0, -0.1), rng.uniform(0.0, 1.0)),
                              Interval(rng.uniform(-1.0, -0.1), rng.uniform(0.0, 1.0))},
                             Ball::Max);
        auto cat = enumerate_block(q, T, Ball::Max);
        CHECK(count_chain_max(spec, cat).count == count_naive(spec, cat, lim).count);
    }
}

TEST_CASE("windowed oracle equals a plain full scan") {
    // anchors the window search inside count_naive itself
    Rng rng(808);
    auto q = random_diag_form(rng, true);
    for (Ball ball : {Ball::Euclidean, Ball::Max}) {
        auto cat = enumerate_block(q, 1.0, ball);
        Interval i1(-0.7, 0.4), i2(-0.3, 0.9);
        const double T2 = 1.0;
        long long plain = 0;
        for (const auto& a : cat.records)
            for (const auto& b : cat.records) {
                if (!i1.contains(a.q - b.q)) continue;
                for (const auto& c : cat.records) {
                    if (!i2.contains(b.q - c.q)) continue;
                    if (ball == Ball::Euclidean && a.s + b.s + c.s > T2) continue;
                    ++plain;
                }
            }
        CorrelationSpec spec(q, 3, {i1, i2}, ball);
        CHECK(static_cast<long long>(count_naive(spec, cat).count) == plain);
    }
}

TEST_CASE("vacuous intervals give P^n") {
    auto q = QuadraticForm::construct(diag({1, 1, 1, -1, -1}));
    const double T = 1.0;
    const double big = 2.0 * q.lambda_max() * 5 * T * T + 10.0;
    CorrelationSpec spec(q, 3, {Interval(-big, big), Interval(-big, big)}, Ball::Max);
    auto cat = enumerate_block(q, T, Ball::Max);
    const __int128 p = cat.count();
    CHECK(count_chain_max(spec, cat).count == p * p * p);
}

TEST_CASE("far-off intervals give zero") {
    auto q = QuadraticForm::construct(diag({1, 1, 1, -1, -1}));
    const double T = 1.5;
    const double off = 10.0 * q.lambda_max() * T * T;
    CorrelationSpec spec(q, 3, {Interval(off, off + 1), Interval(off, off + 1)}, Ball::Euclidean);
    CHECK(static_cast<long long>(count_euclidean_join(spec, T).count) == 0);
}

TEST_CASE("reversal symmetry is exact") {
    Rng rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        auto q = random_diag_form(rng, trial % 2 == 0);
        const double T = 1.9;
        Interval i1(rng.uniform(-1.0, -0.2), rng.uniform(0.0, 0.8));
        Interval i2(rng.uniform(-0.9, -0.1), rng.uniform(0.1, 1.1));
        for (Ball ball : {Ball::Euclidean, Ball::Max}) {
            CorrelationSpec fwd(q, 3, {i1, i2}, ball);
            CorrelationSpec rev(q, 3, {i2.negate(), i1.negate()}, ball);
            auto cat = enumerate_block(q, T, ball);
            auto a = count_fast(fwd, cat);
            auto b = count_fast(rev, cat);
            CHECK(a.count == b.count);
            CHECK(a.count == count_naive(fwd, cat).count);
        }
    }
}

TEST_CASE("monotone in T and in intervals") {
    Rng rng(99);
    auto q = random_diag_form(rng, true);
    CorrelationSpec spec(q, 3, {Interval(-0.5, 0.5), Interval(-0.5, 0.5)}, Ball::Max);
    CorrelationSpec wider(q, 3, {Interval(-0.8, 0.6), Interval(-0.5, 0.9)}, Ball::Max);
    auto c1 = count_chain_max(spec, 1.0);
    auto c2 = count_chain_max(spec, 2.0);
    CHECK(c1.count <= c2.count);
    CHECK(count_chain_max(spec, 2.0).count <= count_chain_max(wider, 2.0).count);
}

TEST_CASE("rescaled form with scaled intervals counts identically") {
    // count invariance: (c Q, c I) vs (Q, I), brute-forced at T = 1.5
    auto q = QuadraticForm::construct(diag({1, std::sqrt(2.0), 1, -1, -1}));
    auto rescaled = q.rescale_to_min_eigen(3);
    const double c = rescaled.rescale_factor();
    CHECK(rescaled.lambda_min() == doctest::Approx(2.0));
    Interval i1(-0.5, 0.5), i2(-0.25, 0.6);
    CorrelationSpec spec(q, 3, {i1, i2}, Ball::Euclidean);
    CorrelationSpec spec_scaled(rescaled, 3, {i1.scaled(c), i2.scaled(c)}, Ball::Euclidean);
    CHECK(count_naive(spec, 1.5).count == count_naive(spec_scaled, 1.5).count);
}

TEST_CASE("n=4 recursive extension equals naive") {
    Rng rng(4242);
    auto q = random_diag_form(rng, false);
    CorrelationSpec spec(q, 4,
                         {Interval(-0.6, 0.6), Interval(-0.4, 0.8), Interval(-0.7, 0.3)},
                         Ball::Euclidean);
    auto cat = enumerate_block(q, 1.4, Ball::Euclidean);
    CHECK(count_euclidean_join(spec, cat).count == count_naive(spec, cat).count);
}

TEST_CASE("arity cap") {
    auto q = QuadraticForm::construct(Matrix::Identity(8, 8));
    std::vector<Interval> ivals(6, Interval(-0.5, 0.5));
    CorrelationSpec spec(q, 7, ivals, Ball::Euclidean);
    CHECK_THROWS_AS(count_euclidean_join(spec, 1.0), UnsupportedArity);
}

TEST_CASE("identical catalogs under per-block sign flip of Q's argument") {
    // Q(-v) = Q(v): replacing Q by Q o (-id) leaves every record fixed.
    Rng rng(3);
    auto q = random_diag_form(rng, true);
    auto cat = enumerate_block(q, 1.8, Ball::Euclidean);
    // enumerating with the same form again (the sign flip acts on points, which
    // range over a symmetric set) must give byte-identical records
    auto cat2 = enumerate_block(q, 1.8, Ball::Euclidean);
    REQUIRE(cat.count() == cat2.count());
    for (std::size_t i = 0; i < cat.records.size(); ++i) {
        CHECK(cat.records[i].q == cat2.records[i].q);
        CHECK(cat.records[i].s == cat2.records[i].s);
    }
}
