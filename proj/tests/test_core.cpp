#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twistlab/core.hpp"
#include "twistlab/rng.hpp"

using namespace twistlab;

namespace {

FinVec random_vec(IndexSet set, rng::Stream& st) {
    std::vector<double> e(set.size());
    for (double& v : e) v = st.gaussian();
    return FinVec(set, std::move(e));
}

// independent oracle: sum the block norms directly, never through pnorm's
// whole-vector path
double blockwise_pnorm(const FinVec& v, const ChunkPartition& part, PNorm p) {
    double acc = 0.0;
    for (const auto& block : part.blocks()) {
        double bs = 0.0;
        for (std::size_t i : block) bs += std::pow(std::fabs(v[i]), p.p);
        acc += bs;
    }
    return std::pow(acc, 1.0 / p.p);
}

ChunkPartition random_partition(IndexSet set, rng::Stream& st) {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < set.size(); ++i) {
        current.push_back(i);
        if ((st.bits() & 3u) == 0 || i + 1 == set.size()) {
            blocks.push_back(current);
            current.clear();
        }
    }
    return ChunkPartition(set, std::move(blocks));
}

}  // namespace

TEST_CASE("pnorm basics") {
    IndexSet set(8);
    CHECK(pnorm(FinVec::unit(set, 1) + FinVec::unit(set, 2), PNorm(2.0)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(pnorm(FinVec::zeros(set), PNorm(0.5)) == 0.0);
    CHECK(pnorm(FinVec::zeros(set), PNorm(3.0)) == 0.0);

    // zero exactly at the zero vector
    FinVec tiny = 1e-300 * FinVec::unit(set, 0);
    CHECK(pnorm(tiny, PNorm(2.0)) > 0.0);
}

TEST_CASE("pnorm agrees with the blockwise summation oracle") {
    rng::Stream st(2024, 0);
    for (double p : {0.5, 1.0, 2.0, 3.5}) {
        for (int rep = 0; rep < 100; ++rep) {
            IndexSet set(2 + st.index(60));
            FinVec v = random_vec(set, st);
            ChunkPartition part = random_partition(set, st);
            const double direct = pnorm(v, PNorm(p));
            const double oracle = blockwise_pnorm(v, part, PNorm(p));
            CHECK(direct == doctest::Approx(oracle).epsilon(1e-12));
        }
    }
}

TEST_CASE("pnorm absolute homogeneity") {
    rng::Stream st(7, 1);
    for (int rep = 0; rep < 200; ++rep) {
        IndexSet set(1 + st.index(40));
        FinVec v = random_vec(set, st);
        const double lambda = st.gaussian();
        for (double p : {0.5, 1.0, 2.0, 4.0}) {
            CHECK(pnorm(lambda * v, PNorm(p)) ==
                  doctest::Approx(std::fabs(lambda) * pnorm(v, PNorm(p))).epsilon(1e-12));
        }
    }
}

TEST_CASE("triangle inequality, sampled") {
    rng::Stream st(99, 2);
    for (int rep = 0; rep < 300; ++rep) {
        IndexSet set(1 + st.index(30));
        FinVec x = random_vec(set, st);
        FinVec y = random_vec(set, st);
        for (double p : {1.0, 2.0, 3.0}) {
            CHECK(pnorm(x + y, PNorm(p)) <= pnorm(x, PNorm(p)) + pnorm(y, PNorm(p)) + 1e-12);
        }
        // p < 1: quasi-triangle constant 2^(1/p - 1)
        for (double p : {0.25, 0.5, 0.75}) {
            const double c = std::pow(2.0, 1.0 / p - 1.0);
            CHECK(pnorm(x + y, PNorm(p)) <= c * (pnorm(x, PNorm(p)) + pnorm(y, PNorm(p))) + 1e-12);
        }
    }
}

TEST_CASE("chunk_restrict") {
    IndexSet set(4);
    FinVec v = FinVec::unit(set, 0) + FinVec::unit(set, 2);

    std::vector<std::size_t> full{0, 1, 2, 3};
    CHECK(chunk_restrict(v, full) == v);

    std::vector<std::size_t> empty;
    CHECK(chunk_restrict(v, empty) == FinVec::zeros(set));

    std::vector<std::size_t> pair{0, 1};
    CHECK(chunk_restrict(v, pair) == FinVec::unit(set, 0));

    std::vector<std::size_t> bad{5};
    CHECK_THROWS_AS(chunk_restrict(v, bad), std::domain_error);
}

TEST_CASE("chunk decomposition is exact") {
    rng::Stream st(5, 5);
    for (int rep = 0; rep < 100; ++rep) {
        IndexSet set(1 + st.index(50));
        FinVec v = random_vec(set, st);
        ChunkPartition part = random_partition(set, st);
        FinVec sum = FinVec::zeros(set);
        for (const auto& block : part.blocks()) sum = sum + chunk_restrict(v, block);
        CHECK(sum == v);
    }
}

TEST_CASE("sign_apply") {
    IndexSet set(6);
    rng::Stream st(13, 0);
    FinVec v = random_vec(set, st);

    CHECK(sign_apply(SignPattern::all_plus(set), v) == v);
    CHECK(sign_apply(SignPattern::all_minus(set), v) == -v);

    std::vector<std::int8_t> signs{1, -1, 1, -1, -1, 1};
    SignPattern u(set, signs);
    CHECK(sign_apply(u, sign_apply(u, v)) == v);

    FinVec other(IndexSet(5), std::vector<double>(5, 0.0));
    CHECK_THROWS_AS(sign_apply(u, other), std::domain_error);
}

TEST_CASE("disjoint_equal_norm") {
    IndexSet set(4);
    const FinVec e1 = FinVec::unit(set, 0);
    const FinVec e2 = FinVec::unit(set, 1);
    CHECK(disjoint_equal_norm(e1, e2, PNorm(2.0)));
    CHECK_FALSE(disjoint_equal_norm(e1, e1, PNorm(2.0)));

    // |e1 + e2| and sqrt(2) e3 both have norm sqrt(2), by direct evaluation
    const FinVec x = e1 + e2;
    const FinVec y = std::sqrt(2.0) * FinVec::unit(set, 2);
    CHECK(pnorm(x, PNorm(2.0)) == doctest::Approx(pnorm(y, PNorm(2.0))).epsilon(1e-15));
    CHECK(disjoint_equal_norm(x, y, PNorm(2.0)));
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(IndexSet(0), std::domain_error);
    CHECK_THROWS_AS(PNorm(0.0), std::domain_error);
    CHECK_THROWS_AS(PNorm(-1.0), std::domain_error);

    auto short_entries = [] { return FinVec(IndexSet(2), std::vector<double>{1.0, 2.0, 3.0}); };
    CHECK_THROWS_AS(short_entries(), std::domain_error);
    auto nan_entry = [] { return FinVec(IndexSet(1), std::vector<double>{std::nan("")}); };
    CHECK_THROWS_AS(nan_entry(), std::domain_error);

    IndexSet grid(2, 3);
    CHECK(grid.size() == 6);
    CHECK(grid.to_index(1, 2) == 5);
    CHECK_THROWS_AS(grid.to_index(2, 0), std::domain_error);
    CHECK_THROWS_AS(IndexSet(4).to_index(0, 0), std::domain_error);

    auto missing = [] { return ChunkPartition(IndexSet(3), {{0, 1}}); };
    auto overlap = [] { return ChunkPartition(IndexSet(3), {{0, 1}, {1, 2}}); };
    auto empty_block = [] { return ChunkPartition(IndexSet(3), {{0, 1, 2}, {}}); };
    CHECK_THROWS_AS(missing(), std::domain_error);
    CHECK_THROWS_AS(overlap(), std::domain_error);
    CHECK_THROWS_AS(empty_block(), std::domain_error);
}
