#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amc/generators.hpp"
#include "amc/linalg.hpp"
#include "amc/rng.hpp"

#include <cmath>

using namespace amc;

namespace {

Mat cols_of(std::initializer_list<std::initializer_list<double>> cols) {
    int n = static_cast<int>(cols.size());
    int m = static_cast<int>(cols.begin()->size());
    Mat a(m, n);
    int j = 0;
    for (const auto& c : cols) {
        int i = 0;
        for (double v : c) a(i++, j) = v;
        ++j;
    }
    return a;
}

}  // namespace

TEST_CASE("orthonormalize single vector") {
    Mat v = cols_of({{0, 0, 1, 0, 0, 2}});
    Basis b = orthonormalize(v);
    REQUIRE(b.dim() == 1);
    CHECK(b.Q.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    Vec expect(6);
    expect << 0, 0, 1, 0, 0, 2;
    expect /= std::sqrt(5.0);
    CHECK(std::abs(b.Q.col(0).dot(expect)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthonormalize keeps independent pairs and drops dependent ones") {
    Basis id = orthonormalize(cols_of({{1, 0}, {0, 1}}));
    REQUIRE(id.dim() == 2);
    CHECK((id.Q.transpose() * id.Q - Mat::Identity(2, 2)).norm() < 1e-12);

    Basis dep = orthonormalize(cols_of({{1, 1}, {2, 2}}));
    REQUIRE(dep.dim() == 1);
    Vec dir(2);
    dir << 1, 1;
    dir /= std::sqrt(2.0);
    CHECK(std::abs(dep.Q.col(0).dot(dir)) == doctest::Approx(1.0).epsilon(1e-12));

    Basis empty = orthonormalize(Mat(3, 0));
    CHECK(empty.dim() == 0);
}

TEST_CASE("restricted residual on the rank-1 trace column") {
    Basis b = orthonormalize(cols_of({{0, 0, 1, 0, 0, 2}}));
    Vec x(2);
    x << 0, 0;
    CHECK(restricted_residual(b, {0, 4}, x) == doctest::Approx(0.0));
}

TEST_CASE("restricted residual with empty basis is the input norm") {
    Basis b;
    b.Q = Mat(2, 0);
    Vec x(2);
    x << 3, 4;
    CHECK(restricted_residual(b, {0, 1}, x) == doctest::Approx(5.0));
}

TEST_CASE("restricted residual when the basis vanishes on the row set") {
    Basis b = orthonormalize(cols_of({{1, 0, 0}}));
    Vec x(2);
    x << 1, 1;
    CHECK(restricted_residual(b, {1, 2}, x) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("restricted residual vanishes on spanned vectors") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int m = 5 + rng.uniform_int(8);
        int r = 1 + rng.uniform_int(3);
        Mat raw(m, r);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < r; ++j) raw(i, j) = rng.gaussian();
        Basis b = orthonormalize(raw);
        Vec coef(b.dim());
        for (int j = 0; j < b.dim(); ++j) coef(j) = rng.gaussian();
        Vec x = b.Q * coef;
        Indices all;
        for (int i = 0; i < m; ++i) all.push_back(i);
        CHECK(restricted_residual(b, all, x) <= 1e-9 * std::max(1.0, x.norm()));
    }
}

TEST_CASE("reconstruct_column on the rank-1 trace fixture") {
    Basis b = orthonormalize(cols_of({{0, 0, 1, 0, 0, 2}}));
    Vec obs(1);
    obs << 3;
    Vec rec = reconstruct_column(b, {2}, obs);
    Vec expect(6);
    expect << 0, 0, 3, 0, 0, 6;
    CHECK((rec - expect).norm() < 1e-12);
}

TEST_CASE("reconstruct_column basic cases") {
    Basis b = orthonormalize(cols_of({{1, 1, 1, 1}}));
    Vec zeros = Vec::Zero(2);
    CHECK(reconstruct_column(b, {0, 3}, zeros).norm() == doctest::Approx(0.0));

    Vec obs(2);
    obs << 2, 2;
    Vec rec = reconstruct_column(b, {0, 1}, obs);
    Vec expect = Vec::Constant(4, 2.0);
    CHECK((rec - expect).norm() < 1e-12);
}

TEST_CASE("reconstruct_column rejects rank-deficient row sets") {
    Basis b = orthonormalize(cols_of({{1, 0, 0}, {0, 1, 0}}));
    Vec obs(1);
    obs << 1;
    CHECK_THROWS_AS((void)reconstruct_column(b, {2}, obs), std::runtime_error);
}

TEST_CASE("reconstruct_column is a left inverse on the span") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int m = 6 + rng.uniform_int(6);
        int r = 1 + rng.uniform_int(3);
        Mat raw(m, r);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < r; ++j) raw(i, j) = rng.gaussian();
        Basis b = orthonormalize(raw);
        Vec coef(b.dim());
        for (int j = 0; j < b.dim(); ++j) coef(j) = rng.gaussian();
        Vec x = b.Q * coef;
        Indices rows = rng.sample_without_replacement(m, b.dim() + 1);
        Vec x_rows(static_cast<int>(rows.size()));
        for (size_t t = 0; t < rows.size(); ++t) x_rows(static_cast<int>(t)) = x(rows[t]);
        Vec rec = reconstruct_column(b, rows, x_rows);
        CHECK((rec - x).norm() <= 1e-8 * std::max(1.0, x.norm()));
    }
}

TEST_CASE("numeric_rank on the pinned fixtures") {
    CHECK(numeric_rank(named_fixture("spiky-a")) == 2);
    CHECK(numeric_rank(Mat::Zero(3, 5)) == 0);
    CHECK(numeric_rank(named_fixture("dependence-witness")) == 3);
}

TEST_CASE("numeric_rank is permutation and transpose invariant") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 4 + rng.uniform_int(5);
        int n = 4 + rng.uniform_int(5);
        int r = 1 + rng.uniform_int(3);
        Mat a = gen_gaussian_lowrank(m, n, r, 1000 + static_cast<uint64_t>(trial));
        int base = numeric_rank(a);
        CHECK(base == r);
        Indices perm = rng.sample_without_replacement(m, m);
        Mat shuffled(m, n);
        for (int i = 0; i < m; ++i) shuffled.row(i) = a.row(perm[static_cast<size_t>(i)]);
        CHECK(numeric_rank(shuffled) == base);
        CHECK(numeric_rank(Mat(a.transpose())) == base);
    }
}

TEST_CASE("exact and float rank agree on integer fixtures") {
    Tolerance exact;
    exact.exact = true;
    for (const char* name : {"spiky-a", "spiky-b", "dependence-witness", "cost-gap",
                             "cost-equal", "rank1-trace"}) {
        Mat a = named_fixture(name);
        CHECK(numeric_rank(a, exact) == numeric_rank(a));
    }
}

TEST_CASE("is_nonsingular basics") {
    Mat one(1, 1);
    one << 1;
    CHECK(is_nonsingular(one));
    Mat prop(2, 2);
    prop << 1, 2, 2, 4;
    CHECK_FALSE(is_nonsingular(prop));
}

TEST_CASE("restricted witness block is not nonsingular") {
    Mat a = named_fixture("dependence-witness");
    Mat block(3, 2);
    for (int t = 0; t < 3; ++t) {
        block(t, 0) = a(t + 1, 0);
        block(t, 1) = a(t + 1, 2);
    }
    CHECK_FALSE(is_nonsingular(block));
}

TEST_CASE("subspace_angle_sin endpoints") {
    Basis b = orthonormalize(cols_of({{1, 0, 0}}));
    Vec inside(3);
    inside << 2, 0, 0;
    CHECK(subspace_angle_sin(b, inside) == doctest::Approx(0.0).epsilon(1e-12));
    Vec ortho(3);
    ortho << 0, 3, 0;
    CHECK(subspace_angle_sin(b, ortho) == doctest::Approx(1.0).epsilon(1e-12));
}
