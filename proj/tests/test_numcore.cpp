#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "scltpe/errors.hpp"
#include "scltpe/nn_ops.hpp"
#include "support.hpp"

using namespace scltpe;
using test_support::random_matrix;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("linear_forward basics") {
    const Matrix identity_w = from_rows({{1, 0}, {0, 1}});
    const Matrix b0(1, 2);
    CHECK(linear_forward(from_rows({{1, 2}}), identity_w, b0) == from_rows({{1, 2}}));

    const Matrix y = linear_forward(from_rows({{1, 1}}), from_rows({{2, 0}, {0, 3}}),
                                    from_rows({{1, 1}}));
    CHECK(y == from_rows({{3, 4}}));

    const Matrix zero_in(3, 2);
    CHECK(linear_forward(zero_in, from_rows({{5, -1}, {2, 7}}), b0) == Matrix(3, 2));

    CHECK_THROWS_AS(linear_forward(Matrix(2, 3), Matrix(2, 4), Matrix(1, 4)),
                    dimension_error);
}

TEST_CASE("linear_forward is additive in x") {
    Rng rng(7);
    const Matrix w = random_matrix(4, 3, rng);
    const Matrix b = random_matrix(1, 3, rng);
    const Matrix x1 = random_matrix(5, 4, rng);
    Matrix x2 = random_matrix(5, 4, rng);
    Matrix sum = x1;
    sum += x2;
    const Matrix lhs = linear_forward(sum, w, b);
    Matrix rhs = linear_forward(x1, w, b);
    rhs += linear_forward(x2, w, b);
    // f(x1+x2) = f(x1)+f(x2) - b
    for (std::size_t i = 0; i < rhs.rows; ++i)
        for (std::size_t j = 0; j < rhs.cols; ++j) rhs(i, j) -= b(0, j);
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("linear_backward hand cases") {
    const Matrix x = from_rows({{2}});
    const Matrix w = from_rows({{3}});
    const LinearGrads g = linear_backward(x, w, from_rows({{1}}));
    CHECK(g.dx(0, 0) == doctest::Approx(3.0));
    CHECK(g.dw(0, 0) == doctest::Approx(2.0));
    CHECK(g.db(0, 0) == doctest::Approx(1.0));

    const LinearGrads z = linear_backward(Matrix(2, 3, 1.0), Matrix(3, 2, 1.0),
                                          Matrix(2, 2, 0.0));
    CHECK(max_abs_diff(z.dx, Matrix(2, 3)) == 0.0);
    CHECK(max_abs_diff(z.dw, Matrix(3, 2)) == 0.0);
    CHECK(max_abs_diff(z.db, Matrix(1, 2)) == 0.0);
}

TEST_CASE("linear_backward matches finite differences") {
    Rng rng(0);
    const Matrix x = random_matrix(3, 4, rng);
    const Matrix w = random_matrix(4, 5, rng);
    const Matrix b = random_matrix(1, 5, rng);
    const Matrix dy = random_matrix(3, 5, rng);

    const auto weighted_sum = [&](const Matrix& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.data.size(); ++i) s += y.data[i] * dy.data[i];
        return s;
    };
    const LinearGrads g = linear_backward(x, w, dy);
    CHECK(grad_check([&](const Matrix& xx) { return weighted_sum(linear_forward(xx, w, b)); },
                     x, g.dx, 1e-5) < 1e-6);
    CHECK(grad_check([&](const Matrix& ww) { return weighted_sum(linear_forward(x, ww, b)); },
                     w, g.dw, 1e-5) < 1e-6);
    CHECK(grad_check([&](const Matrix& bb) { return weighted_sum(linear_forward(x, w, bb)); },
                     b, g.db, 1e-5) < 1e-6);
}

TEST_CASE("relu forward and backward") {
    const Matrix y = relu(from_rows({{-1, 0, 2}}));
    CHECK(y == from_rows({{0, 0, 2}}));

    const Matrix dx = relu_backward(from_rows({{-1.0}}), from_rows({{5.0}}));
    CHECK(dx(0, 0) == 0.0);

    Rng rng(3);
    Matrix x = random_matrix(4, 6, rng);
    for (double& v : x.data)
        if (std::abs(v) < 0.05) v += 0.2;  // keep clear of the kink
    const Matrix dy = random_matrix(4, 6, rng);
    Matrix analytic = relu_backward(x, dy);
    const auto weighted = [&](const Matrix& xx) {
        const Matrix yy = relu(xx);
        double s = 0.0;
        for (std::size_t i = 0; i < yy.data.size(); ++i) s += yy.data[i] * dy.data[i];
        return s;
    };
    CHECK(grad_check(weighted, x, analytic, 1e-5) < 1e-6);
}

TEST_CASE("l2_normalize_rows") {
    const Matrix y = l2_normalize_rows(from_rows({{3, 4}}));
    CHECK(y(0, 0) == doctest::Approx(0.6));
    CHECK(y(0, 1) == doctest::Approx(0.8));

    const Matrix unit = from_rows({{0.6, 0.8}});
    CHECK(max_abs_diff(l2_normalize_rows(unit), unit) < 1e-15);

    CHECK_THROWS_AS(l2_normalize_rows(Matrix(1, 3, 0.0)), numeric_error);

    Rng rng(11);
    const Matrix x = random_matrix(5, 7, rng);
    const Matrix z = l2_normalize_rows(x);
    for (std::size_t i = 0; i < z.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < z.cols; ++j) s += z(i, j) * z(i, j);
        CHECK(std::abs(std::sqrt(s) - 1.0) < 1e-12);
    }

    const Matrix dy = random_matrix(5, 7, rng);
    const Matrix dx = l2_normalize_rows_backward(x, dy);
    const auto weighted = [&](const Matrix& xx) {
        const Matrix yy = l2_normalize_rows(xx);
        double s = 0.0;
        for (std::size_t i = 0; i < yy.data.size(); ++i) s += yy.data[i] * dy.data[i];
        return s;
    };
    CHECK(grad_check(weighted, x, dx, 1e-5) < 1e-5);
}

TEST_CASE("adam_step") {
    AdamHyper h;

    SUBCASE("zero gradient is the identity on value") {
        ParamTensor p(Matrix(2, 2, 1.5));
        adam_step(p, h);
        CHECK(p.value == Matrix(2, 2, 1.5));
        CHECK(p.step == 1);
    }

    SUBCASE("first bias-corrected step has magnitude near lr") {
        ParamTensor p(Matrix(1, 1, 1.0));
        p.grad(0, 0) = 2.0;  // d/dw w^2 at w=1
        adam_step(p, h);
        CHECK(p.value(0, 0) == doctest::Approx(0.999).epsilon(1e-5));
        CHECK(p.grad(0, 0) == 0.0);  // cleared after the update
    }

    SUBCASE("descends w^2 monotonically") {
        ParamTensor p(Matrix(1, 1, 1.0));
        double prev = 1.0;
        for (int step = 0; step < 50; ++step) {
            p.grad(0, 0) = 2.0 * p.value(0, 0);
            adam_step(p, h);
            CHECK(p.value(0, 0) < prev);
            prev = p.value(0, 0);
        }
    }

    SUBCASE("non-finite gradient rejected") {
        ParamTensor p(Matrix(1, 1, 1.0));
        p.grad(0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(adam_step(p, h), numeric_error);
    }

    SUBCASE("hyperparameter bounds") {
        AdamHyper bad;
        bad.beta1 = 1.0;
        CHECK_THROWS_AS(bad.validate(), config_error);
    }
}

TEST_CASE("grad_check oracle sanity") {
    const auto sum_sq = [](const Matrix& m) {
        double s = 0.0;
        for (double v : m.data) s += v * v;
        return s;
    };
    const Matrix x = from_rows({{1, 2}});
    const Matrix analytic = from_rows({{2, 4}});
    CHECK(grad_check(sum_sq, x, analytic, 1e-5) < 1e-7);

    const auto constant = [](const Matrix&) { return 3.14; };
    CHECK(grad_check(constant, x, Matrix(1, 2, 0.0), 1e-5) == 0.0);
}

TEST_CASE("layer gradients match finite differences across seeds") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const Matrix x = random_matrix(3, 4, rng);
        const Matrix w = random_matrix(4, 2, rng);
        const Matrix b = random_matrix(1, 2, rng);
        const Matrix dy = random_matrix(3, 2, rng);
        const auto weighted = [&](const Matrix& xx) {
            const Matrix y = linear_forward(xx, w, b);
            double s = 0.0;
            for (std::size_t i = 0; i < y.data.size(); ++i) s += y.data[i] * dy.data[i];
            return s;
        };
        const LinearGrads g = linear_backward(x, w, dy);
        CHECK(grad_check(weighted, x, g.dx, 1e-5) < 1e-4);
    }
}
