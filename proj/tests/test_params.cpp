#include <doctest.h>

#include "maba/chain_oracle.hpp"
#include "maba/params.hpp"
#include "maba/prng.hpp"

using namespace maba;

namespace {

ModelParams generic_params(int sites = 2) {
    ModelParams p;
    p.sites = sites;
    p.c = {1.0, 0.0};
    p.theta = {{0.31, -0.12}, {-0.42, 0.27}, {0.18, 0.41}, {-0.05, -0.33}};
    p.theta.resize(sites);
    p.kappa_tilde = {1.1, 0.4};
    p.kappa = {0.7, -0.2};
    p.kappa_plus = {0.9, 0.1};
    p.kappa_minus = {-0.6, 0.8};
    p.rho1 = {0.55, 0.35};
    return p;
}

double mat2_diff(const Mat2& a, const Mat2& b) {
    double d = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
    return d;
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    Mat2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return out;
}

double twist_invariant_err(const ModelParams& p, const TwistDecomposition& t) {
    double err = 0.0;
    cx constraint = t.rho1 * t.rho2 - t.rho2 * p.kappa_tilde - t.rho1 * p.kappa +
                    p.kappa_plus * p.kappa_minus;
    err = std::max(err, std::abs(constraint));
    err = std::max(err,
                   std::abs(t.mu * (1.0 - t.rho1 * t.rho2 / (p.kappa_plus * p.kappa_minus)) - 1.0));
    Mat2 k{{{p.kappa_tilde, p.kappa_plus}, {p.kappa_minus, p.kappa}}};
    err = std::max(err, mat2_diff(mat2_mul(mat2_mul(t.b, t.d), t.a), k));
    for (cx d : {t.d_plus, t.d_minus})
        err = std::max(err, std::abs((p.kappa_tilde - t.rho1) * d * d -
                                     (p.kappa + p.kappa_tilde) * d + (p.kappa - t.rho2)));
    cx alpha = (p.kappa - t.rho2) / (p.kappa_tilde - t.rho1);
    cx eta = ((t.mu - 1.0) / t.beta + t.mu) * (p.kappa_tilde - t.rho1) / (p.kappa - t.rho2);
    cx xi = t.mu / t.beta * (t.beta + 1.0) * (t.beta + 1.0) * (t.mu - 1.0);
    err = std::max({err, std::abs(alpha - t.alpha), std::abs(eta - t.eta), std::abs(xi - t.xi)});
    return err;
}

}  // namespace

TEST_CASE("twist decomposition on the worked sample") {
    ModelParams p = generic_params();
    p.kappa_tilde = 2.0;
    p.kappa = 1.0;
    p.kappa_plus = 1.0;
    p.kappa_minus = 3.0;
    p.rho1 = 0.5;
    TwistDecomposition t = decompose_twist(p);
    CHECK(std::abs(t.rho2 - cx(5.0 / 3.0)) < 1e-14);
    CHECK(std::abs(t.mu - cx(18.0 / 13.0)) < 1e-14);
    CHECK(twist_invariant_err(p, t) < 1e-12);
}

TEST_CASE("degenerate twists are rejected") {
    ModelParams p = generic_params();
    SUBCASE("diagonal twist") {
        p.kappa_plus = 0.0;
        p.kappa_minus = 0.0;
        p.kappa_tilde = 1.0;
        p.kappa = 1.0;
        CHECK_THROWS_AS(decompose_twist(p), DegenerateTwist);
    }
    SUBCASE("mu pole at rho1 rho2 = kappa_plus kappa_minus") {
        p.kappa_tilde = 2.0;
        p.kappa = 1.0;
        p.kappa_plus = 1.0;
        p.kappa_minus = 3.0;
        p.rho1 = 3.0 - std::sqrt(3.0);  // root of rho1^2 - 6 rho1 + 6
        CHECK_THROWS_AS(decompose_twist(p), DegenerateTwist);
    }
    SUBCASE("rho1 = kappa_tilde") {
        p.rho1 = p.kappa_tilde;
        CHECK_THROWS_AS(decompose_twist(p), DegenerateTwist);
    }
    SUBCASE("singular twist matrix") {
        p.kappa_tilde = 2.0;
        p.kappa = 3.0;
        p.kappa_plus = 1.0;
        p.kappa_minus = 6.0;
        CHECK_THROWS_AS(decompose_twist(p), DegenerateTwist);
    }
}

TEST_CASE("inhomogeneity separation is enforced") {
    ModelParams p = generic_params(2);
    p.theta = {{0.5, 0.0}, {0.5 + 1e-9, 0.0}};
    CHECK_THROWS_AS(p.validate(), InvalidParams);
}

TEST_CASE("decomposition invariants hold over seeded random draws") {
    Prng rng(2024);
    int accepted = 0;
    while (accepted < 100) {
        ModelParams p = generic_params();
        p.kappa_tilde = rng.complex_annulus(0.4, 2.0);
        p.kappa = rng.complex_annulus(0.4, 2.0);
        p.kappa_plus = rng.complex_annulus(0.4, 2.0);
        p.kappa_minus = rng.complex_annulus(0.4, 2.0);
        p.rho1 = rng.complex_annulus(0.5, 2.0);
        TwistDecomposition t;
        try {
            t = decompose_twist(p);
        } catch (const DegenerateTwist&) {
            continue;
        }
        ++accepted;
        CHECK(twist_invariant_err(p, t) < 1e-12);
    }
}

TEST_CASE("transfer matrix is independent of the rho1 gauge") {
    ModelParams p1 = generic_params(2);
    ModelParams p2 = p1;
    p2.rho1 = {-1.2, 0.7};
    Model m1 = Model::make(p1);
    Model m2 = Model::make(p2);
    ChainOracle o1(m1), o2(m2);
    Prng rng(7);
    for (int i = 0; i < 2; ++i) {
        cx u = rng.complex_in_box(1.5);
        Eigen::MatrixXcd a = o1.transfer_matrix(u);
        Eigen::MatrixXcd b = o2.transfer_matrix(u);
        double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        CHECK((a - b).cwiseAbs().maxCoeff() / scale < 1e-10);
    }
}
