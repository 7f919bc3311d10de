#include <doctest.h>

#include "maba/bethe.hpp"
#include "maba/parallel.hpp"
#include "maba/sampling.hpp"

using namespace maba;

namespace {

ModelParams base_params(int sites) {
    ModelParams p;
    p.sites = sites;
    p.c = {1.0, 0.0};
    p.theta = {{0.31, -0.12}, {-0.42, 0.27}, {0.18, 0.41}};
    p.theta.resize(sites);
    p.kappa_tilde = {1.1, 0.4};
    p.kappa = {0.7, -0.2};
    p.kappa_plus = {0.9, 0.1};
    p.kappa_minus = {-0.6, 0.8};
    p.rho1 = {0.55, 0.35};
    return p;
}

Model make_model(int sites) { return Model::make(base_params(sites)); }

// The four root sets of the two-site instance above, frozen from an
// independent solve (sorted by (re, im) of the first root).
std::vector<ParamSet> frozen_n2_solutions() {
    return {
        {{-1.0114075109277403, 1.0676495608541292}, {0.6821416493769972, 0.3261456270584796}},
        {{-0.5536427886854928, 0.08955372005053568}, {0.6413741572850898, 0.3608385199579453}},
        {{-0.44329930273748536, 1.0875234681149346}, {0.5310306713370826, -0.6371312281064536}},
        {{-0.0829383903700688, -0.8083766141475024}, {0.5876669891200061, 0.3153659062518548}},
    };
}

}  // namespace

TEST_CASE("single-site roots against the closed-form quadratic") {
    Model m = make_model(1);
    BetheSystem sys(m);
    // (k - rho2) lam2 - (kt - rho1) lam1 + (rho1 + rho2) lam1 lam2 = 0
    // with lam1 = u - t + c, lam2 = u - t (c = 1): a quadratic in u.
    cx t = m.theta()[0], c = m.crossing();
    cx a2 = m.rho_sum();
    cx a1 = m.k_r2() - m.kt_r1() + m.rho_sum() * (c - 2.0 * t);
    cx a0 = -m.k_r2() * t - m.kt_r1() * (c - t) + m.rho_sum() * (t * t - t * c);
    cx disc = std::sqrt(a1 * a1 - 4.0 * a2 * a0);
    ParamSet expected = {(-a1 + disc) / (2.0 * a2), (-a1 - disc) / (2.0 * a2)};

    MultiStartOptions ms;
    ms.seed = 3;
    ms.starts_per_state = 16;
    auto sols = sys.find_all_solutions({}, ms);
    REQUIRE(sols.size() == 2);
    for (const auto& s : sols) {
        double best = 1e300;
        for (cx e : expected) best = std::min(best, std::abs(s.roots[0] - e));
        CHECK(best < 1e-9);
        CHECK(s.iterations <= 20);
        CHECK(s.certified);
    }
}

TEST_CASE("two-site instance: all four frozen solutions recovered") {
    Model m = make_model(2);
    BetheSystem sys(m);
    MultiStartOptions ms;
    ms.seed = 9;
    auto sols = sys.find_all_solutions({}, ms);
    auto frozen = frozen_n2_solutions();
    REQUIRE(sols.size() == 4);
    for (const auto& f : frozen) {
        double best = 1e300;
        for (const auto& s : sols) {
            double d = std::max(std::abs(s.roots[0] - f[0]), std::abs(s.roots[1] - f[1]));
            best = std::min(best, d);
        }
        CHECK(best < 1e-7);
    }
}

TEST_CASE("starting at an exact root converges in zero iterations") {
    Model m = make_model(2);
    BetheSystem sys(m);
    auto frozen = frozen_n2_solutions();
    BetheSolution polish = sys.solve(frozen[0]);
    REQUIRE(polish.converged);
    BetheSolution again = sys.solve(polish.roots);
    CHECK(again.converged);
    CHECK(again.iterations == 0);
    CHECK(again.residual <= 1e-10);
}

TEST_CASE("eigenvalue relations") {
    Model m = make_model(2);
    BetheSystem sys(m);
    BetheSolution sol = sys.solve(frozen_n2_solutions()[1]);
    REQUIRE(sol.converged);
    Prng rng(41);
    ParamSet avoid(sol.roots);
    avoid.insert(avoid.end(), m.theta().begin(), m.theta().end());

    SUBCASE("Y times lambda2 g reproduces the eigenvalue") {
        for (int i = 0; i < 10; ++i) {
            ParamSet z = draw_separated(rng, 1, 2.0, 0.12, avoid);
            cx lhs = sys.eigenvalue(z[0], sol.roots);
            cx rhs = sys.y(z[0], sol.roots) * m.lam2(z[0]) * m.kern.g(z[0], sol.roots);
            CHECK(rel_err(lhs, rhs) < 1e-10);
        }
    }
    SUBCASE("finite limit at a root matches nearby evaluations") {
        cx probe1 = sys.eigenvalue(sol.roots[0] + 1e-6, sol.roots);
        cx probe2 = sys.eigenvalue(sol.roots[0] + 5e-7, sol.roots);
        cx limit = sys.eigenvalue_at_root(0, sol.roots);
        CHECK(rel_err(2.0 * probe2 - probe1, limit) < 1e-6);
    }
    SUBCASE("pole guard for z at a root") {
        CHECK_THROWS_AS(sys.eigenvalue(sol.roots[0], sol.roots), PoleAtCoincidence);
    }
}

TEST_CASE("all equation forms vanish simultaneously on certified roots") {
    Model m = make_model(2);
    BetheSystem sys(m);
    for (const auto& f : frozen_n2_solutions()) {
        BetheSolution sol = sys.solve(f);
        REQUIRE(sol.converged);
        double err = 0.0;
        for (auto form : {BetheForm::BE00, BetheForm::BE7, BetheForm::BEj})
            for (cx v : sys.residual(form, sol.roots)) err = std::max(err, std::abs(v));
        auto fh = sys.family_h();
        auto fg = sys.family_g();
        auto fi = sys.family_interpolating({0}, {1});
        for (const auto* fam : {&fh, &fg, &fi})
            for (cx v : sys.residual(BetheForm::BE5, sol.roots, fam))
                err = std::max(err, std::abs(v));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("polynomial families reduce exactly to the alternative forms") {
    Model m = make_model(3);
    BetheSystem sys(m);
    Prng rng(42);
    ParamSet u = draw_separated(rng, 3, 1.5, 0.15, m.params.theta);  // generic, off-shell
    auto fam_h = sys.family_h();
    auto be5h = sys.residual(BetheForm::BE5, u, &fam_h);
    auto be7 = sys.residual(BetheForm::BE7, u);
    REQUIRE(be5h.size() == be7.size());
    for (std::size_t j = 0; j < be5h.size(); ++j) CHECK(rel_err(be5h[j], be7[j]) < 1e-10);
    auto fam_g = sys.family_g();
    auto be5g = sys.residual(BetheForm::BE5, u, &fam_g);
    auto bej = sys.residual(BetheForm::BEj, u);
    for (std::size_t j = 0; j < be5g.size(); ++j) CHECK(rel_err(be5g[j], bej[j]) < 1e-10);
}

TEST_CASE("analytic Jacobian matches central differences off-shell") {
    Model m = make_model(3);
    BetheSystem sys(m);
    Prng rng(43);
    ParamSet u = draw_separated(rng, 3, 1.5, 0.2, m.params.theta);
    const double h = 1e-6;
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
            ParamSet up(u), um(u);
            up[k] += h;
            um[k] -= h;
            cx fd = (sys.y_at(j, up) - sys.y_at(j, um)) / (2.0 * h);
            CHECK(rel_err(fd, sys.dy(j, k, u)) < 1e-5);
        }
}

TEST_CASE("failure paths") {
    Model m = make_model(2);
    BetheSystem sys(m);
    SUBCASE("iteration budget exhausted reports best iterate") {
        SolveOptions opt;
        opt.max_iter = 1;
        ParamSet start = {{5.0, 5.0}, {-5.0, -5.0}};
        BetheSolution sol = sys.solve(start, opt);
        CHECK(!sol.converged);
        CHECK(sol.residual > 0.0);
    }
    SUBCASE("wrong cardinality") {
        ParamSet start = {{0.1, 0.1}};
        CHECK_THROWS_AS(sys.solve(start), InvalidParams);
    }
}

TEST_CASE("diagonal-twist factorization") {
    Model m = make_model(2);
    ParamSet zs = {{0.3, 0.4}, {-1.2, 0.1}, {0.9, -0.6}, {0.05, 1.3}, {-0.7, -0.8}};
    SUBCASE("one root among two sites") {
        auto res = diagonal_onshell_check(m.theta(), m.crossing(), m.params.kappa_tilde,
                                          m.params.kappa, 1, zs, 7);
        CHECK(res.root_residual < 1e-12);
        CHECK(res.max_identity_err < 1e-8);
        // value set {1, kappa/kappa_tilde} with multiplicities N-M and M
        int ones = 0, ratios = 0;
        for (cx d : res.d_values)
            (std::abs(d - cx(1.0)) < 1e-12 ? ones : ratios)++;
        CHECK(ones == 1);
        CHECK(ratios == 1);
    }
    SUBCASE("equal twist entries degenerate to all-ones") {
        auto res = diagonal_onshell_check(m.theta(), m.crossing(), cx{0.8, 0.3}, cx{0.8, 0.3}, 1,
                                          zs, 8);
        CHECK(res.max_identity_err < 1e-8);
        for (cx d : res.d_values) CHECK(std::abs(d - cx(1.0)) < 1e-10);
    }
}
