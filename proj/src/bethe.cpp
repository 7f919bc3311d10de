#include "maba/bethe.hpp"

#include <algorithm>
#include <cmath>

#include "maba/izergin.hpp"
#include "maba/parallel.hpp"
#include "maba/sampling.hpp"

namespace maba {

namespace {

bool lex_less(cx a, cx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

ParamSet sorted_roots(std::span<const cx> u) {
    ParamSet s(u.begin(), u.end());
    std::sort(s.begin(), s.end(), lex_less);
    return s;
}

// Max component distance between two root sets after lexicographic pairing.
double set_distance(const ParamSet& a, const ParamSet& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

BetheSystem::BetheSystem(const Model& model) : model_(model) {}

cx BetheSystem::eigenvalue(cx z, std::span<const cx> u) const {
    const Rational& r = model_.kern;
    return model_.kt_r1() * model_.lam1(z) * r.f(u, z) +
           model_.k_r2() * model_.lam2(z) * r.f(z, u) +
           model_.rho_sum() * model_.lam1(z) * model_.lam2(z) * r.g(z, u);
}

// Finite part of Lambda at z = u_j. Each term carries a factor with a
// simple pole at z = u_j whose residues cancel by the Bethe equation, so
// Lambda(u_j|u) = sum of [a F(u_j) + b F'(u_j)] with (a, b) the regular and
// residue parts of the singular factor.
cx BetheSystem::eigenvalue_at_root(std::size_t j, std::span<const cx> u) const {
    const Rational& r = model_.kern;
    const cx c = model_.crossing();
    const cx uj = u[j];
    const std::size_t n = u.size();

    auto theta = model_.theta();

    // F1(z) = lambda1(z) f(ubar_j, z); singular factor f(u_j, z) = 1 - c/(z-u_j)
    cx f1 = model_.lam1(uj) * r.f_excl_rev(u, j, uj);
    cx df_rev = 0.0;  // d/dz f(ubar_j, z) at z = u_j
    for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        cx term = r.g(u[i], uj) * r.g(u[i], uj) / c;
        for (std::size_t l = 0; l < n; ++l)
            if (l != j && l != i) term *= r.f(u[l], uj);
        df_rev += term;
    }
    cx f1p = lambda1_prime(theta, c, uj) * r.f_excl_rev(u, j, uj) + model_.lam1(uj) * df_rev;
    cx fin1 = f1 - c * f1p;

    // F2(z) = lambda2(z) f(z, ubar_j); singular factor f(z, u_j) = 1 + c/(z-u_j)
    cx f2 = model_.lam2(uj) * r.f_excl(uj, u, j);
    cx df_fwd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        cx term = -r.g(uj, u[i]) * r.g(uj, u[i]) / c;
        for (std::size_t l = 0; l < n; ++l)
            if (l != j && l != i) term *= r.f(uj, u[l]);
        df_fwd += term;
    }
    cx f2p = lambda2_prime(theta, c, uj) * r.f_excl(uj, u, j) + model_.lam2(uj) * df_fwd;
    cx fin2 = f2 + c * f2p;

    // F3(z) = lambda1 lambda2 g(z, ubar_j); singular factor g(z, u_j) = c/(z-u_j)
    cx gprod = r.g_excl(uj, u, j);
    cx dg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        cx term = -r.g(uj, u[i]) * r.g(uj, u[i]) / c;
        for (std::size_t l = 0; l < n; ++l)
            if (l != j && l != i) term *= r.g(uj, u[l]);
        dg += term;
    }
    cx f3p = (lambda1_prime(theta, c, uj) * model_.lam2(uj) +
              model_.lam1(uj) * lambda2_prime(theta, c, uj)) *
                 gprod +
             model_.lam1(uj) * model_.lam2(uj) * dg;
    cx fin3 = c * f3p;

    return model_.kt_r1() * fin1 + model_.k_r2() * fin2 + model_.rho_sum() * fin3;
}

cx BetheSystem::y(cx z, std::span<const cx> u) const {
    const Rational& r = model_.kern;
    double sign = (u.size() % 2 == 0) ? 1.0 : -1.0;
    return sign * model_.kt_r1() * r.f(z, model_.theta()) * r.h(u, z) +
           model_.k_r2() * r.h(z, u) + model_.rho_sum() * model_.lam1(z);
}

cx BetheSystem::y_at(std::size_t j, std::span<const cx> u) const { return y(u[j], u); }

double BetheSystem::y_residual(std::span<const cx> u) const {
    double res = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) res = std::max(res, std::abs(y_at(j, u)));
    return res;
}

namespace {
double y_term_scale(const Model& m, std::span<const cx> u) {
    const Rational& r = m.kern;
    double scale = 1.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        double t1 = std::abs(m.kt_r1() * r.f(u[j], m.theta()) * r.h(u, u[j]));
        double t2 = std::abs(m.k_r2() * r.h(u[j], u));
        double t3 = std::abs(m.rho_sum() * m.lam1(u[j]));
        scale = std::max({scale, t1, t2, t3});
    }
    return scale;
}
}  // namespace

double BetheSystem::y_residual_scaled(std::span<const cx> u) const {
    return y_residual(u) / y_term_scale(model_, u);
}

cx BetheSystem::dy(std::size_t j, std::size_t k, std::span<const cx> u) const {
    const Rational& r = model_.kern;
    const cx c = model_.crossing();
    const std::size_t n = u.size();
    const cx uj = u[j];
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    auto theta = model_.theta();

    if (j != k) {
        cx p1 = 1.0, p2 = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            p1 *= r.h(u[i], uj);
            p2 *= r.h(uj, u[i]);
        }
        return sign * model_.kt_r1() * r.f(uj, theta) * p1 / c - model_.k_r2() * p2 / c;
    }

    // Diagonal entry: the z-slot and set-slot derivatives of the i = j
    // factors cancel; what is left is the z-derivative of f(z,theta) and
    // lambda1 plus the i != j factors.
    cx fprime = 0.0;
    for (std::size_t t = 0; t < theta.size(); ++t) {
        cx term = -r.g(uj, theta[t]) * r.g(uj, theta[t]) / c;
        for (std::size_t s = 0; s < theta.size(); ++s)
            if (s != t) term *= r.f(uj, theta[s]);
        fprime += term;
    }
    cx h1 = r.h(u, uj);
    cx dh1 = 0.0, dh2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        cx p1 = 1.0, p2 = 1.0;
        for (std::size_t l = 0; l < n; ++l) {
            if (l == i) continue;
            p1 *= r.h(u[l], uj);
            p2 *= r.h(uj, u[l]);
        }
        dh1 -= p1 / c;
        dh2 += p2 / c;
    }
    return sign * model_.kt_r1() * (fprime * h1 + r.f(uj, theta) * dh1) +
           model_.k_r2() * dh2 + model_.rho_sum() * model_.lam1_prime(uj);
}

Eigen::MatrixXcd BetheSystem::y_jacobian(std::span<const cx> u) const {
    const long n = static_cast<long>(u.size());
    Eigen::MatrixXcd jac(n, n);
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k) jac(j, k) = dy(j, k, u);
    return jac;
}

std::vector<cx> BetheSystem::residual(BetheForm form, std::span<const cx> u,
                                      const PolynomialFamily* family) const {
    const Rational& r = model_.kern;
    const cx c = model_.crossing();
    const std::size_t n = u.size();
    auto theta = model_.theta();
    std::vector<cx> out;

    switch (form) {
        case BetheForm::BE00: {
            for (std::size_t j = 0; j < n; ++j) {
                cx l1 = model_.lam1(u[j]), l2 = model_.lam2(u[j]);
                out.push_back(model_.k_r2() * l2 * r.f_excl(u[j], u, j) -
                              model_.kt_r1() * l1 * r.f_excl_rev(u, j, u[j]) +
                              model_.rho_sum() * r.g_excl(u[j], u, j) * l1 * l2);
            }
            break;
        }
        case BetheForm::BE7: {
            for (std::size_t j = 0; j < theta.size(); ++j) {
                cx s = model_.k_r2() / r.f(u, theta[j]);
                for (std::size_t k = 0; k < theta.size(); ++k)
                    s += model_.kt_r1() * r.f_excl(theta[k], theta, k) /
                         r.h(theta[k], theta[j]) * r.f(u, theta[k]);
                out.push_back(s - (model_.params.kappa + model_.params.kappa_tilde));
            }
            break;
        }
        case BetheForm::BEj: {
            for (std::size_t j = 0; j < theta.size(); ++j) {
                cx s = model_.kt_r1() * r.f(u, theta[j]);
                for (std::size_t k = 0; k < theta.size(); ++k)
                    s += model_.k_r2() * r.f_excl_rev(theta, k, theta[k]) /
                         r.h(theta[j], theta[k]) / r.f(u, theta[k]);
                out.push_back(s - (model_.params.kappa + model_.params.kappa_tilde));
            }
            break;
        }
        case BetheForm::BE5: {
            if (family == nullptr) throw InvalidParams("BE5 needs a polynomial family");
            cx cpow = 1.0;
            for (std::size_t i = 1; i < theta.size(); ++i) cpow *= c;
            for (const auto& poly : *family) {
                cx s = 0.0;
                for (std::size_t k = 0; k < theta.size(); ++k) {
                    cx w = model_.k_r2() * poly(theta[k] - c) / r.f(u, theta[k]) +
                           model_.kt_r1() * r.f(u, theta[k]) * poly(theta[k]);
                    s += w * r.g_excl(theta[k], theta, k);
                }
                out.push_back(s / cpow - (model_.params.kappa + model_.params.kappa_tilde));
            }
            break;
        }
    }
    return out;
}

PolynomialFamily BetheSystem::family_h() const {
    PolynomialFamily fam;
    const cx c = model_.crossing();
    ParamSet theta(model_.theta().begin(), model_.theta().end());
    for (std::size_t j = 0; j < theta.size(); ++j)
        fam.push_back([theta, c, j](cx z) {
            cx p = 1.0;
            for (std::size_t k = 0; k < theta.size(); ++k)
                if (k != j) p *= z - theta[k] + c;
            return p;
        });
    return fam;
}

PolynomialFamily BetheSystem::family_g() const {
    PolynomialFamily fam;
    ParamSet theta(model_.theta().begin(), model_.theta().end());
    for (std::size_t j = 0; j < theta.size(); ++j)
        fam.push_back([theta, j](cx z) {
            cx p = 1.0;
            for (std::size_t k = 0; k < theta.size(); ++k)
                if (k != j) p *= z - theta[k];
            return p;
        });
    return fam;
}

// P_j(z) = prod_{t in B, t != theta_j} (z - t) * prod_{t in A} (z - t + c):
// the g(z,theta_j)/g(z,theta_B) prefactor written with its removable
// factor cancelled, monic of degree N-1.
PolynomialFamily BetheSystem::family_interpolating(const std::vector<int>& a_part,
                                                   const std::vector<int>& b_part) const {
    if (b_part.empty()) throw InvalidParams("interpolating family needs a nonempty B part");
    PolynomialFamily fam;
    const cx c = model_.crossing();
    ParamSet ta, tb;
    for (int i : a_part) ta.push_back(model_.theta()[i]);
    for (int i : b_part) tb.push_back(model_.theta()[i]);
    for (std::size_t j = 0; j < tb.size(); ++j)
        fam.push_back([ta, tb, c, j](cx z) {
            cx p = 1.0;
            for (std::size_t k = 0; k < tb.size(); ++k)
                if (k != j) p *= z - tb[k];
            for (cx t : ta) p *= z - t + c;
            return p;
        });
    return fam;
}

namespace {

bool roots_distinct(const Model& m, std::span<const cx> u, double guard) {
    for (std::size_t j = 0; j < u.size(); ++j) {
        for (std::size_t k = j + 1; k < u.size(); ++k)
            if (std::abs(u[j] - u[k]) < guard) return false;
        for (cx t : m.theta())
            if (std::abs(u[j] - t) < guard || std::abs(u[j] - (t - m.crossing())) < guard)
                return false;
    }
    return true;
}

}  // namespace

BetheSolution BetheSystem::solve(std::span<const cx> initial, const SolveOptions& opt) const {
    if (initial.size() != static_cast<std::size_t>(model_.sites()))
        throw InvalidParams("initial guess must have N entries");

    ParamSet u(initial.begin(), initial.end());
    BetheSolution sol;
    Eigen::VectorXcd f(model_.sites());

    for (int it = 0; it <= opt.max_iter; ++it) {
        double res = 0.0;
        bool pole = false;
        try {
            for (int j = 0; j < model_.sites(); ++j) {
                f(j) = y_at(j, u);
                res = std::max(res, std::abs(f(j)));
            }
        } catch (const PoleAtCoincidence&) {
            pole = true;
        }
        if (!pole && res <= opt.tol * y_term_scale(model_, u)) {
            sol.iterations = it;
            sol.converged = true;
            // Polish to stationarity: degenerate eigenvalue checks downstream
            // see root errors amplified as sqrt(residual), so a residual at
            // the tolerance is not necessarily good enough.
            for (int extra = 0; extra < 3; ++extra) {
                Eigen::MatrixXcd jac;
                try {
                    jac = y_jacobian(u);
                } catch (const PoleAtCoincidence&) {
                    break;
                }
                Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
                if (!lu.isInvertible()) break;
                Eigen::VectorXcd step = lu.solve(f);
                ParamSet cand(u);
                for (int j = 0; j < model_.sites(); ++j) cand[j] -= step(j);
                double cres;
                try {
                    cres = y_residual(cand);
                } catch (const PoleAtCoincidence&) {
                    break;
                }
                if (!(cres < res)) break;
                u = cand;
                res = cres;
                for (int j = 0; j < model_.sites(); ++j) f(j) = y_at(j, u);
            }
            sol.roots = sorted_roots(u);
            sol.residual = res;
            return sol;
        }
        if (pole || it == opt.max_iter) break;

        Eigen::MatrixXcd jac;
        try {
            jac = y_jacobian(u);
        } catch (const PoleAtCoincidence&) {
            break;
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
        if (!lu.isInvertible()) throw SingularJacobian("Bethe Newton: singular Jacobian");
        Eigen::VectorXcd step = lu.solve(f);
        for (int j = 0; j < model_.sites(); ++j) u[j] -= step(j);
        sol.iterations = it + 1;
    }

    sol.roots = sorted_roots(u);
    sol.residual = y_residual(sol.roots);
    sol.converged = false;
    return sol;
}

bool BetheSystem::certify(BetheSolution& sol, const ChainOracle& oracle, const SolveOptions& opt,
                          std::uint64_t seed) const {
    Prng rng = Prng(seed).stream("certify");
    ParamSet avoid(sol.roots);
    avoid.insert(avoid.end(), model_.theta().begin(), model_.theta().end());
    ParamSet zs = draw_separated(rng, 3, 2.0, 0.15, avoid);
    Eigen::VectorXcd ket = oracle.bethe_ket(sol.roots);
    double knorm = ket.norm();
    sol.eigenvalue_samples.clear();
    bool ok = knorm > 0.0;
    for (cx z : zs) {
        cx lam = eigenvalue(z, sol.roots);
        sol.eigenvalue_samples.emplace_back(z, lam);
        double err = (oracle.transfer_matrix(z) * ket - lam * ket).norm();
        if (!(err <= opt.certify_tol * knorm)) ok = false;
    }
    sol.certified = ok;
    return ok;
}

std::vector<BetheSolution> BetheSystem::find_all_solutions(const SolveOptions& opt,
                                                           const MultiStartOptions& ms) const {
    const int n = model_.sites();
    const int total = ms.starts_per_state * (1 << n);
    Prng base(ms.seed);

    double min_sep = 1e300;
    double box = 1.5;
    for (cx t : model_.theta()) box = std::max(box, std::abs(t) + 1.5);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            min_sep = std::min(min_sep, std::abs(model_.theta()[j] - model_.theta()[k]));
    if (n == 1) min_sep = 1.0;

    std::optional<ChainOracle> oracle;
    if (n <= opt.oracle_cap) oracle.emplace(model_, opt.oracle_cap);

    std::vector<BetheSolution> found;
    for (int s = 0; s < total; ++s) {
        Prng rng = base.stream("start" + std::to_string(s));
        ParamSet init(n);
        if (s % 2 == 0) {
            for (int j = 0; j < n; ++j)
                init[j] = model_.theta()[j] + 0.5 * min_sep * rng.complex_in_box(1.0);
        } else {
            for (int j = 0; j < n; ++j) init[j] = rng.complex_in_box(box);
        }

        BetheSolution sol;
        try {
            sol = solve(init, opt);
        } catch (const SingularJacobian&) {
            continue;
        }
        if (!sol.converged) continue;
        if (!roots_distinct(model_, sol.roots, opt.distinct_guard)) continue;

        bool duplicate = false;
        for (const auto& prev : found)
            if (set_distance(prev.roots, sol.roots) < ms.dedup_tol) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;

        if (oracle) {
            if (!certify(sol, *oracle, opt, ms.seed)) continue;
        }
        found.push_back(std::move(sol));
    }

    std::sort(found.begin(), found.end(), [](const BetheSolution& a, const BetheSolution& b) {
        return lex_less(a.roots[0], b.roots[0]);
    });
    return found;
}

DiagonalCheckResult diagonal_onshell_check(std::span<const cx> theta, cx c, cx kappa_tilde,
                                           cx kappa, int m_roots, std::span<const cx> z_samples,
                                           std::uint64_t seed) {
    const int big_n = static_cast<int>(theta.size());
    if (m_roots < 1 || m_roots > big_n)
        throw InvalidParams("diagonal check needs 1 <= M <= N roots");
    Rational r(c);

    // kappa f(u_j, ubar_j) lambda_2(u_j) - kappa_tilde f(ubar_j, u_j) lambda_1(u_j) = 0
    auto resid = [&](const ParamSet& u) {
        Eigen::VectorXcd out(m_roots);
        for (int j = 0; j < m_roots; ++j)
            out(j) = kappa * lambda2(theta, c, u[j]) * r.f_excl(u[j], u, j) -
                     kappa_tilde * lambda1(theta, c, u[j]) * r.f_excl_rev(u, j, u[j]);
        return out;
    };

    Prng rng(seed);
    DiagonalCheckResult best;
    best.root_residual = 1e300;
    for (int attempt = 0; attempt < 200 && best.root_residual > 1e-12; ++attempt) {
        ParamSet u(m_roots);
        for (int j = 0; j < m_roots; ++j)
            u[j] = theta[j % big_n] + 0.35 * rng.complex_in_box(1.0);
        bool bad = false;
        for (int it = 0; it < 120; ++it) {
            Eigen::VectorXcd f;
            try {
                f = resid(u);
            } catch (const PoleAtCoincidence&) {
                bad = true;
                break;
            }
            if (f.lpNorm<Eigen::Infinity>() < 1e-13) break;
            Eigen::MatrixXcd jac(m_roots, m_roots);
            const double h = 1e-7;
            try {
                for (int k = 0; k < m_roots; ++k) {
                    ParamSet up(u), um(u);
                    up[k] += h;
                    um[k] -= h;
                    jac.col(k) = (resid(up) - resid(um)) / (2.0 * h);
                }
            } catch (const PoleAtCoincidence&) {
                bad = true;
                break;
            }
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
            if (!lu.isInvertible()) {
                bad = true;
                break;
            }
            Eigen::VectorXcd step = lu.solve(f);
            for (int j = 0; j < m_roots; ++j) u[j] -= step(j);
        }
        if (bad) continue;
        bool distinct = true;
        for (int j = 0; j < m_roots && distinct; ++j) {
            for (int k = j + 1; k < m_roots; ++k)
                if (std::abs(u[j] - u[k]) < 1e-6) distinct = false;
            for (cx t : theta)
                if (std::abs(u[j] - t) < 1e-7 || std::abs(u[j] - (t - c)) < 1e-7)
                    distinct = false;
        }
        if (!distinct) continue;
        double res = resid(u).lpNorm<Eigen::Infinity>();
        if (res < best.root_residual) {
            best.root_residual = res;
            best.roots = u;
        }
    }
    if (best.roots.empty()) throw NoConvergence("diagonal Bethe equations: no root set found");

    // Z_jk = f(theta_k, thetabar_k)/h(theta_k, theta_j) * f(u, theta_k);
    // its eigenvalues realize the allowed values {1, kappa/kappa_tilde}.
    Eigen::MatrixXcd zmat(big_n, big_n);
    for (int j = 0; j < big_n; ++j)
        for (int k = 0; k < big_n; ++k)
            zmat(j, k) = r.f_excl(theta[k], theta, k) / r.h(theta[k], theta[j]) *
                         r.f(best.roots, theta[k]);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(zmat);
    cx ratio = kappa / kappa_tilde;
    for (int i = 0; i < big_n; ++i) {
        cx e = es.eigenvalues()(i);
        best.d_values.push_back(std::abs(e - 1.0) < std::abs(e - ratio) ? cx(1.0) : ratio);
    }

    for (cx z : z_samples) {
        cx lhs = izergin_mod(r, z, best.roots, theta);
        cx rhs = 1.0;
        for (cx d : best.d_values) rhs *= d - z;
        best.max_identity_err = std::max(best.max_identity_err, rel_err(lhs, rhs));
    }
    return best;
}

}  // namespace maba
