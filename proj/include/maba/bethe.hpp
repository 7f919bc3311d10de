#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "maba/chain_oracle.hpp"
#include "maba/params.hpp"

namespace maba {

// A root set of the twisted Bethe equations plus convergence and
// certification metadata.
struct BetheSolution {
    ParamSet roots;  // sorted by (re, im)
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool certified = false;
    std::vector<std::pair<cx, cx>> eigenvalue_samples;  // (z, Lambda(z|roots))
};

enum class BetheForm { BE00, BE7, BEj, BE5 };

// One degree-(N-1) monic polynomial per equation index.
using PolynomialFamily = std::vector<std::function<cx(cx)>>;

struct SolveOptions {
    double tol = 1e-12;          // residual target, scaled by max(1, |Y| scale)
    int max_iter = 200;
    double distinct_guard = 1e-6;  // min root separation and distance to theta, theta - c
    int oracle_cap = 10;           // certify via dense eigenvector test when N <= cap
    double certify_tol = 1e-8;
};

struct MultiStartOptions {
    int starts_per_state = 64;  // total starts = starts_per_state * 2^N
    std::uint64_t seed = 1;
    double dedup_tol = 1e-6;
};

class BetheSystem {
  public:
    explicit BetheSystem(const Model& model);

    const Model& model() const { return model_; }

    // Transfer matrix eigenvalue Lambda(z | u). Throws PoleAtCoincidence if
    // z collides with a root; use eigenvalue_at_root for that limit.
    cx eigenvalue(cx z, std::span<const cx> u) const;

    // Finite value of Lambda(u_j | u) when u is on-shell (the pole at
    // z = u_j cancels against the Bethe equation).
    cx eigenvalue_at_root(std::size_t j, std::span<const cx> u) const;

    // Y(z | u) = Lambda / (lambda_2(z) g(z, u)), in the explicit pole-free
    // form. On-shell root sets satisfy Y(u_j | u) = 0.
    cx y(cx z, std::span<const cx> u) const;
    cx y_at(std::size_t j, std::span<const cx> u) const;
    double y_residual(std::span<const cx> u) const;  // max_j |Y(u_j|u)|
    // Residual divided by the largest term magnitude entering Y (floored
    // at 1); this is what on-shell gates compare against.
    double y_residual_scaled(std::span<const cx> u) const;

    // Analytic partial dY(u_j | u)/du_k, including the diagonal terms from
    // the z-slot evaluated at z = u_j.
    cx dy(std::size_t j, std::size_t k, std::span<const cx> u) const;
    Eigen::MatrixXcd y_jacobian(std::span<const cx> u) const;  // (j,k) entry dy(j,k)

    // Residuals of the chosen equation form; all N vanish iff u is on-shell.
    // BE5 requires a polynomial family (one monic degree-(N-1) polynomial
    // per equation); residuals are normalized by c^(N-1).
    std::vector<cx> residual(BetheForm form, std::span<const cx> u,
                             const PolynomialFamily* family = nullptr) const;

    // Built-in BE5 families.
    PolynomialFamily family_h() const;
    PolynomialFamily family_g() const;
    // Interpolating family: one polynomial per theta_j in part B of the
    // partition (indices in b_part), with the removable factor cancelled.
    PolynomialFamily family_interpolating(const std::vector<int>& a_part,
                                          const std::vector<int>& b_part) const;

    // Newton iteration on u -> (Y(u_j|u))_j with the analytic Jacobian.
    BetheSolution solve(std::span<const cx> initial, const SolveOptions& opt = {}) const;

    // Seeded multi-start; solutions deduplicated as sets and certified via
    // the dense eigenvector test.
    std::vector<BetheSolution> find_all_solutions(const SolveOptions& opt = {},
                                                  const MultiStartOptions& ms = {}) const;

    // Certification: T(z) B(u) = Lambda(z|u) B(u) at sample points.
    bool certify(BetheSolution& sol, const ChainOracle& oracle, const SolveOptions& opt,
                 std::uint64_t seed) const;

  private:
    Model model_;
};

// Diagonal-twist chain (kappa_plus = kappa_minus = 0): solves
// kappa f(u_j, ubar_j)/lambda_1 - kappa_tilde f(ubar_j, u_j)/lambda_2 = 0
// for M <= N roots and checks K^(z)_{M,N}(u|theta) = prod_i (d_i - z)
// with d_i in {1, kappa/kappa_tilde}.
struct DiagonalCheckResult {
    ParamSet roots;
    std::vector<cx> d_values;      // detected eigenvalue list (N entries)
    double max_identity_err = 0.0; // over the sampled z
    double root_residual = 0.0;
};

DiagonalCheckResult diagonal_onshell_check(std::span<const cx> theta, cx c, cx kappa_tilde,
                                           cx kappa, int m_roots, std::span<const cx> z_samples,
                                           std::uint64_t seed);

}  // namespace maba
