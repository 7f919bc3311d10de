#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maba/rational.hpp"

namespace maba {

enum class IzForm { VForm, UForm, Auto };

// Modified Izergin determinant K^(z)_{n,m}(u|v).
//
//   v-form: det_m[ -z delta_jk + f(u,v_j) f(v_j, vbar_j) / h(v_j, v_k) ]
//   u-form: (1-z)^(m-n) det_n[ delta_jk f(u_j, v) - z f(u_j, ubar_j) / h(u_j, u_k) ]
//
// Both forms agree; the u-form is undefined at z = 1 when m != n, in which
// case Auto evaluates the v-form.
cx izergin_mod(const Rational& r, cx z, std::span<const cx> u, std::span<const cx> v,
               IzForm form = IzForm::Auto);

// The conjugated determinant: izergin_mod with c -> -c.
cx izergin_conj(const Rational& r, cx z, std::span<const cx> u, std::span<const cx> v);

// Ordinary Izergin determinant (equals the modified one at z = 1, #u = #v):
// h(u,v) Delta'(u) Delta(v) det_n[ g(u_j,v_k)/h(u_j,v_k) ].
cx izergin_ordinary(const Rational& r, std::span<const cx> u, std::span<const cx> v);

struct PropertyResult {
    std::string name;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    int cases = 0;
    bool pass() const { return max_rel_err <= tolerance; }
};

struct IzerginSuiteOptions {
    int max_n = 6;           // checks run over all 0 <= n,m <= max_n where defined
    int draws = 50;          // seeded draws per (n,m) pair
    double tol_exact = 1e-9; // identities that hold exactly
    double tol_limit = 1e-4; // epsilon-limit and infinite-argument checks
    int threads = 1;
};

// Runs the full property suite at seeded random arguments: shift, initial
// conditions, infinite-argument limits, reduction, both partition-sum
// expansions, set exchange, residue extraction, paired limit, convolution,
// and the conjugation relations. Deterministic for a fixed seed regardless
// of thread count.
std::vector<PropertyResult> verify_izergin_properties(const Rational& r, std::uint64_t seed,
                                                      const IzerginSuiteOptions& opt = {});

}  // namespace maba
