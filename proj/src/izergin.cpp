#include "maba/izergin.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "maba/parallel.hpp"
#include "maba/prng.hpp"
#include "maba/sampling.hpp"

namespace maba {

namespace {

cx ipow(cx base, long e) {
    if (e == 0) return 1.0;
    if (e < 0) return 1.0 / ipow(base, -e);
    cx r = 1.0;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// The determinants cancel heavily for adversarial argument draws
// (condition ~1e7 at size 6), so entries and the LU run in extended
// precision to hold the 1e-9 identity tolerances with margin.
using lcx = std::complex<long double>;
using MatL = Eigen::Matrix<lcx, Eigen::Dynamic, Eigen::Dynamic>;

lcx up(cx z) { return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())}; }
cx down(lcx z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

struct KernelL {
    lcx c;
    double guard;
    void check(lcx u, lcx v) const {
        long double sep = std::abs(u - v);
        long double scale = std::max({(long double)1.0, std::abs(u), std::abs(v)});
        if (sep < guard * scale) throw PoleAtCoincidence("kernel pole in determinant entry");
    }
    lcx f(lcx u, lcx v) const {
        check(u, v);
        return (u - v + c) / (u - v);
    }
    lcx h(lcx u, lcx v) const { return (u - v + c) / c; }
};

std::vector<lcx> up_set(std::span<const cx> s) {
    std::vector<lcx> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = up(s[i]);
    return out;
}

lcx det(MatL& m) {
    if (m.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<MatL>(m).determinant();
}

cx izergin_vform(const Rational& r, cx z, std::span<const cx> u, std::span<const cx> v) {
    const long m = static_cast<long>(v.size());
    if (m == 0) return 1.0;
    KernelL k{up(r.crossing()), r.pole_guard()};
    auto ul = up_set(u), vl = up_set(v);
    MatL mat(m, m);
    for (long j = 0; j < m; ++j) {
        lcx pref = 1.0;
        for (const lcx& x : ul) pref *= k.f(x, vl[j]);
        for (long i = 0; i < m; ++i)
            if (i != j) pref *= k.f(vl[j], vl[i]);
        for (long kk = 0; kk < m; ++kk) mat(j, kk) = pref / k.h(vl[j], vl[kk]);
        mat(j, j) -= up(z);
    }
    return down(det(mat));
}

cx izergin_uform(const Rational& r, cx z, std::span<const cx> u, std::span<const cx> v) {
    const long n = static_cast<long>(u.size());
    const long m = static_cast<long>(v.size());
    if (m != n && std::abs(1.0 - z) < 1e-13)
        throw FormUndefined("u-form of the modified Izergin determinant at z = 1 with #u != #v");
    if (n == 0) return ipow(1.0 - z, m);
    KernelL k{up(r.crossing()), r.pole_guard()};
    auto ul = up_set(u), vl = up_set(v);
    MatL mat(n, n);
    for (long j = 0; j < n; ++j) {
        lcx pref = 1.0;
        for (long i = 0; i < n; ++i)
            if (i != j) pref *= k.f(ul[j], ul[i]);
        for (long kk = 0; kk < n; ++kk) mat(j, kk) = -up(z) * pref / k.h(ul[j], ul[kk]);
        lcx fv = 1.0;
        for (const lcx& x : vl) fv *= k.f(ul[j], x);
        mat(j, j) += fv;
    }
    lcx scale = 1.0;
    lcx base = (lcx)1.0 - up(z);
    for (long e = 0; e < std::abs(m - n); ++e) scale *= base;
    lcx d = det(mat);
    return down(m >= n ? scale * d : d / scale);
}

}  // namespace

cx izergin_mod(const Rational& r, cx z, std::span<const cx> u, std::span<const cx> v,
               IzForm form) {
    switch (form) {
        case IzForm::VForm: return izergin_vform(r, z, u, v);
        case IzForm::UForm: return izergin_uform(r, z, u, v);
        case IzForm::Auto:
        default: return izergin_vform(r, z, u, v);
    }
}

cx izergin_conj(const Rational& r, cx z, std::span<const cx> u, std::span<const cx> v) {
    Rational rc = r.conjugated();
    return izergin_mod(rc, z, u, v);
}

cx izergin_ordinary(const Rational& r, std::span<const cx> u, std::span<const cx> v) {
    if (u.size() != v.size()) throw InvalidParams("ordinary Izergin determinant needs #u = #v");
    const long n = static_cast<long>(u.size());
    if (n == 0) return 1.0;
    KernelL k{up(r.crossing()), r.pole_guard()};
    auto ul = up_set(u), vl = up_set(v);
    MatL mat(n, n);
    for (long j = 0; j < n; ++j)
        for (long kk = 0; kk < n; ++kk) {
            k.check(ul[j], vl[kk]);
            mat(j, kk) = k.c / (ul[j] - vl[kk]) / k.h(ul[j], vl[kk]);
        }
    return down(up(r.h(u, v) * r.delta_prime(u) * r.delta(v)) * det(mat));
}

namespace {

constexpr double kBox = 2.5;
constexpr double kSep = 0.28;

struct DrawCtx {
    ParamSet u, v;
    cx z;
};

// u and v kept separated from each other and from the c-shifted lattice of
// both sets, so every kernel factor in every representation stays away from
// its poles.
DrawCtx draw_args(const Rational& r, Prng& rng, int n, int m, double zmin = 0.15) {
    DrawCtx d;
    cx shifts[1] = {r.crossing()};
    d.u = draw_separated(rng, n, kBox, kSep, {}, shifts);
    d.v = draw_separated(rng, m, kBox, kSep, d.u, shifts);
    d.z = rng.complex_annulus(zmin, 2.0);
    return d;
}

using CheckFn = std::function<void(const Rational&, Prng&, int, int, PropertyResult&)>;

void track(PropertyResult& res, double err) {
    res.max_rel_err = std::max(res.max_rel_err, err);
    ++res.cases;
}

}  // namespace

std::vector<PropertyResult> verify_izergin_properties(const Rational& r, std::uint64_t seed,
                                                      const IzerginSuiteOptions& opt) {
    if (opt.max_n > 8)
        throw CapExceeded("property suite capped at sets of 8 (partition expansions grow as 2^n)");
    struct Property {
        const char* name;
        double tol;
        CheckFn fn;
    };

    std::vector<Property> props;

    props.push_back({"form_agreement", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         if (std::abs(1.0 - d.z) < 0.05) d.z += 0.1;
                         track(res, rel_err(izergin_mod(rk, d.z, d.u, d.v, IzForm::VForm),
                                            izergin_mod(rk, d.z, d.u, d.v, IzForm::UForm)));
                     }});

    props.push_back({"shift_invariance", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         cx w = rng.complex_in_box(1.0);
                         ParamSet us(d.u);
                         for (auto& x : us) x -= w;
                         ParamSet vs(d.v);
                         for (auto& x : vs) x += w;
                         track(res, rel_err(izergin_mod(rk, d.z, us, d.v),
                                            izergin_mod(rk, d.z, d.u, vs)));
                     }});

    props.push_back({"initial_conditions", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         if (std::abs(1.0 - d.z) < 0.05) d.z += 0.1;
                         ParamSet none;
                         track(res, rel_err(izergin_mod(rk, d.z, d.u, none, IzForm::UForm), 1.0));
                         track(res, rel_err(izergin_mod(rk, d.z, none, d.v),
                                            ipow(1.0 - d.z, m)));
                     }});

    props.push_back(
        {"infinite_argument_limits", opt.tol_limit,
         [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
             if (n < 1 || m < 1) return;
             auto d = draw_args(rk, rng, n, m);
             double phase = rng.uniform(0.0, 6.28);
             ParamSet rest_u(d.u.begin() + 1, d.u.end());
             cx k1, k2;
             ParamSet us(d.u);
             us[0] = std::polar(1e6, phase);
             k1 = izergin_mod(rk, d.z, us, d.v);
             us[0] = std::polar(2e6, phase);
             k2 = izergin_mod(rk, d.z, us, d.v);
             track(res, rel_err(2.0 * k2 - k1, izergin_mod(rk, d.z, rest_u, d.v)));

             ParamSet rest_v(d.v.begin() + 1, d.v.end());
             ParamSet vs(d.v);
             vs[0] = std::polar(1e6, phase + 1.0);
             k1 = izergin_mod(rk, d.z, d.u, vs);
             vs[0] = std::polar(2e6, phase + 1.0);
             k2 = izergin_mod(rk, d.z, d.u, vs);
             track(res, rel_err(2.0 * k2 - k1,
                                (1.0 - d.z) * izergin_mod(rk, d.z, d.u, rest_v)));
         }});

    props.push_back({"reduction", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         ParamSet avoid(d.u);
                         avoid.insert(avoid.end(), d.v.begin(), d.v.end());
                         cx shifts[1] = {rk.crossing()};
                         cx w = draw_separated(rng, 1, kBox, kSep, avoid, shifts)[0];
                         ParamSet ue(d.u);
                         ue.push_back(w - rk.crossing());
                         ParamSet ve(d.v);
                         ve.push_back(w);
                         track(res, rel_err(izergin_mod(rk, d.z, ue, ve),
                                            -d.z * izergin_mod(rk, d.z, d.u, d.v)));
                     }});

    props.push_back({"partition_sum_v", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         cx total = 0.0;
                         PartitionEnumerator pe(m, 2);
                         PartitionSpec p;
                         while (pe.next(p)) {
                             auto [vI, vII] = split(d.v, p);
                             total += ipow(-d.z, vII.size()) * rk.f(d.u, vI) * rk.f(vI, vII);
                         }
                         track(res, rel_err(total, izergin_mod(rk, d.z, d.u, d.v)));
                     }});

    props.push_back({"partition_sum_u", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         if (std::abs(1.0 - d.z) < 0.05) d.z += 0.1;
                         cx total = 0.0;
                         PartitionEnumerator pe(n, 2);
                         PartitionSpec p;
                         while (pe.next(p)) {
                             auto [uI, uII] = split(d.u, p);
                             total += ipow(-d.z, uI.size()) * rk.f(uII, d.v) * rk.f(uI, uII);
                         }
                         total *= ipow(1.0 - d.z, m - n);
                         track(res, rel_err(total, izergin_mod(rk, d.z, d.u, d.v)));
                     }});

    props.push_back({"set_exchange", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m, 0.25);
                         if (std::abs(1.0 - d.z) < 0.05) d.z += 0.1;
                         ParamSet vc(d.v);
                         for (auto& x : vc) x += rk.crossing();
                         cx lhs = izergin_mod(rk, d.z, d.u, vc);
                         cx rhs = ipow(-d.z, n) * ipow(1.0 - d.z, m - n) / rk.f(d.v, d.u) *
                                  izergin_mod(rk, 1.0 / d.z, d.v, d.u);
                         track(res, rel_err(lhs, rhs));
                     }});

    props.push_back(
        {"residue_extraction", opt.tol_limit,
         [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
             if (n < 1 || m < 1) return;
             auto d = draw_args(rk, rng, n, m);
             ParamSet un(d.u.begin(), d.u.end() - 1);
             ParamSet vm(d.v.begin(), d.v.end() - 1);
             cx target = d.v[m - 1];
             auto probe = [&](double eps) {
                 ParamSet us(d.u);
                 us[n - 1] = target + eps;
                 return izergin_mod(rk, d.z, us, d.v) * cx(eps) / rk.crossing();
             };
             cx q1 = probe(1e-4), q2 = probe(1e-5);
             cx extrap = (1e-4 * q2 - 1e-5 * q1) / (1e-4 - 1e-5);
             cx pred = rk.f(un, target) * rk.f_excl(target, d.v, m - 1) *
                       izergin_mod(rk, d.z, un, vm);
             track(res, rel_err(extrap, pred));
         }});

    props.push_back(
        {"paired_limit", opt.tol_limit,
         [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
             auto d = draw_args(rk, rng, n, m);
             for (int l = 1; l <= 2; ++l) {
                 ParamSet avoid(d.u);
                 avoid.insert(avoid.end(), d.v.begin(), d.v.end());
                 cx shifts[1] = {rk.crossing()};
                 ParamSet w = draw_separated(rng, l, kBox, kSep, avoid, shifts);
                 auto probe = [&](double eps) {
                     ParamSet wp(w);
                     for (auto& x : wp) x += eps;
                     ParamSet ue(d.u);
                     ue.insert(ue.end(), wp.begin(), wp.end());
                     ParamSet ve(d.v);
                     ve.insert(ve.end(), w.begin(), w.end());
                     return izergin_mod(rk, d.z, ue, ve) / rk.f(wp, w);
                 };
                 cx q1 = probe(1e-4), q2 = probe(1e-5);
                 cx extrap = (1e-4 * q2 - 1e-5 * q1) / (1e-4 - 1e-5);
                 cx pred = rk.f(d.u, w) * rk.f(w, d.v) * izergin_mod(rk, d.z, d.u, d.v);
                 track(res, rel_err(extrap, pred));
             }
         }});

    props.push_back({"convolution", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         cx z1 = rng.complex_in_box(1.5);
                         cx total = 0.0;
                         PartitionEnumerator pe(m, 2);
                         PartitionSpec p;
                         while (pe.next(p)) {
                             auto [vI, vII] = split(d.v, p);
                             total += ipow(z1, vII.size()) * izergin_mod(rk, d.z, d.u, vI) *
                                      rk.f(vI, vII);
                         }
                         track(res, rel_err(total, izergin_mod(rk, d.z - z1, d.u, d.v)));
                     }});

    props.push_back({"conjugation", opt.tol_exact,
                     [](const Rational& rk, Prng& rng, int n, int m, PropertyResult& res) {
                         auto d = draw_args(rk, rng, n, m);
                         cx kb = izergin_conj(rk, d.z, d.u, d.v);
                         track(res, rel_err(kb, ipow(1.0 - d.z, m - n) *
                                                    izergin_mod(rk, d.z, d.v, d.u)));
                         ParamSet mu(d.u), mv(d.v);
                         for (auto& x : mu) x = -x;
                         for (auto& x : mv) x = -x;
                         track(res, rel_err(izergin_mod(rk, d.z, mu, mv), kb));
                     }});

    std::vector<PropertyResult> out(props.size());
    parallel_for(props.size(), opt.threads, [&](std::size_t pi) {
        const auto& prop = props[pi];
        PropertyResult res;
        res.name = prop.name;
        res.tolerance = prop.tol;
        Prng stream = Prng(seed).stream(prop.name);
        for (int n = 0; n <= opt.max_n; ++n)
            for (int m = 0; m <= opt.max_n; ++m) {
                Prng sub = stream.stream(std::to_string(n) + "," + std::to_string(m));
                for (int dJ = 0; dJ < opt.draws; ++dJ) prop.fn(r, sub, n, m, res);
            }
        out[pi] = std::move(res);
    });
    return out;
}

}  // namespace maba
