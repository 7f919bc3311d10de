#include "maba/rational.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maba {

Rational::Rational(cx c, double pole_guard_rel) : c_(c), guard_(pole_guard_rel) {
    if (c_ == cx(0.0, 0.0)) throw InvalidParams("crossing constant c must be nonzero");
}

void Rational::guard_check(cx u, cx v) const {
    double sep = std::abs(u - v);
    double scale = std::max({1.0, std::abs(u), std::abs(v)});
    if (sep < guard_ * scale) {
        std::ostringstream os;
        os << "kernel pole: |u-v| = " << sep << " below guard at u = (" << u.real() << ","
           << u.imag() << ")";
        throw PoleAtCoincidence(os.str());
    }
}

cx Rational::g(cx u, cx v) const {
    guard_check(u, v);
    return c_ / (u - v);
}

cx Rational::f(cx u, cx v) const {
    guard_check(u, v);
    return (u - v + c_) / (u - v);
}

cx Rational::g(cx u, std::span<const cx> v) const {
    cx r = 1.0;
    for (cx x : v) r *= g(u, x);
    return r;
}
cx Rational::g(std::span<const cx> u, cx v) const {
    cx r = 1.0;
    for (cx x : u) r *= g(x, v);
    return r;
}
cx Rational::g(std::span<const cx> u, std::span<const cx> v) const {
    cx r = 1.0;
    for (cx x : u) r *= g(x, v);
    return r;
}
cx Rational::f(cx u, std::span<const cx> v) const {
    cx r = 1.0;
    for (cx x : v) r *= f(u, x);
    return r;
}
cx Rational::f(std::span<const cx> u, cx v) const {
    cx r = 1.0;
    for (cx x : u) r *= f(x, v);
    return r;
}
cx Rational::f(std::span<const cx> u, std::span<const cx> v) const {
    cx r = 1.0;
    for (cx x : u) r *= f(x, v);
    return r;
}
cx Rational::h(cx u, std::span<const cx> v) const {
    cx r = 1.0;
    for (cx x : v) r *= h(u, x);
    return r;
}
cx Rational::h(std::span<const cx> u, cx v) const {
    cx r = 1.0;
    for (cx x : u) r *= h(x, v);
    return r;
}
cx Rational::h(std::span<const cx> u, std::span<const cx> v) const {
    cx r = 1.0;
    for (cx x : u) r *= h(x, v);
    return r;
}

cx Rational::g_excl(cx u, std::span<const cx> set, std::size_t skip) const {
    cx r = 1.0;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (i != skip) r *= g(u, set[i]);
    return r;
}
cx Rational::f_excl(cx u, std::span<const cx> set, std::size_t skip) const {
    cx r = 1.0;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (i != skip) r *= f(u, set[i]);
    return r;
}
cx Rational::f_excl_rev(std::span<const cx> set, std::size_t skip, cx u) const {
    cx r = 1.0;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (i != skip) r *= f(set[i], u);
    return r;
}
cx Rational::h_excl(cx u, std::span<const cx> set, std::size_t skip) const {
    cx r = 1.0;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (i != skip) r *= h(u, set[i]);
    return r;
}
cx Rational::h_excl_rev(std::span<const cx> set, std::size_t skip, cx u) const {
    cx r = 1.0;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (i != skip) r *= h(set[i], u);
    return r;
}

cx Rational::delta(std::span<const cx> v) const {
    cx r = 1.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t k = j + 1; k < v.size(); ++k) r *= g(v[k], v[j]);
    return r;
}
cx Rational::delta_prime(std::span<const cx> u) const {
    cx r = 1.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t k = j + 1; k < u.size(); ++k) r *= g(u[j], u[k]);
    return r;
}

cx lambda1(std::span<const cx> theta, cx c, cx u) {
    cx r = 1.0;
    for (cx t : theta) r *= (u - t + c) / c;
    return r;
}
cx lambda2(std::span<const cx> theta, cx c, cx u) {
    cx r = 1.0;
    for (cx t : theta) r *= (u - t) / c;
    return r;
}
cx lambda1_prime(std::span<const cx> theta, cx c, cx u) {
    cx sum = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        cx p = 1.0;
        for (std::size_t s = 0; s < theta.size(); ++s)
            if (s != k) p *= (u - theta[s] + c) / c;
        sum += p / c;
    }
    return sum;
}
cx lambda2_prime(std::span<const cx> theta, cx c, cx u) {
    cx sum = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        cx p = 1.0;
        for (std::size_t s = 0; s < theta.size(); ++s)
            if (s != k) p *= (u - theta[s]) / c;
        sum += p / c;
    }
    return sum;
}

namespace {
int default_cap(int parts) {
    if (parts <= 2) return 14;
    if (parts <= 4) return 10;
    return 8;
}
}  // namespace

PartitionEnumerator::PartitionEnumerator(int n_elements, int n_parts, int cap,
                                         CardinalityBounds bounds)
    : n_(n_elements), parts_(n_parts), bounds_(std::move(bounds)) {
    if (n_parts < 1) throw InvalidParams("partition enumeration needs at least one part");
    int limit = cap > 0 ? cap : default_cap(n_parts);
    if (n_elements > limit)
        throw CapExceeded("partition enumeration over " + std::to_string(n_elements) +
                          " elements exceeds cap " + std::to_string(limit));
    total_ = 1;
    for (int i = 0; i < n_; ++i) total_ *= static_cast<std::uint64_t>(parts_);
}

bool PartitionEnumerator::admitted(const PartitionSpec& p) const {
    for (std::size_t i = 0; i < bounds_.size() && i < p.parts.size(); ++i) {
        auto [lo, hi] = bounds_[i];
        int size = static_cast<int>(p.parts[i].size());
        if (lo >= 0 && size < lo) return false;
        if (hi >= 0 && size > hi) return false;
    }
    return true;
}

bool PartitionEnumerator::next(PartitionSpec& out) {
    while (code_ < total_) {
        out.code = code_;
        out.parts.assign(parts_, {});
        std::uint64_t c = code_;
        for (int i = 0; i < n_; ++i) {
            out.parts[c % parts_].push_back(i);
            c /= parts_;
        }
        ++code_;
        if (admitted(out)) return true;
    }
    return false;
}

std::pair<ParamSet, ParamSet> split(std::span<const cx> set, const PartitionSpec& p) {
    ParamSet a, b;
    for (int i : p.parts[0]) a.push_back(set[i]);
    for (int i : p.parts[1]) b.push_back(set[i]);
    return {std::move(a), std::move(b)};
}

std::vector<cx> omega_matrix(const Rational& r, std::span<const cx> x) {
    std::size_t n = x.size();
    std::vector<cx> m(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            m[j * n + k] = r.f_excl_rev(x, k, x[k]) / r.h(x[j], x[k]);
    return m;
}

IdentityReport omega_inverse_check(const Rational& r, std::span<const cx> x) {
    std::size_t n = x.size();
    auto a = omega_matrix(r, x);
    auto b = omega_matrix(r.conjugated(), x);
    IdentityReport rep;
    double prod_err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cx s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a[i * n + k] * b[k * n + j];
            prod_err = std::max(prod_err, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    rep.errors["omega_inverse"] = prod_err;
    double row_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a[i * n + j];
        row_err = std::max(row_err, std::abs(s - 1.0));
    }
    rep.errors["omega_row_sum"] = row_err;
    rep.max_error = std::max(prod_err, row_err);
    return rep;
}

IdentityReport verify_sum_identities(const Rational& r, std::span<const cx> u,
                                     std::span<const cx> v, std::span<const cx> theta) {
    if (u.size() != v.size()) throw InvalidParams("sum identities need #u = #v");
    std::size_t n = u.size();
    std::vector<cx> gamma(n);
    for (std::size_t j = 0; j < n; ++j) gamma[j] = r.g_excl(u[j], u, j) / r.g(u[j], v);

    IdentityReport rep;
    auto track = [&](const std::string& name, double err) {
        auto it = rep.errors.find(name);
        if (it == rep.errors.end() || it->second < err) rep.errors[name] = err;
        rep.max_error = std::max(rep.max_error, err);
    };

    for (std::size_t k = 0; k < n; ++k) {
        cx s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s1 += r.g(u[j], v[k]) / r.h(u[j], v[k]) * gamma[j];
            s2 += r.g(v[k], u[j]) / r.h(v[k], u[j]) * gamma[j];
            s3 += r.g(v[k], u[j]) * gamma[j];
        }
        cx r1 = r.h(v, v[k]) / r.h(u, v[k]);
        cx r2 = -r.h(v[k], v) / r.h(v[k], u);
        double sc1 = std::max(1.0, std::abs(r1)), sc2 = std::max(1.0, std::abs(r2));
        track("sum_g_over_h_uv", std::abs(s1 - r1) / sc1);
        track("sum_g_over_h_vu", std::abs(s2 - r2) / sc2);
        track("sum_g_vu", std::abs(s3 + 1.0));
    }

    if (!theta.empty()) {
        auto om = omega_inverse_check(r, theta);
        track("omega_row_sum", om.errors["omega_row_sum"]);
    }
    return rep;
}

cx lagrange_extrapolate(std::span<const cx> xs, std::span<const cx> ys, cx x) {
    std::size_t n = xs.size();
    cx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cx w = ys[i];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
        acc += w;
    }
    return acc;
}

}  // namespace maba
