#pragma once

#include "nodalkit/errors.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace nodalkit {

struct ProfileConstants {
    double p = 5.0;
    int N = 3;
    double gamma0 = 0.25;
    double amplitude_A = 0.0;
    double lambda_N = 0.0; // (N-2)^-(N-2) for N <= 6, zero above
};

double amplitude_A(double p, int N);
ProfileConstants profile_constants(double p, int N);

namespace detail {

template <typename Scalar>
constexpr Scalar euler_gamma() { return Scalar(0.577215664901532860606512090082402431L); }

template <typename Scalar>
constexpr Scalar pi() { return Scalar(3.14159265358979323846264338327950288L); }

template <typename Scalar>
bool converged(Scalar term, Scalar sum)
{
    return std::abs(term) <= std::numeric_limits<Scalar>::epsilon() * std::abs(sum);
}

// Power-series pieces for z < 2, q = z^2/4:
//   i_n  = sum q^k / (k! (k+n)!)
//   s_n  = sum [psi(k+1) + psi(k+n+1)] q^k / (k! (k+n)!)
//   h0   = sum_{k>=1} H_k q^k / (k!)^2
template <typename Scalar>
struct BesselSeries {
    Scalar i0 = 0, i1 = 0, i2 = 0, s1 = 0, s2 = 0, h0 = 0;
};

template <typename Scalar>
BesselSeries<Scalar> bessel_series(Scalar z)
{
    const Scalar q = z * z / Scalar(4);
    const Scalar g = euler_gamma<Scalar>();
    BesselSeries<Scalar> b;
    Scalar t0 = 1, t1 = 1, t2 = Scalar(1) / Scalar(2); // q^k/(k!k!), q^k/(k!(k+1)!), q^k/(k!(k+2)!)
    Scalar harmonic = 0;                               // H_k
    for (int k = 0; k < 200; ++k) {
        const Scalar psi_k1 = -g + harmonic;
        const Scalar psi_k2 = psi_k1 + Scalar(1) / Scalar(k + 1);
        const Scalar psi_k3 = psi_k2 + Scalar(1) / Scalar(k + 2);
        b.i0 += t0;
        b.i1 += t1;
        b.i2 += t2;
        b.h0 += harmonic * t0;
        b.s1 += (psi_k1 + psi_k2) * t1;
        b.s2 += (psi_k1 + psi_k3) * t2;
        if (k > 2 && converged(t0, b.i0) && converged(harmonic * t0, b.h0 + b.i0))
            break;
        harmonic += Scalar(1) / Scalar(k + 1);
        t0 *= q / Scalar((k + 1) * (k + 1));
        t1 *= q / Scalar((k + 1) * (k + 2));
        t2 *= q / Scalar((k + 1) * (k + 3));
    }
    return b;
}

// K0 and K1 for z >= 2 by Steed's continued fraction (Temme's CF2 at order 0).
template <typename Scalar>
std::pair<Scalar, Scalar> bessel_k01_cf(Scalar z)
{
    Scalar b = Scalar(2) * (Scalar(1) + z);
    Scalar d = Scalar(1) / b;
    Scalar h = d, delh = d;
    Scalar q1 = 0, q2 = 1;
    const Scalar a1 = Scalar(1) / Scalar(4);
    Scalar q = a1, c = a1, a = -a1;
    Scalar s = Scalar(1) + q * delh;
    for (int i = 1; i < 10000; ++i) {
        a -= Scalar(2 * i);
        c = -a * c / Scalar(i + 1);
        const Scalar qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += Scalar(2);
        d = Scalar(1) / (b + a * d);
        delh = (b * d - Scalar(1)) * delh;
        h += delh;
        const Scalar dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < std::numeric_limits<Scalar>::epsilon())
            break;
    }
    h *= a1;
    const Scalar k0 = std::sqrt(pi<Scalar>() / (Scalar(2) * z)) * std::exp(-z) / s;
    const Scalar k1 = k0 * (z + Scalar(1) / Scalar(2) - h) / z;
    return {k0, k1};
}

// (1 - z K1(z)) / z^2 and (1 - z^2 K2(z)/2) / z^2 for z < 2, free of cancellation.
template <typename Scalar>
Scalar one_minus_zk1_over_z2(Scalar z, const BesselSeries<Scalar>& b)
{
    return -std::log(z / Scalar(2)) * b.i1 / Scalar(2) + b.s1 / Scalar(4);
}

template <typename Scalar>
Scalar one_minus_z2k2_over_z2(Scalar z, const BesselSeries<Scalar>& b)
{
    const Scalar q = z * z / Scalar(4);
    return Scalar(1) / Scalar(4) + std::log(z / Scalar(2)) * q * b.i2 / Scalar(2) - q * b.s2 / Scalar(4);
}

// (1 - (1+z)e^{-z}) / z^2.
template <typename Scalar>
Scalar fifth_bracket_over_z2(Scalar z)
{
    if (z >= Scalar(1) / Scalar(2))
        return (-std::expm1(-z) - z * std::exp(-z)) / (z * z);
    // sum_{k>=2} (-1)^k (k-1) z^{k-2} / k!
    Scalar sum = 0, power = 1, fact = 2;
    for (int k = 2; k < 60; ++k) {
        const Scalar term = ((k % 2 == 0) ? Scalar(1) : Scalar(-1)) * Scalar(k - 1) * power / fact;
        sum += term;
        if (k > 3 && converged(term, sum))
            break;
        power *= z;
        fact *= Scalar(k + 1);
    }
    return sum;
}

} // namespace detail

// Modified Bessel function of the second kind, orders 0, 1, 2.
template <typename Scalar>
Scalar bessel_k(int order, Scalar z)
{
    if (!(z > Scalar(0)) || !std::isfinite(static_cast<double>(z)))
        throw DomainError("bessel_k: argument must be positive and finite");
    if (order < 0 || order > 2)
        throw DomainError("bessel_k: order must be 0, 1 or 2");
    if (z < Scalar(2)) {
        const auto b = detail::bessel_series(z);
        const Scalar q = z * z / Scalar(4);
        const Scalar lz = std::log(z / Scalar(2));
        if (order == 0)
            return -(lz + detail::euler_gamma<Scalar>()) * b.i0 + b.h0;
        if (order == 1)
            return Scalar(1) / z + lz * (z / Scalar(2)) * b.i1 - (z / Scalar(4)) * b.s1;
        return Scalar(2) / (z * z) - Scalar(1) / Scalar(2) - lz * q * b.i2 + q * b.s2 / Scalar(2);
    }
    const auto [k0, k1] = detail::bessel_k01_cf(z);
    if (order == 0)
        return k0;
    if (order == 1)
        return k1;
    return k0 + Scalar(2) * k1 / z;
}

// Closed-form profile w solving w'' - gamma0 w + w^p = 0, written in a form that
// cannot overflow for large |t|.
template <typename Scalar>
Scalar eval_w(Scalar t, const ProfileConstants& c)
{
    if (!std::isfinite(static_cast<double>(t)))
        throw DomainError("eval_w: non-finite argument");
    const Scalar sg = std::sqrt(Scalar(c.gamma0));
    const Scalar k = Scalar(c.p - 1.0) * sg / Scalar(2);
    const Scalar e = Scalar(2) / Scalar(c.p - 1.0);
    const Scalar at = std::abs(t);
    return Scalar(c.amplitude_A) * std::exp(-sg * at) * std::pow(Scalar(1) + std::exp(-Scalar(2) * k * at), -e);
}

template <typename Scalar>
Scalar eval_w_prime(Scalar t, const ProfileConstants& c)
{
    const Scalar k = Scalar(c.p - 1.0) * std::sqrt(Scalar(c.gamma0)) / Scalar(2);
    const Scalar e = Scalar(2) / Scalar(c.p - 1.0);
    return -e * k * std::tanh(k * t) * eval_w(t, c);
}

template <typename Scalar>
Scalar eval_w_second(Scalar t, const ProfileConstants& c)
{
    const Scalar w = eval_w(t, c);
    return Scalar(c.gamma0) * w - std::pow(w, Scalar(c.p));
}

// Normalized correction profile phi_N(s), solving
// phi'' - (gamma0 + e^{2s}) phi = e^{-(N-6)s/2}.
template <typename Scalar>
Scalar correction_profile(Scalar s, int N)
{
    if (N < 3)
        throw DomainError("correction_profile: N must be at least 3");
    if (N > 6)
        return Scalar(0);
    const Scalar z = std::exp(s);
    if (z == Scalar(0))
        return N == 6 ? Scalar(-1) / Scalar(4) : Scalar(0);
    switch (N) {
    case 3:
        if (z < Scalar(1))
            return -std::sqrt(z) * (-std::expm1(-z) / z);
        return std::expm1(-z) / std::sqrt(z);
    case 4:
        if (z < Scalar(2))
            return -z * detail::one_minus_zk1_over_z2(z, detail::bessel_series(z));
        return -(Scalar(1) - z * bessel_k(1, z)) / z;
    case 5:
        return -std::sqrt(z) * detail::fifth_bracket_over_z2(z);
    default:
        if (z < Scalar(2))
            return -detail::one_minus_z2k2_over_z2(z, detail::bessel_series(z));
        return -(Scalar(1) - z * z * bessel_k(2, z) / Scalar(2)) / (z * z);
    }
}

template <typename Scalar>
Scalar correction_profile_prime(Scalar s, int N)
{
    if (N < 3)
        throw DomainError("correction_profile_prime: N must be at least 3");
    if (N > 6)
        return Scalar(0);
    const Scalar z = std::exp(s);
    if (z == Scalar(0))
        return Scalar(0);
    const Scalar half = Scalar(1) / Scalar(2);
    switch (N) {
    case 3:
        if (z < Scalar(1))
            return std::sqrt(z) * (half * (-std::expm1(-z) / z) - std::exp(-z));
        return (-half * std::expm1(-z) - z * std::exp(-z)) / std::sqrt(z);
    case 4:
        if (z < Scalar(2)) {
            const auto b = detail::bessel_series(z);
            return z * detail::one_minus_zk1_over_z2(z, b) - z * bessel_k(0, z);
        }
        return (Scalar(1) - z * bessel_k(1, z)) / z - z * bessel_k(0, z);
    case 5:
        return std::sqrt(z) * (Scalar(3) * half * detail::fifth_bracket_over_z2(z) - std::exp(-z));
    default:
        if (z < Scalar(2)) {
            const auto b = detail::bessel_series(z);
            return Scalar(2) * detail::one_minus_z2k2_over_z2(z, b) - half * z * bessel_k(1, z);
        }
        return Scalar(2) * (Scalar(1) - z * z * bessel_k(2, z) / Scalar(2)) / (z * z) - half * z * bessel_k(1, z);
    }
}

struct QuadratureSpec {
    double half_width = 40.0;
    double h = 1e-3;
    double tol = 1e-10; // relative change allowed when the step is doubled
};

// Relative defects of the two integral identities satisfied by w.
std::pair<double, double> pohozaev_check(const ProfileConstants& c, const QuadratureSpec& q = {});

// Trapezoid integral of f over [-half_width, half_width]; throws ConvergenceError
// when doubling the step moves the value by more than q.tol relative.
template <typename F>
double integrate_line(F&& f, const QuadratureSpec& q, double shift = 0.0)
{
    const long n = 2 * static_cast<long>(std::ceil(q.half_width / q.h));
    const double h = 2.0 * q.half_width / static_cast<double>(n);
    double fine = 0.0, coarse = 0.0;
    for (long i = 0; i <= n; ++i) {
        const double t = shift - q.half_width + h * static_cast<double>(i);
        const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
        const double v = f(t);
        fine += wt * v;
        if (i % 2 == 0)
            coarse += ((i == 0 || i == n) ? 0.5 : 1.0) * v;
    }
    fine *= h;
    coarse *= 2.0 * h;
    if (std::abs(fine - coarse) > q.tol * std::abs(fine) && std::abs(fine - coarse) > 1e-300)
        throw ConvergenceError("integrate_line: achieved relative change " +
                               std::to_string(std::abs(fine - coarse) / std::abs(fine)));
    return fine;
}

} // namespace nodalkit
