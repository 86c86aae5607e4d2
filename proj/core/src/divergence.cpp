#include "drokit/divergence.hpp"

#include <cmath>
#include <limits>

#include "drokit/errors.hpp"
#include "drokit/summation.hpp"

namespace drokit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(DivergenceKind kind) {
    switch (kind) {
        case DivergenceKind::Chi2: return "chi2";
        case DivergenceKind::KL: return "kl";
        case DivergenceKind::Burg: return "burg";
    }
    return "unknown";
}

double phi(DivergenceKind kind, double t) {
    if (!(t >= 0.0)) throw ParameterError("phi: t must be >= 0");
    switch (kind) {
        case DivergenceKind::Chi2:
            return 0.5 * (t - 1.0) * (t - 1.0);
        case DivergenceKind::KL:
            if (t == 0.0) return 1.0;
            return t * std::log(t) - t + 1.0;
        case DivergenceKind::Burg:
            if (t == 0.0) return kInf;
            return -std::log(t) + t - 1.0;
    }
    return 0.0;
}

double phi_conjugate(DivergenceKind kind, double s) {
    switch (kind) {
        case DivergenceKind::Chi2:
            if (s < -1.0) return -0.5;
            return 0.5 * s * s + s;
        case DivergenceKind::KL:
            // expm1 keeps the small-s regime exact; large s saturates to +inf.
            return s > 709.0 ? kInf : std::expm1(s);
        case DivergenceKind::Burg:
            if (s >= 1.0) return kInf;
            return -std::log1p(-s);
    }
    return 0.0;
}

double phi_conjugate_derivative(DivergenceKind kind, double s) {
    switch (kind) {
        case DivergenceKind::Chi2:
            return s <= -1.0 ? 0.0 : s + 1.0;
        case DivergenceKind::KL:
            return s > 709.0 ? kInf : std::exp(s);
        case DivergenceKind::Burg:
            if (s >= 1.0) return kInf;
            return 1.0 / (1.0 - s);
    }
    return 0.0;
}

namespace {

void check_simplex_pair(std::span<const double> q, std::span<const double> p) {
    if (q.size() != p.size() || q.empty()) {
        throw ContractError("divergence: q and p must be nonempty vectors of equal length");
    }
    CompensatedSum sq, sp;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(p[i] > 0.0)) throw ContractError("divergence: nominal p must have full support");
        if (q[i] < -1e-12) throw ContractError("divergence: q_i must be >= 0");
        sq.add(q[i]);
        sp.add(p[i]);
    }
    if (std::abs(sq.value() - 1.0) > 1e-10 || std::abs(sp.value() - 1.0) > 1e-10) {
        throw ContractError("divergence: inputs must lie on the probability simplex");
    }
}

} // namespace

double divergence(DivergenceKind kind, std::span<const double> q, std::span<const double> p) {
    check_simplex_pair(q, p);
    CompensatedSum acc;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double t = q[i] <= 0.0 ? 0.0 : q[i] / p[i];
        const double contrib = phi(kind, t);
        if (std::isinf(contrib)) return kInf;
        acc.add(p[i] * contrib);
    }
    const double d = acc.value();
    return d < 0.0 ? 0.0 : d;
}

bool in_ball(DivergenceKind kind, std::span<const double> q, std::span<const double> p,
             double rho) {
    if (!(rho >= 0.0)) throw ParameterError("in_ball: rho must be >= 0");
    return divergence(kind, q, p) <= rho + 1e-12;
}

} // namespace drokit
