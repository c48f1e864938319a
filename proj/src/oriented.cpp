#include "fovc/oriented.hpp"

#include <cmath>

#include "fovc/convolve.hpp"

namespace fovc {

namespace {

// Freeman-Adelson polynomial fits; coordinates u = x / (sigma*sqrt(2)) give
// the window exp(-x^2 / (2 sigma^2)).
constexpr double kG2Amp = 0.9213;
constexpr double kG2bAmp = 1.843;
constexpr double kH2Amp = 0.9780;
constexpr double kH2bShift = 0.7515;
constexpr double kH2aShift = 2.254;

double transfer_even(const std::vector<double>& k, int radius, double w) {
    double s = 0.0;
    for (int i = -radius; i <= radius; ++i) s += k[i + radius] * std::cos(w * i);
    return s;
}

double transfer_odd(const std::vector<double>& k, int radius, double w) {
    double s = 0.0;
    for (int i = -radius; i <= radius; ++i) s += k[i + radius] * std::sin(w * i);
    return s;
}

}  // namespace

QuadratureBank make_quadrature_bank(double sigma_px) {
    if (!(sigma_px > 0.0)) throw ValidationError("make_quadrature_bank: sigma must be positive");
    QuadratureBank b;
    b.sigma = sigma_px;
    b.radius = std::max(2, static_cast<int>(std::ceil(4.0 * sigma_px)));
    const int n = 2 * b.radius + 1;
    b.g.resize(n);
    b.d1.resize(n);
    b.g2e.resize(n);
    b.h2a.resize(n);
    b.h2b.resize(n);
    const double s2 = sigma_px * std::sqrt(2.0);
    for (int i = -b.radius; i <= b.radius; ++i) {
        const double u = i / s2;
        const double e = std::exp(-u * u);
        b.g[i + b.radius] = e;
        b.d1[i + b.radius] = u * e;
        b.g2e[i + b.radius] = kG2Amp * (2.0 * u * u - 1.0) * e;
        b.h2a[i + b.radius] = kH2Amp * (u * u * u - kH2aShift * u) * e;
        b.h2b[i + b.radius] = kH2Amp * (u * u - kH2bShift) * e;
    }
    // Exact DC rejection for the even second-derivative factor.
    double s_g2 = 0.0, s_g = 0.0;
    for (int i = 0; i < n; ++i) {
        s_g2 += b.g2e[i];
        s_g += b.g[i];
    }
    for (int i = 0; i < n; ++i) b.g2e[i] -= (s_g2 / s_g) * b.g[i];
    // Match H2 amplitude to G2 at the band center.
    const double w0 = std::sqrt(2.0) / sigma_px;
    const double gt = std::fabs(transfer_even(b.g2e, b.radius, w0));
    const double ht = std::fabs(transfer_odd(b.h2a, b.radius, w0));
    if (ht > 0.0) {
        const double scale = gt / ht;
        for (int i = 0; i < n; ++i) {
            b.h2a[i] *= scale;
            b.h2b[i] *= scale;
        }
    }
    return b;
}

SteerableResponses steerable_responses(const ScalarField& field, const QuadratureBank& bank) {
    std::vector<double> d1b(bank.d1.size());
    for (std::size_t i = 0; i < d1b.size(); ++i) d1b[i] = kG2bAmp * bank.d1[i];
    SteerableResponses r;
    r.g2a = sep_convolve(field, bank.g2e, bank.g, Border::Reflect101);
    r.g2b = sep_convolve(field, d1b, bank.d1, Border::Reflect101);
    r.g2c = sep_convolve(field, bank.g, bank.g2e, Border::Reflect101);
    r.h2a = sep_convolve(field, bank.h2a, bank.g, Border::Reflect101);
    r.h2b = sep_convolve(field, bank.h2b, bank.d1, Border::Reflect101);
    r.h2c = sep_convolve(field, bank.d1, bank.h2b, Border::Reflect101);
    r.h2d = sep_convolve(field, bank.g, bank.h2a, Border::Reflect101);
    return r;
}

ScalarField steer_energy(const SteerableResponses& r, double theta) {
    // Steering runs clockwise in math coordinates because image y points down.
    const double c = std::cos(-theta), s = std::sin(-theta);
    const double ka = c * c, kb = -2.0 * c * s, kc = s * s;
    const double la = c * c * c, lb = -3.0 * c * c * s, lc = 3.0 * c * s * s, ld = -s * s * s;
    ScalarField out(r.g2a.width, r.g2a.height, r.g2a.deg_per_px);
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double g2 = ka * r.g2a.values[i] + kb * r.g2b.values[i] + kc * r.g2c.values[i];
        const double h2 = la * r.h2a.values[i] + lb * r.h2b.values[i] + lc * r.h2c.values[i] +
                          ld * r.h2d.values[i];
        out.values[i] = g2 * g2 + h2 * h2;
    }
    return out;
}

std::vector<ScalarField> oriented_energy(const ScalarField& luminance, int n_orientations,
                                         double sigma_px) {
    if (n_orientations < 2)
        throw ValidationError("oriented_energy: need at least 2 orientations");
    const QuadratureBank bank = make_quadrature_bank(sigma_px);
    const SteerableResponses r = steerable_responses(luminance, bank);
    std::vector<ScalarField> out;
    out.reserve(n_orientations);
    const double pi = std::acos(-1.0);
    for (int k = 0; k < n_orientations; ++k) out.push_back(steer_energy(r, k * pi / n_orientations));
    return out;
}

}  // namespace fovc
