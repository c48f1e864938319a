#include "fovc/convolve.hpp"

#include <algorithm>
#include <cmath>

namespace fovc {

namespace {

inline int reflect101(int i, int n) {
    // n == 1 degenerates to clamping at the single sample.
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

// One horizontal pass over a padded scratch row; the accumulation loop is
// a plain shifted multiply-add, which vectorizes.
void pass_x(const ScalarField& src, const std::vector<double>& k, Border border,
            ScalarField& dst) {
    const int w = src.width, h = src.height;
    const int r = static_cast<int>(k.size() / 2);
    std::vector<double> pad(static_cast<std::size_t>(w) + 2 * r);
    std::vector<double> wsum_col;
    if (border == Border::Renormalize) {
        wsum_col.resize(w);
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int t = -r; t <= r; ++t)
                if (x + t >= 0 && x + t < w) s += k[t + r];
            wsum_col[x] = s;
        }
    }
    for (int y = 0; y < h; ++y) {
        const double* in = &src.values[static_cast<std::size_t>(y) * w];
        double* out = &dst.values[static_cast<std::size_t>(y) * w];
        if (border == Border::Reflect101) {
            for (int i = -r; i < w + r; ++i) pad[i + r] = in[reflect101(i, w)];
        } else {
            std::fill(pad.begin(), pad.begin() + r, 0.0);
            std::fill(pad.end() - r, pad.end(), 0.0);
            std::copy(in, in + w, pad.begin() + r);
        }
        std::fill(out, out + w, 0.0);
        for (int t = 0; t < 2 * r + 1; ++t) {
            const double kv = k[t];
            const double* p = pad.data() + t;
            for (int x = 0; x < w; ++x) out[x] += kv * p[x];
        }
        if (border == Border::Renormalize) {
            for (int x = 0; x < w; ++x) {
                if (x >= r && x < w - r) continue;  // full kernel mass, already 1
                out[x] = wsum_col[x] != 0.0 ? out[x] / wsum_col[x] : 0.0;
            }
        }
    }
}

// One vertical pass, organized row-wise so accesses stay contiguous.
void pass_y(const ScalarField& src, const std::vector<double>& k, Border border,
            ScalarField& dst) {
    const int w = src.width, h = src.height;
    const int r = static_cast<int>(k.size() / 2);
    std::vector<double> wsum_row;
    if (border == Border::Renormalize) {
        wsum_row.resize(h);
        for (int y = 0; y < h; ++y) {
            double s = 0.0;
            for (int t = -r; t <= r; ++t)
                if (y + t >= 0 && y + t < h) s += k[t + r];
            wsum_row[y] = s;
        }
    }
    for (int y = 0; y < h; ++y) {
        double* out = &dst.values[static_cast<std::size_t>(y) * w];
        std::fill(out, out + w, 0.0);
        for (int t = -r; t <= r; ++t) {
            int yy = y + t;
            if (border == Border::Reflect101) {
                yy = reflect101(yy, h);
            } else if (yy < 0 || yy >= h) {
                continue;
            }
            const double kv = k[t + r];
            const double* in = &src.values[static_cast<std::size_t>(yy) * w];
            for (int x = 0; x < w; ++x) out[x] += kv * in[x];
        }
        if (border == Border::Renormalize && (y < r || y >= h - r)) {
            if (wsum_row[y] != 0.0) {
                const double inv = 1.0 / wsum_row[y];
                for (int x = 0; x < w; ++x) out[x] *= inv;
            } else {
                std::fill(out, out + w, 0.0);
            }
        }
    }
}

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("gaussian_kernel: sigma must be positive");
    const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(2 * r + 1);
    double s = 0.0;
    for (int i = -r; i <= r; ++i) {
        k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
        s += k[i + r];
    }
    for (double& v : k) v /= s;
    return k;
}

ScalarField sep_convolve(const ScalarField& src, const std::vector<double>& kx,
                         const std::vector<double>& ky, Border border) {
    if (kx.size() % 2 == 0 || ky.size() % 2 == 0)
        throw ValidationError("sep_convolve: kernels must have odd length");
    ScalarField tmp(src.width, src.height, src.deg_per_px);
    ScalarField dst(src.width, src.height, src.deg_per_px);
    pass_x(src, kx, border, tmp);
    pass_y(tmp, ky, border, dst);
    return dst;
}

ScalarField gaussian_blur(const ScalarField& src, double sigma, Border border) {
    const auto k = gaussian_kernel(sigma);
    return sep_convolve(src, k, k, border);
}

ScalarField local_mean(const ScalarField& src, double sigma) {
    return gaussian_blur(src, sigma, Border::Renormalize);
}

ScalarField local_variance(const ScalarField& src, double sigma) {
    // Centering on the global mean keeps E[x^2] - E[x]^2 well conditioned;
    // a constant field comes out exactly zero.
    const double center = src.mean();
    ScalarField shifted(src.width, src.height, src.deg_per_px);
    ScalarField sq(src.width, src.height, src.deg_per_px);
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double v = src.values[i] - center;
        shifted.values[i] = v;
        sq.values[i] = v * v;
    }
    ScalarField m = local_mean(shifted, sigma);
    ScalarField m2 = local_mean(sq, sigma);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.values[i] = std::max(0.0, m2.values[i] - m.values[i] * m.values[i]);
    return m;
}

}  // namespace fovc
