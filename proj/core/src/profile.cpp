#include "atomfocus/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace atomfocus::profile {

namespace {

double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * (s.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= s.size()) return s.back();
    const double w = pos - i;
    return s[i] * (1.0 - w) + s[i + 1] * w;
}

// FWHM of a sampled curve around its global maximum, linear interpolation.
// Returns 0 if a half-maximum crossing is missing on either side.
double curve_fwhm(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t* peak_index = nullptr) {
    const auto it = std::max_element(y.begin(), y.end());
    const std::size_t ip = it - y.begin();
    if (peak_index) *peak_index = ip;
    const double half = *it / 2.0;
    double xl = std::numeric_limits<double>::quiet_NaN();
    double xr = xl;
    for (std::size_t i = ip; i-- > 0;) {
        if (y[i] <= half) {
            xl = x[i] + (x[i + 1] - x[i]) * (half - y[i]) / (y[i + 1] - y[i]);
            break;
        }
    }
    for (std::size_t i = ip + 1; i < y.size(); ++i) {
        if (y[i] <= half) {
            xr = x[i - 1] + (x[i] - x[i - 1]) * (half - y[i - 1]) / (y[i] - y[i - 1]);
            break;
        }
    }
    if (std::isnan(xl) || std::isnan(xr)) return 0.0;
    return xr - xl;
}

using ModelFn = std::function<double(double xi, const std::vector<double>& p)>;

// Levenberg least squares with a numeric central-difference Jacobian and a
// fixed damping schedule (start 1e-3, /3 on accept, *10 on reject).
struct LevenbergResult {
    std::vector<double> p;
    double residual;
    int iterations;
};

LevenbergResult levenberg(const std::vector<double>& x, const std::vector<double>& y,
                          ModelFn f, std::vector<double> p,
                          const std::function<void(std::vector<double>&)>& clamp) {
    const std::size_t n = x.size();
    const std::size_t m = p.size();
    auto chi2 = [&](const std::vector<double>& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = f(x[i], q) - y[i];
            s += r * r;
        }
        return s;
    };

    double lambda = 1e-3;
    double c2 = chi2(p);
    int it = 0;
    for (; it < 300; ++it) {
        // Jacobian J[i][j] and residuals
        std::vector<double> JtJ(m * m, 0.0), Jtr(m, 0.0);
        std::vector<double> col(m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double h = 1e-7 * std::max(std::abs(p[j]), 1e-12);
                auto pp = p;
                pp[j] += h;
                const double fp = f(x[i], pp);
                pp[j] -= 2 * h;
                const double fmn = f(x[i], pp);
                col[j] = (fp - fmn) / (2 * h);
            }
            const double r = f(x[i], p) - y[i];
            for (std::size_t j = 0; j < m; ++j) {
                Jtr[j] += col[j] * r;
                for (std::size_t k = 0; k <= j; ++k) JtJ[j * m + k] += col[j] * col[k];
            }
        }
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) JtJ[j * m + k] = JtJ[k * m + j];

        // (JtJ + lambda diag) d = -Jtr, Gaussian elimination w/ partial pivoting
        std::vector<double> A(JtJ);
        std::vector<double> b(m);
        for (std::size_t j = 0; j < m; ++j) {
            A[j * m + j] += lambda * std::max(JtJ[j * m + j], 1e-30);
            b[j] = -Jtr[j];
        }
        for (std::size_t ccol = 0; ccol < m; ++ccol) {
            std::size_t piv = ccol;
            for (std::size_t r2 = ccol + 1; r2 < m; ++r2)
                if (std::abs(A[r2 * m + ccol]) > std::abs(A[piv * m + ccol])) piv = r2;
            if (piv != ccol) {
                for (std::size_t k = 0; k < m; ++k) std::swap(A[ccol * m + k], A[piv * m + k]);
                std::swap(b[ccol], b[piv]);
            }
            const double d = A[ccol * m + ccol];
            if (std::abs(d) < 1e-300) { b[ccol] = 0; continue; }
            for (std::size_t r2 = ccol + 1; r2 < m; ++r2) {
                const double fac = A[r2 * m + ccol] / d;
                for (std::size_t k = ccol; k < m; ++k) A[r2 * m + k] -= fac * A[ccol * m + k];
                b[r2] -= fac * b[ccol];
            }
        }
        for (std::size_t j = m; j-- > 0;) {
            double s = b[j];
            for (std::size_t k = j + 1; k < m; ++k) s -= A[j * m + k] * b[k];
            b[j] = std::abs(A[j * m + j]) < 1e-300 ? 0.0 : s / A[j * m + j];
        }

        auto pnew = p;
        double step = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            pnew[j] += b[j];
            step += b[j] * b[j];
            scale += std::max(std::abs(p[j]), 1e-12) * std::max(std::abs(p[j]), 1e-12);
        }
        clamp(pnew);
        const double c2new = chi2(pnew);
        if (c2new <= c2) {
            const bool done = std::sqrt(step / scale) < 1e-10 || (c2 - c2new) <= 1e-14 * c2;
            p = pnew;
            c2 = c2new;
            lambda = std::max(lambda / 3.0, 1e-12);
            if (done) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    double ymean = 0.0;
    for (double v : y) ymean += v;
    ymean /= n;
    double den = 0.0;
    for (double v : y) den += (v - ymean) * (v - ymean);
    return {p, den > 0 ? std::sqrt(c2 / den) : std::sqrt(c2), it + 1};
}

std::vector<double> init_peak_params(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    const auto it = std::max_element(y.begin(), y.end());
    const std::size_t ip = it - y.begin();
    const double ymin = *std::min_element(y.begin(), y.end());
    double w = curve_fwhm(x, y);
    if (w <= 0.0) w = std::abs(x.back() - x.front()) / 4.0;
    return {*it - ymin, x[ip], w, ymin};
}

} // namespace

double silverman_bandwidth(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    std::vector<double> s(samples);
    std::sort(s.begin(), s.end());
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (n - 1));
    const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    const double a = std::min(sd, iqr / 1.34);
    return 1.06 * a * std::pow(static_cast<double>(n), -0.2);
}

KdeResult kde(const std::vector<double>& samples, double bandwidth,
              double resolution_floor, std::size_t grid_points) {
    if (samples.size() < 100)
        throw std::invalid_argument("kde: need at least 100 samples");
    KdeResult r;
    r.bandwidth = bandwidth > 0 ? bandwidth : silverman_bandwidth(samples);
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn, hi = *mx;
    if (r.bandwidth <= 0.0) {  // degenerate sample (all points equal)
        r.bandwidth = std::max(resolution_floor, (hi - lo)) / 100.0;
        if (r.bandwidth <= 0.0) r.bandwidth = 1e-30;
    }
    lo -= 3.0 * r.bandwidth;
    hi += 3.0 * r.bandwidth;
    r.grid.resize(grid_points);
    r.density.assign(grid_points, 0.0);
    const double dg = (hi - lo) / (grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) r.grid[i] = lo + dg * i;
    const double inv2h2 = 1.0 / (2.0 * r.bandwidth * r.bandwidth);
    const double norm = 1.0 / (samples.size() * r.bandwidth * std::sqrt(2.0 * std::numbers::pi));
    // kernel support is effectively +-6h; bin samples to avoid the full n*m product
    const double support = 6.0 * r.bandwidth;
    for (double sv : samples) {
        const auto i0 = static_cast<std::size_t>(std::max(0.0, (sv - support - lo) / dg));
        const auto i1 = std::min(grid_points - 1,
                                 static_cast<std::size_t>(std::max(0.0, (sv + support - lo) / dg)));
        for (std::size_t i = i0; i <= i1; ++i) {
            const double d = r.grid[i] - sv;
            r.density[i] += std::exp(-d * d * inv2h2);
        }
    }
    for (double& v : r.density) v *= norm;

    std::size_t ip = 0;
    r.fwhm = curve_fwhm(r.grid, r.density, &ip);
    r.peak_position = r.grid[ip];
    r.peak_density = r.density[ip];
    r.resolution_limited =
        r.fwhm <= std::max(3.0 * r.bandwidth, resolution_floor);
    return r;
}

FitResult fit_gaussian(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 5)
        throw std::invalid_argument("fit_gaussian: bad input");
    auto p0 = init_peak_params(x, y);
    const double fw2sig = 2.0 * std::sqrt(2.0 * std::log(2.0));
    std::vector<double> p = {p0[0], p0[1], p0[2] / fw2sig, p0[3]};  // A, c, sigma, B
    auto model = [](double xi, const std::vector<double>& q) {
        const double d = (xi - q[1]) / q[2];
        return q[0] * std::exp(-0.5 * d * d) + q[3];
    };
    auto clamp = [](std::vector<double>& q) { q[2] = std::abs(q[2]); };
    auto res = levenberg(x, y, model, p, clamp);
    if (res.residual > 0.9 && res.iterations >= 300)
        throw std::runtime_error("fit_gaussian: no convergence, residual " +
                                 std::to_string(res.residual));
    FitResult f;
    f.model = FitResult::Model::gaussian;
    f.amplitude = res.p[0];
    f.center = res.p[1];
    f.sigma = std::abs(res.p[2]);
    f.offset = res.p[3];
    f.fwhm = fw2sig * f.sigma;
    f.residual = res.residual;
    f.iterations = res.iterations;
    return f;
}

FitResult fit_pseudo_voigt(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 6)
        throw std::invalid_argument("fit_pseudo_voigt: bad input");
    auto p0 = init_peak_params(x, y);
    std::vector<double> p = {p0[0], p0[1], p0[2], 0.5, p0[3]};  // A, c, f, eta, B
    const double ln16 = 4.0 * std::log(2.0);
    auto model = [ln16](double xi, const std::vector<double>& q) {
        const double d2 = (xi - q[1]) * (xi - q[1]) / (q[2] * q[2]);
        const double G = std::exp(-ln16 * d2);
        const double L = 1.0 / (1.0 + 4.0 * d2);
        return q[0] * (q[3] * L + (1.0 - q[3]) * G) + q[4];
    };
    auto clamp = [](std::vector<double>& q) {
        q[2] = std::abs(q[2]);
        q[3] = std::clamp(q[3], 0.0, 1.0);
    };
    auto res = levenberg(x, y, model, p, clamp);
    if (res.residual > 0.9 && res.iterations >= 300)
        throw std::runtime_error("fit_pseudo_voigt: no convergence, residual " +
                                 std::to_string(res.residual));
    FitResult f;
    f.model = FitResult::Model::pseudo_voigt;
    f.amplitude = res.p[0];
    f.center = res.p[1];
    f.eta = res.p[3];
    f.offset = res.p[4];
    f.fwhm = std::abs(res.p[2]);
    f.residual = res.residual;
    f.iterations = res.iterations;
    return f;
}

PeakSet peak_stats(const std::vector<double>& x, const std::vector<double>& y,
                   double threshold, double window) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("peak_stats: bad input");
    const double ymax = *std::max_element(y.begin(), y.end());
    const double cut = threshold * ymax;

    std::vector<std::size_t> locs;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] >= y[i - 1] && y[i] > y[i + 1] && y[i] >= cut) locs.push_back(i);
    if (locs.empty()) throw std::runtime_error("peak_stats: no peak above threshold");

    if (window <= 0.0) {
        double minsep = std::abs(x.back() - x.front());
        for (std::size_t i = 1; i < locs.size(); ++i)
            minsep = std::min(minsep, std::abs(x[locs[i]] - x[locs[i - 1]]));
        window = locs.size() > 1 ? minsep : std::abs(x.back() - x.front());
    }

    PeakSet set;
    set.threshold = threshold;
    for (std::size_t ip : locs) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i] - x[ip]) <= window / 2.0) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
        Peak pk;
        pk.position = x[ip];
        pk.height = y[ip];
        if (xs.size() >= 6) {
            try {
                const auto fit = fit_pseudo_voigt(xs, ys);
                pk.fwhm = fit.fwhm;
                pk.position = fit.center;
                pk.height = fit.amplitude + fit.offset;
            } catch (const std::exception&) {
                pk.fwhm = curve_fwhm(xs, ys);
            }
        } else {
            pk.fwhm = curve_fwhm(xs, ys);
        }
        set.peaks.push_back(pk);
    }
    double s = 0.0;
    for (const auto& pk : set.peaks) s += pk.fwhm;
    set.mean_fwhm = s / set.peaks.size();
    return set;
}

} // namespace atomfocus::profile
