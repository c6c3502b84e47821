#include "nsac/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace nsac {

namespace {
// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft1D::Fft1D(int n) : n_(n), real_(n), cplx_(2 * (n / 2 + 1)) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(n, real_.data(),
                                reinterpret_cast<fftw_complex*>(cplx_.data()), FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cplx_.data()),
                                real_.data(), FFTW_ESTIMATE);
}

Fft1D::~Fft1D() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

std::vector<double> Fft1D::deriv(const std::vector<double>& f, int order) const {
    std::memcpy(real_.data(), f.data(), n_ * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(fwd_));
    const int nk = n_ / 2 + 1;
    for (int k = 0; k < nk; ++k) {
        double re = cplx_[2 * k], im = cplx_[2 * k + 1];
        double kk = k;
        if (order == 1) {
            // i k; kill the nyquist mode for odd derivatives
            if (2 * k == n_) { cplx_[2 * k] = 0; cplx_[2 * k + 1] = 0; continue; }
            cplx_[2 * k] = -kk * im;
            cplx_[2 * k + 1] = kk * re;
        } else if (order == 2) {
            cplx_[2 * k] = -kk * kk * re;
            cplx_[2 * k + 1] = -kk * kk * im;
        }
    }
    fftw_execute(static_cast<fftw_plan>(inv_));
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = real_[i] / n_;
    return out;
}

std::vector<double> Fft1D::solve_implicit_diffusion(const std::vector<double>& rhs,
                                                    double coef) const {
    std::memcpy(real_.data(), rhs.data(), n_ * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(fwd_));
    const int nk = n_ / 2 + 1;
    for (int k = 0; k < nk; ++k) {
        double denom = 1.0 + coef * double(k) * double(k);
        cplx_[2 * k] /= denom;
        cplx_[2 * k + 1] /= denom;
    }
    fftw_execute(static_cast<fftw_plan>(inv_));
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = real_[i] / n_;
    return out;
}

Poisson2D::Poisson2D(int nx, int ny, double h)
    : nx_(nx), ny_(ny), h_(h), symbol_(static_cast<size_t>(nx) * (ny / 2 + 1)),
      real_(static_cast<size_t>(nx) * ny), cplx_(2 * static_cast<size_t>(nx) * (ny / 2 + 1)) {
    const int nky = ny / 2 + 1;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nky; ++j) {
            double lx = (2.0 * std::cos(2.0 * M_PI * i / nx) - 2.0) / (h * h);
            double ly = (2.0 * std::cos(2.0 * M_PI * j / ny) - 2.0) / (h * h);
            symbol_[static_cast<size_t>(i) * nky + j] = lx + ly;
        }
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_2d(nx, ny, real_.data(),
                                reinterpret_cast<fftw_complex*>(cplx_.data()), FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_2d(nx, ny, reinterpret_cast<fftw_complex*>(cplx_.data()),
                                real_.data(), FFTW_ESTIMATE);
}

Poisson2D::~Poisson2D() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Poisson2D::solve_poisson(const std::vector<double>& rhs, std::vector<double>& p) const {
    std::memcpy(real_.data(), rhs.data(), real_.size() * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(fwd_));
    const int nky = ny_ / 2 + 1;
    for (size_t k = 0; k < symbol_.size(); ++k) {
        double lam = symbol_[k];
        if (lam == 0.0) {
            cplx_[2 * k] = 0.0;  // zero-mean gauge
            cplx_[2 * k + 1] = 0.0;
        } else {
            cplx_[2 * k] /= lam;
            cplx_[2 * k + 1] /= lam;
        }
    }
    (void)nky;
    fftw_execute(static_cast<fftw_plan>(inv_));
    p.resize(real_.size());
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    for (size_t i = 0; i < p.size(); ++i) p[i] = real_[i] * scale;
}

void Poisson2D::solve_helmholtz(const std::vector<double>& rhs, double a, double b,
                                std::vector<double>& x) const {
    std::memcpy(real_.data(), rhs.data(), real_.size() * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(fwd_));
    for (size_t k = 0; k < symbol_.size(); ++k) {
        double denom = a - b * symbol_[k];
        cplx_[2 * k] /= denom;
        cplx_[2 * k + 1] /= denom;
    }
    fftw_execute(static_cast<fftw_plan>(inv_));
    x.resize(real_.size());
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    for (size_t i = 0; i < x.size(); ++i) x[i] = real_[i] * scale;
}

}  // namespace nsac
