#pragma once

#include <vector>

#include "nsac/util.hpp"

namespace nsac {

// Periodic spectral derivatives on T^1 = [0, 2pi) with n uniform samples.
class Fft1D {
public:
    explicit Fft1D(int n);
    ~Fft1D();
    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int n() const { return n_; }
    std::vector<double> deriv(const std::vector<double>& f, int order) const;
    // (1 - coef d^2/ds^2) h = rhs with constant coef
    std::vector<double> solve_implicit_diffusion(const std::vector<double>& rhs, double coef) const;

private:
    int n_;
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
    mutable std::vector<double> real_;
    mutable std::vector<double> cplx_;  // interleaved re/im, n/2+1 pairs
};

// 5-point periodic Poisson / Helmholtz solves on an nx x ny box with square
// cells of size h. Poisson returns the zero-mean solution.
class Poisson2D {
public:
    Poisson2D(int nx, int ny, double h);
    ~Poisson2D();
    Poisson2D(const Poisson2D&) = delete;
    Poisson2D& operator=(const Poisson2D&) = delete;

    // lap p = rhs
    void solve_poisson(const std::vector<double>& rhs, std::vector<double>& p) const;
    // (a - b lap) x = rhs, a > 0, b >= 0
    void solve_helmholtz(const std::vector<double>& rhs, double a, double b,
                         std::vector<double>& x) const;

private:
    int nx_, ny_;
    double h_;
    std::vector<double> symbol_;  // discrete Laplacian eigenvalues, nx x (ny/2+1)
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
    mutable std::vector<double> real_;
    mutable std::vector<double> cplx_;
};

}  // namespace nsac
