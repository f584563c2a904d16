#pragma once

// FFTW-backed periodic spectral workspace on [0, L) with N samples: spectral
// derivatives, the Helmholtz inverse (1 - d^2/dx^2)^{-1}, 2/3-rule dealiasing,
// H^1 norms and the phase-shift correlation used by the orbital distance.

#include <fftw3.h>

#include <complex>
#include <vector>

#include "bch/errors.hpp"

namespace bch {

class Spectral {
  public:
    Spectral(int n, double length);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    int n() const { return n_; }
    double length() const { return len_; }
    double dx() const { return len_ / n_; }
    double xi(int j) const { return 2.0 * M_PI * j / len_; }
    int n_modes() const { return n_ / 2 + 1; }

    // unnormalized r2c / normalized c2r
    std::vector<std::complex<double>> fft(const std::vector<double>& f);
    std::vector<double> ifft(const std::vector<std::complex<double>>& spec);

    std::vector<double> derivative(const std::vector<double>& f, int order = 1);
    // u = k + (1 - d^2)^{-1}(m - k); exact on constants
    std::vector<double> helmholtz_inverse(const std::vector<double>& m, double k);
    // zero modes with j > N/3
    void dealias(std::vector<double>& f);
    void dealias_spec(std::vector<std::complex<double>>& spec) const;

    // int (w^2 + w_x^2) dx over the period
    double h1_norm_sq(const std::vector<double>& w);
    // largest |f_hat| near the dealiasing cutoff, relative to the overall peak
    double tail_fraction(const std::vector<double>& f);

  private:
    int n_;
    double len_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, inv_;
};

}  // namespace bch
