#include "bch/spectral.hpp"

#include <cmath>

namespace bch {

Spectral::Spectral(int n, double length) : n_(n), len_(length) {
    if (n < 16 || n % 2 != 0) throw DomainError("spectral grid needs even n >= 16");
    if (!(length > 0)) throw DomainError("spectral grid needs positive length");
    real_ = fftw_alloc_real(n_);
    spec_ = fftw_alloc_complex(n_ / 2 + 1);
    fwd_ = fftw_plan_dft_r2c_1d(n_, real_, spec_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(n_, spec_, real_, FFTW_ESTIMATE);
}

Spectral::~Spectral() {
    fftw_destroy_plan(inv_);
    fftw_destroy_plan(fwd_);
    fftw_free(spec_);
    fftw_free(real_);
}

std::vector<std::complex<double>> Spectral::fft(const std::vector<double>& f) {
    if (static_cast<int>(f.size()) != n_) throw DomainError("field size mismatch");
    for (int i = 0; i < n_; ++i) real_[i] = f[i];
    fftw_execute(fwd_);
    std::vector<std::complex<double>> out(n_modes());
    for (int j = 0; j < n_modes(); ++j) out[j] = {spec_[j][0], spec_[j][1]};
    return out;
}

std::vector<double> Spectral::ifft(const std::vector<std::complex<double>>& spec) {
    if (static_cast<int>(spec.size()) != n_modes()) throw DomainError("spectrum size mismatch");
    for (int j = 0; j < n_modes(); ++j) {
        spec_[j][0] = spec[j].real();
        spec_[j][1] = spec[j].imag();
    }
    fftw_execute(inv_);
    std::vector<double> out(n_);
    const double inv_n = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] = real_[i] * inv_n;
    return out;
}

std::vector<double> Spectral::derivative(const std::vector<double>& f, int order) {
    auto spec = fft(f);
    for (int j = 0; j < n_modes(); ++j) {
        const std::complex<double> ixi(0.0, xi(j));
        std::complex<double> mult = 1.0;
        for (int o = 0; o < order; ++o) mult *= ixi;
        spec[j] *= mult;
    }
    // drop the unpaired Nyquist mode for odd derivatives
    if (order % 2 == 1) spec[n_ / 2] = 0.0;
    return ifft(spec);
}

std::vector<double> Spectral::helmholtz_inverse(const std::vector<double>& m, double k) {
    std::vector<double> fluct(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) fluct[i] = m[i] - k;
    auto spec = fft(fluct);
    for (int j = 0; j < n_modes(); ++j) spec[j] /= 1.0 + xi(j) * xi(j);
    auto u = ifft(spec);
    for (auto& v : u) v += k;
    return u;
}

void Spectral::dealias_spec(std::vector<std::complex<double>>& spec) const {
    for (int j = n_ / 3 + 1; j < n_modes(); ++j) spec[j] = 0.0;
}

void Spectral::dealias(std::vector<double>& f) {
    auto spec = fft(f);
    dealias_spec(spec);
    f = ifft(spec);
}

double Spectral::h1_norm_sq(const std::vector<double>& w) {
    const auto spec = fft(w);
    const double scale = len_ / (static_cast<double>(n_) * n_);
    double total = 0;
    for (int j = 0; j < n_modes(); ++j) {
        const double weight = (j == 0 || j == n_ / 2) ? 1.0 : 2.0;
        total += weight * (1.0 + xi(j) * xi(j)) * std::norm(spec[j]);
    }
    return total * scale;
}

double Spectral::tail_fraction(const std::vector<double>& f) {
    const auto spec = fft(f);
    const int cut = n_ / 3;
    const int lo = cut - cut / 5;  // top of the retained band
    double peak = 0, tail = 0;
    for (int j = 0; j < n_modes(); ++j) {
        const double mag = std::abs(spec[j]);
        peak = std::max(peak, mag);
        if (j >= lo && j <= cut) tail = std::max(tail, mag);
    }
    return peak > 0 ? tail / peak : 0.0;
}

}  // namespace bch
