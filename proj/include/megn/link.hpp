#pragma once

#include <cmath>
#include <stdexcept>

#include "megn/common.hpp"

namespace megn {

// D [ps/nm/km] -> beta2 [s^2/m]; beta2 = -D*lambda^2/(2*pi*c).
inline double beta2_from_dispersion(double d_ps_nm_km, double lambda_nm) {
    if (lambda_nm <= 0.0) throw std::invalid_argument("wavelength must be positive");
    double d_si = d_ps_nm_km * 1e-6;  // s/m^2
    double lambda_m = lambda_nm * 1e-9;
    return -d_si * lambda_m * lambda_m / (2.0 * pi * speed_of_light_m_s);
}

// Physical-layer parameters of one homogeneous multi-span link. Inputs are in
// the engineering units of typical datasheets; everything downstream works in
// SI, converted once here.
struct LinkConfig {
    double alpha_db_per_km = 0.22;
    double dispersion_ps_nm_km = 16.7;
    double gamma_per_w_km = 1.3;
    double span_length_km = 100.0;
    int num_spans = 10;
    double center_wavelength_nm = 1550.0;
    double edfa_noise_figure_db = 6.0;

    void validate() const {
        if (alpha_db_per_km <= 0.0) throw std::invalid_argument("alpha_db_per_km must be positive");
        if (gamma_per_w_km <= 0.0) throw std::invalid_argument("gamma_per_w_km must be positive");
        validate_for_eval();
    }

    // Degenerate alpha = 0 or gamma = 0 links are legitimate in diagnostics
    // (linear-channel and lossless oracles); configs loaded from file go
    // through the strict form above.
    void validate_for_eval() const {
        if (alpha_db_per_km < 0.0) throw std::invalid_argument("alpha_db_per_km must be >= 0");
        if (gamma_per_w_km < 0.0) throw std::invalid_argument("gamma_per_w_km must be >= 0");
        if (span_length_km <= 0.0) throw std::invalid_argument("span_length_km must be positive");
        if (num_spans < 1) throw std::invalid_argument("num_spans must be >= 1");
        if (center_wavelength_nm <= 0.0) throw std::invalid_argument("center_wavelength_nm must be positive");
    }

    // Field attenuation in Np/m: exp(-2*alpha*L) is the span power loss.
    double alpha_np_per_m() const { return alpha_db_per_km * std::log(10.0) / 20.0 * 1e-3; }
    double beta2_s2_per_m() const { return beta2_from_dispersion(dispersion_ps_nm_km, center_wavelength_nm); }
    double gamma_per_w_m() const { return gamma_per_w_km * 1e-3; }
    double span_length_m() const { return span_length_km * 1e3; }
    double carrier_freq_hz() const { return speed_of_light_m_s / (center_wavelength_nm * 1e-9); }
    double span_gain_linear() const { return db_to_linear(alpha_db_per_km * span_length_km); }
};

// Root-raised-cosine spectrum, normalized so that the pulse has unit energy at
// the symbol period: integral of |S(f)|^2 df = 1/Rs. With that convention the
// per-polarization signal power equals E|a|^2.
struct PulseShape {
    double symbol_rate_hz = 32e9;
    double rolloff = 0.05;

    void validate() const {
        if (symbol_rate_hz <= 0.0) throw std::invalid_argument("symbol_rate_hz must be positive");
        if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("rolloff must be in [0,1]");
    }

    // |S(f)|^2 is the raised cosine; S itself is real, even and non-negative.
    double spectrum(double f_hz) const {
        double rs = symbol_rate_hz;
        double af = std::abs(f_hz);
        double f1 = 0.5 * (1.0 - rolloff) * rs;
        double f2 = 0.5 * (1.0 + rolloff) * rs;
        if (af <= f1) return 1.0 / rs;
        if (af >= f2) return 0.0;
        // sqrt((1+cos(x))/2) == cos(x/2) on the transition band
        return std::cos(0.5 * pi * (af - f1) / (rolloff * rs)) / rs;
    }

    double max_freq_hz() const { return 0.5 * (1.0 + rolloff) * symbol_rate_hz; }
};

}  // namespace megn
